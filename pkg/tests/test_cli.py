import json
import math

from excl.cli import main
from excl.graph import cycle_graph, graph_to_text


def run_cli(args):
    return main(args)


def test_exact_mix_values(tmp_path):
    out = tmp_path / "out"
    code = run_cli(["exact-mix", "--graph", "gen:complete:2", "--out", str(out)])
    assert code == 0
    rows = [ln for ln in (out / "exact_mix.csv").read_text().splitlines()
            if not ln.startswith("#")]
    header, *data = rows
    assert header == "process,k,eps,mixing_time"
    row = dict(zip(header.split(","), data[0].split(",")))
    assert row["process"] == "rw"
    assert abs(float(row["mixing_time"]) - math.log(2) / 2) <= 1e-5


def test_outputs_reproducible_modulo_timestamp(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run_cli(["ink-chain", "--out", str(out), "--seed", "4"]) == 0
    strip = lambda p: [ln for ln in (p / "ink_chain.csv").read_text().splitlines()
                       if not ln.startswith("# timestamp")]
    assert strip(a) == strip(b)


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "plan.json"
    cfg.write_text(json.dumps({"graph": "gen:cycle:4", "m": 7, "steps": 5}))
    out = tmp_path / "o"
    assert run_cli(["ink-chain", "--config", str(cfg), "--out", str(out)]) == 0
    body = (out / "ink_chain.csv").read_text().splitlines()
    data = [ln for ln in body if not ln.startswith("#")]
    assert len(data) == 1 + 6  # header plus l = 0..5


def test_unknown_config_key_rejected(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run_cli(["exact-mix", "--config", str(cfg)]) == 2


def test_malformed_config_rejected(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json")
    assert run_cli(["exact-mix", "--config", str(cfg)]) == 2


def test_bad_graph_spec_rejected(tmp_path):
    assert run_cli(["exact-mix", "--graph", "gen:klein_bottle:4",
                    "--out", str(tmp_path)]) == 2


def test_graph_file_input(tmp_path):
    gfile = tmp_path / "c4.txt"
    gfile.write_text(graph_to_text(cycle_graph(4)))
    out = tmp_path / "o"
    assert run_cli(["meeting", "--graph", str(gfile), "--out", str(out)]) == 0
    assert (out / "meeting.csv").exists()


def test_simulate_subcommand(tmp_path):
    out = tmp_path / "o"
    code = run_cli(["simulate", "--graph", "gen:cycle:4", "--trials", "20000",
                    "--out", str(out), "--seed", "2"])
    assert code == 0
    data = [ln for ln in (out / "simulate.csv").read_text().splitlines()
            if not ln.startswith("#")]
    assert data[1].endswith("True")


def test_chameleon_check_subcommand(tmp_path):
    out = tmp_path / "o"
    cfg = tmp_path / "plan.json"
    cfg.write_text(json.dumps({"graph": "gen:path:3", "x": [0, 1],
                               "t": 0.8, "T": 0.5, "trials": 20000}))
    assert run_cli(["chameleon-check", "--config", str(cfg), "--out", str(out)]) == 0
    trace_text = (out / "chameleon_trace.txt").read_text()
    assert trace_text.splitlines()[2].startswith("chameleon T=")


def test_easy_and_phi_subcommands(tmp_path):
    out = tmp_path / "o"
    assert run_cli(["easy-test", "--graph", "gen:complete:2", "--out", str(out)]) == 0
    payload = json.loads("\n".join(
        ln for ln in (out / "easy_test.json").read_text().splitlines()
        if not ln.startswith("#")))
    assert payload["easy"] is True
    assert run_cli(["phi-bound", "--graph", "gen:cycle:4", "--out", str(out)]) == 0
    phi = json.loads("\n".join(
        ln for ln in (out / "phi_bound.json").read_text().splitlines()
        if not ln.startswith("#")))
    assert phi["phi_default_paths"] >= phi["phi_lower_bound"] - 1e-12


def test_red_decay_subcommand(tmp_path):
    out = tmp_path / "o"
    cfg = tmp_path / "plan.json"
    cfg.write_text(json.dumps({"graph": "gen:complete:300", "k": 150,
                               "red": 50, "T": 1.0, "trials": 2000}))
    assert run_cli(["red-decay", "--config", str(cfg), "--out", str(out)]) == 0


def test_verify_subset_and_exit_codes(tmp_path):
    out = tmp_path / "o"
    assert run_cli(["verify", "--suite", "2,3", "--out", str(out)]) == 0
    body = (out / "verify.csv").read_text()
    assert "PASS" in body and "FAIL" not in body
    assert run_cli(["verify", "--suite", "nope", "--out", str(out)]) == 2
    assert run_cli(["verify", "--suite", "55", "--out", str(out)]) == 2


def test_verify_threaded_matches_serial(tmp_path, monkeypatch):
    out1, out2 = tmp_path / "s", tmp_path / "t"
    assert run_cli(["verify", "--suite", "2,3", "--out", str(out1)]) == 0
    monkeypatch.setenv("EXCL_THREADS", "2")
    assert run_cli(["verify", "--suite", "2,3", "--out", str(out2)]) == 0
    strip = lambda p: [ln for ln in (p / "verify.csv").read_text().splitlines()
                       if not ln.startswith("#")]
    assert strip(out1) == strip(out2)
