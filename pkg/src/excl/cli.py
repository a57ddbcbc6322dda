"""Config-driven experiment runner.

Usage: ``excl <subcommand> [--config file.json] [--seed N] [--trials N]
[--out dir] [--graph file|gen:spec]``.  A single JSON document supplies the
experiment plan; command-line flags override JSON fields, which override the
defaults below.  Unknown configuration keys are rejected.

Every output file embeds the hash of the resolved configuration and the seed,
and is byte-identical across reruns except for its timestamp line.  Reals are
written with repr(), i.e. shortest form that round-trips (at most 17
significant digits, '.' decimal).  Exit codes: 0 ok, 1 assertion failure,
2 configuration error.  The EXCL_THREADS environment variable caps the worker
pool used to fan out independent verification checks (default 1).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import bounds, chameleon, estimators, exact, graph, ink_chain, verify
from .errors import ConfigError, ExclError

DEFAULTS = {
    "seed": 0,
    "trials": 100_000,
    "out": "out",
    "graph": "gen:cycle:4",
    "process": "ex_k",
    "k": 2,
    "eps": [0.25, 0.125],
    "times": [0.5, 1.0, 2.0],
    "t": 1.0,
    "T": 1.0,
    "x": [0, 1],
    "m": 100,
    "steps": 300,
    "k_max": 6,
    "red": None,
    "method": "exact",
    "suite": "all",
    "state_cap": exact.STATE_CAP,
    "time_tol": 1e-6,
}

SUBCOMMANDS = ("exact-mix", "simulate", "chameleon-check", "ink-chain",
               "meeting", "easy-test", "phi-bound", "red-decay", "verify")


def resolve_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {args.config}: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigError("config document must be a JSON object")
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for flag in ("seed", "trials", "out", "graph"):
        val = getattr(args, flag.replace("-", "_"))
        if val is not None:
            cfg[flag] = val
    return cfg


def config_hash(cfg: dict) -> str:
    hashed = {k: v for k, v in cfg.items() if k != "out"}  # out never affects results
    canonical = json.dumps(hashed, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def load_graph(spec: str, seed: int) -> graph.WeightedGraph:
    if spec.startswith("gen:"):
        return graph.generate_graph(spec[4:], seed)
    try:
        return graph.graph_from_text(Path(spec).read_text())
    except OSError as e:
        raise ConfigError(f"cannot read graph file {spec}: {e}") from e


class Reporter:
    """Writes deterministic header-stamped report files into the out dir."""

    def __init__(self, cfg: dict, subcommand: str):
        self.outdir = Path(cfg["out"])
        self.outdir.mkdir(parents=True, exist_ok=True)
        self.stamp = (f"# excl {subcommand} config={config_hash(cfg)} seed={cfg['seed']}\n"
                      f"# timestamp {datetime.now(timezone.utc).isoformat()}\n")

    def write(self, name: str, header: list, rows: list) -> Path:
        path = self.outdir / name
        lines = [self.stamp + ",".join(header)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
        return path

    def write_json(self, name: str, payload: dict) -> Path:
        path = self.outdir / name
        path.write_text(self.stamp + json.dumps(payload, indent=2, default=_fmt) + "\n")
        return path


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_exact_mix(cfg: dict) -> int:
    g = load_graph(cfg["graph"], cfg["seed"])
    k = int(cfg["k"])
    rows = []
    for kind in ("rw", cfg["process"]):
        kk = 1 if kind == "rw" else k
        gen = exact.build_generator(g, kind, kk, cap=cfg["state_cap"])
        for eps in cfg["eps"]:
            rows.append((kind, kk, float(eps),
                         exact.mixing_time(gen, float(eps), cfg["time_tol"])))
    path = Reporter(cfg, "exact-mix").write(
        "exact_mix.csv", ["process", "k", "eps", "mixing_time"], rows)
    print(f"wrote {path}")
    return 0


def cmd_simulate(cfg: dict) -> int:
    from .event_stream import apply_interval, sample_stream

    g = load_graph(cfg["graph"], cfg["seed"])
    kind, k, t = cfg["process"], int(cfg["k"]), float(cfg["t"])
    if kind not in ("rw", "ex_k", "ip_k"):
        raise ConfigError("simulate drives the graphical construction: "
                          "process must be rw, ex_k or ip_k")
    trials = int(cfg["trials"])
    gen = exact.build_generator(g, kind, k, cap=cfg["state_cap"])
    start = gen.space.states[0]
    exact_law = exact.transition_distribution(gen, start, t)

    state0 = start if kind != "ex_k" else frozenset(start)
    stream = sample_stream(g, t * trials, modified=False, seed=int(cfg["seed"]))
    indices = []
    for i in range(trials):
        out = apply_interval(stream, state0, i * t, (i + 1) * t)
        key = tuple(sorted(out)) if kind == "ex_k" else out
        indices.append(gen.space.index[key])
    emp = estimators.empirical_distribution(indices, gen.space)
    est = estimators.tv_upper_ci(emp, exact_law, trials)
    rows = [(kind, k, t, trials, est.value, est.sigma, est.value <= 3 * est.sigma)]
    path = Reporter(cfg, "simulate").write(
        "simulate.csv", ["process", "k", "t", "trials", "tv", "sigma", "within_3sigma"], rows)
    print(f"wrote {path}")
    return 0 if est.value <= 3 * est.sigma else 1


def cmd_chameleon_check(cfg: dict) -> int:
    g = load_graph(cfg["graph"], cfg["seed"])
    rep = chameleon.identity_check(g, tuple(cfg["x"]), float(cfg["t"]), float(cfg["T"]),
                                   int(cfg["trials"]), seed=int(cfg["seed"]))
    rows = [(str(s), rep.mc[i], rep.exact[i], rep.sigma[i], rep.deviations[i])
            for i, s in enumerate(rep.space.states)]
    reporter = Reporter(cfg, "chameleon-check")
    path = reporter.write("chameleon_check.csv",
                          ["state", "mc", "exact", "sigma", "deviation"], rows)
    # one replayable sample trace alongside the statistics
    s0 = chameleon.init_chameleon(g, tuple(cfg["x"]))
    sample = chameleon.run_chameleon(g, s0, float(cfg["T"]), phases=4,
                                     seed=int(cfg["seed"]), record_events=True)
    trace_path = reporter.outdir / "chameleon_trace.txt"
    trace_path.write_text(reporter.stamp + chameleon.trace_to_text(sample))
    print(f"wrote {path}; max |deviation| = {rep.max_abs_deviation:.3f}")
    return 0 if rep.max_abs_deviation <= 3.0 else 1


def cmd_ink_chain(cfg: dict) -> int:
    m, steps = int(cfg["m"]), int(cfg["steps"])
    decay, z_mean = ink_chain.conditioned_decay_profile(m, steps)
    rows = [(ell, decay[ell], math.sqrt(m) * (71.0 / 72.0) ** ell, z_mean[ell])
            for ell in range(steps + 1)]
    path = Reporter(cfg, "ink-chain").write(
        "ink_chain.csv", ["l", "decay", "bound", "z_mean"], rows)
    print(f"wrote {path}")
    return 0


def cmd_meeting(cfg: dict) -> int:
    g = load_graph(cfg["graph"], cfg["seed"])
    rows = []
    for t in cfg["times"]:
        surv = exact.meeting_survival_matrix(g, float(t))
        mass = estimators.average_meeting_mass(g, float(t), method="exact")
        rows.append((float(t), float(surv.max()), mass.value))
    path = Reporter(cfg, "meeting").write(
        "meeting.csv", ["t", "sup_tail", "avg_meeting_mass"], rows)
    print(f"wrote {path}")
    return 0


def cmd_easy_test(cfg: dict) -> int:
    g = load_graph(cfg["graph"], cfg["seed"])
    v = estimators.easy_verdict(g, method=cfg["method"], trials=int(cfg["trials"]),
                                seed=int(cfg["seed"]))
    payload = {
        "easy": v.easy,
        "sup_tail": v.sup_tail.value,
        "sigma": v.sup_tail.sigma,
        "method": v.sup_tail.method,
        "threshold_time": v.threshold_time,
        "rw_mixing_quarter": v.rw_mixing_quarter,
    }
    path = Reporter(cfg, "easy-test").write_json("easy_test.json", payload)
    print(f"wrote {path}; easy={v.easy}")
    return 0


def cmd_phi_bound(cfg: dict) -> int:
    g = load_graph(cfg["graph"], cfg["seed"])
    phi_default = bounds.phi(g, bounds.default_paths(g))
    lower = bounds.phi_lower_bound(g)
    payload = {"phi_default_paths": phi_default, "phi_lower_bound": lower,
               "phi_times_log_n": phi_default * math.log(g.n)}
    k = int(cfg["k"])
    if exact._cardinality(g.n, "ex_k", k) <= 5000:
        gen = exact.build_generator(g, "ex_k", k)
        payload["ex_quarter_mixing"] = exact.mixing_time(gen, 0.25)
        payload["k"] = k
    path = Reporter(cfg, "phi-bound").write_json("phi_bound.json", payload)
    print(f"wrote {path}")
    return 0 if phi_default >= lower - 1e-12 else 1


def cmd_red_decay(cfg: dict) -> int:
    g = load_graph(cfg["graph"], cfg["seed"])
    k = int(cfg["k"])
    reds = int(cfg["red"]) if cfg["red"] else max(1, (g.n - k + 1) // 3)
    if k - 1 + reds >= g.n:
        raise ConfigError(f"red count {reds} too large for n={g.n}, k={k}")
    s0 = chameleon.chameleon_state(tuple(range(k - 1)), range(k - 1, k - 1 + reds),
                                   (), range(k - 1 + reds, g.n), g.n)
    rep = estimators.red_decay_estimate(g, s0, float(cfg["T"]), int(cfg["trials"]),
                                        seed=int(cfg["seed"]))
    payload = {
        "initial_red": rep.initial_red,
        "mean_red_before_2T": rep.estimate.value,
        "sigma": rep.estimate.sigma,
        "trials": rep.estimate.trials,
        "decay_bound": 0.999 * rep.initial_red,
        "hypothesis_violations": rep.hypothesis_violations,
    }
    path = Reporter(cfg, "red-decay").write_json("red_decay.json", payload)
    print(f"wrote {path}")
    if rep.hypothesis_violations:
        return 0  # bound not claimed, values reported
    return 0 if rep.estimate.value + 3 * rep.estimate.sigma <= 0.999 * rep.initial_red else 1


def cmd_verify(cfg: dict) -> int:
    suite = cfg["suite"]
    if suite == "all":
        ids = sorted(verify.ALL_CRITERIA)
    else:
        try:
            ids = sorted({int(s) for s in str(suite).split(",")})
        except ValueError:
            raise ConfigError(f"bad suite spec {suite!r}") from None
        unknown = [i for i in ids if i not in verify.ALL_CRITERIA]
        if unknown:
            raise ConfigError(f"unknown criteria {unknown}")
    workers = max(1, int(os.environ.get("EXCL_THREADS", "1") or 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(ids))) as pool:
            results = list(pool.map(lambda i: verify.ALL_CRITERIA[i](), ids))
    else:
        results = [verify.ALL_CRITERIA[i]() for i in ids]
    rows = [(r.criterion, "PASS" if r.passed else "FAIL", r.name, r.summary)
            for r in results]
    path = Reporter(cfg, "verify").write(
        "verify.csv", ["criterion", "status", "name", "summary"],
        [(c, s, n, f'"{m}"') for c, s, n, m in rows])
    for r in results:
        print(r.line())
    print(f"wrote {path}")
    return 0 if all(r.passed for r in results) else 1


HANDLERS = {
    "exact-mix": cmd_exact_mix,
    "simulate": cmd_simulate,
    "chameleon-check": cmd_chameleon_check,
    "ink-chain": cmd_ink_chain,
    "meeting": cmd_meeting,
    "easy-test": cmd_easy_test,
    "phi-bound": cmd_phi_bound,
    "red-decay": cmd_red_decay,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="excl",
        description="Exclusion-process simulation and exact verification runner.")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="JSON experiment plan")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--graph", default=None, help="graph file or gen:kind:params")
    parser.add_argument("--suite", default=None,
                        help="verify only: 'all' or comma-separated criterion ids")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.suite is not None:
            cfg["suite"] = args.suite
        return HANDLERS[args.subcommand](cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2
    except ExclError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
