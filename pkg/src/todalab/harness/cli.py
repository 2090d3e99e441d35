"""``todalab`` command line: verify, integrate, table.

Exit status: 0 pass, 1 a check failed, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Sequence

from ..geomcore import Q, SamplerConfig
from ..geomcore.charts import ChartError, SingularPoint
from .config import SYSTEMS, ConfigError, RunConfig, load_json, merge
from .registry import SYSTEM_SPECS, resolve_dim

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _dim_of(ns) -> Any:
    given = [v for v in (ns.N, ns.n, ns.rank) if v is not None]
    if len(given) > 1:
        raise ConfigError("give only one of --N, --n, --rank")
    return given[0] if given else None


def _run_one(system: str, dim: Any, name: str, cfg: SamplerConfig) -> tuple[list[dict], float]:
    spec = SYSTEM_SPECS[system]
    check = next(c for c in spec.checks if c.name == name)
    t0 = time.perf_counter()
    reps = check.run(dim, cfg)
    return [r.to_json() for r in reps], time.perf_counter() - t0


def run_verify(cfg: RunConfig) -> dict:
    """Run the selected suites and assemble the report in declared order."""
    spec = SYSTEM_SPECS[cfg.system]
    dim = resolve_dim(spec, cfg.dim)
    chosen = spec.select(cfg.checks, dim)
    if not chosen:
        raise ConfigError("no checks selected")
    sc = cfg.sampler()
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            futs = [ex.submit(_run_one, cfg.system, dim, c.name, sc) for c in chosen]
            results = [f.result() for f in futs]
    else:
        results = [_run_one(cfg.system, dim, c.name, sc) for c in chosen]
    checks, timing = [], []
    for c, (reps, secs) in zip(chosen, results):
        checks.extend(reps)
        timing.append({"check": c.name, "seconds": round(secs, 6)})
    echo = cfg.echo()
    echo["dim"] = cfg.dim if not isinstance(dim, int) else dim
    echo["checks"] = [c.name for c in chosen]
    verdict = "pass" if all(r["verdict"] == "pass" for r in checks) else "fail"
    return {"schema": SCHEMA, "config": echo, "checks": checks, "verdict": verdict, "timing": timing}


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _points(text: str | None, exact: bool) -> list | None:
    if text is None:
        return None
    try:
        parts = [p.strip() for p in text.split(",") if p.strip()]
        return [Q(p) if exact else float(Q(p)) for p in parts]
    except ValueError:
        raise ConfigError(f"cannot parse point {text!r}; use comma-separated numbers such as 1,-2,3/2") from None


# subcommands --------------------------------------------------------------------------------

def cmd_verify(ns) -> int:
    file_cfg = load_json(ns.config) if ns.config else {}
    flags = {
        "system": ns.system, "dim": _dim_of(ns), "checks": ns.checks, "seed": ns.seed,
        "samples": ns.samples, "mode": ns.mode, "tol": ns.tol, "out": ns.out, "jobs": ns.jobs,
    }
    merged = merge(file_cfg, flags)
    if "system" not in merged:
        raise ConfigError(f"--system is required; valid systems: {', '.join(SYSTEMS)}")
    cfg = RunConfig(**merged)
    report = run_verify(cfg)
    _write(json.dumps(report, indent=2) + "\n", cfg.out)
    if cfg.out:
        fails = [c["name"] for c in report["checks"] if c["verdict"] != "pass"]
        print(f"{report['verdict']}: {len(report['checks'])} checks, {len(fails)} failed", file=sys.stderr)
        for f in fails:
            print(f"  FAIL {f}", file=sys.stderr)
    return EXIT_PASS if report["verdict"] == "pass" else EXIT_FAIL


def cmd_integrate(ns) -> int:
    from ..laxode import FlowBlowUp, drift_report, integrate_flow

    if ns.system is None:
        raise ConfigError(f"--system is required; valid systems: {', '.join(SYSTEMS)}")
    spec = SYSTEM_SPECS[ns.system]
    dim = resolve_dim(spec, _dim_of(ns))
    if not ns.step > 0:
        raise ConfigError("step must be > 0")
    if not ns.t_end >= 0:
        raise ConfigError("t-end must be >= 0")
    tgt = spec.target(dim)
    seed = ns.seed if ns.seed is not None else SamplerConfig().seed
    x0 = _points(ns.point, exact=False) or tgt.point(seed)
    if len(x0) != tgt.flow.chart.dim:
        raise ConfigError(f"point needs {tgt.flow.chart.dim} coordinates ({', '.join(tgt.flow.chart.labels)})")
    for f in tgt.invariants:
        try:
            f.check_point(x0)
        except SingularPoint as e:
            raise ConfigError(f"initial point is singular for {f.name}: {e}") from None
    try:
        traj = integrate_flow(tgt.flow, x0, ns.t_end, ns.step, halve=ns.halve)
    except FlowBlowUp as e:
        print(f"integration failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    drift = drift_report(traj, tgt.invariants)
    out = {
        "schema": SCHEMA,
        "config": {"system": ns.system, "dim": dim if isinstance(dim, int) else _dim_of(ns), "t_end": ns.t_end,
                   "step": ns.step, "seed": seed, "point": list(map(float, x0))},
        "drift": drift.to_json(),
    }
    if ns.halve:
        out["richardson_error"] = traj.richardson_error()
    verdict = EXIT_PASS
    if ns.tol is not None:
        out["tol"] = ns.tol
        out["verdict"] = "pass" if drift.max_drift <= ns.tol else "fail"
        verdict = EXIT_PASS if out["verdict"] == "pass" else EXIT_FAIL
    csv_text = traj.to_csv()
    if ns.out:
        _write(csv_text, ns.out)
        drift_path = ns.drift_out or (ns.out.rsplit(".", 1)[0] + ".drift.json")
        _write(json.dumps(out, indent=2) + "\n", drift_path)
    else:
        sys.stdout.write(csv_text)
        if ns.drift_out:
            _write(json.dumps(out, indent=2) + "\n", ns.drift_out)
        else:
            sys.stderr.write(json.dumps(out, indent=2) + "\n")
    return verdict


def cmd_table(ns) -> int:
    if ns.system is None:
        raise ConfigError(f"--system is required; valid systems: {', '.join(SYSTEMS)}")
    spec = SYSTEM_SPECS[ns.system]
    dim = resolve_dim(spec, _dim_of(ns))
    valid = spec.table_indices(dim)
    if ns.bracket not in valid:
        shown = ", ".join(valid) if valid else "none"
        raise ConfigError(f"bad bracket index {ns.bracket!r} for {ns.system}; valid indices: {shown}")
    point = _points(ns.point, exact=True)
    try:
        table = spec.table(dim, ns.bracket, point)
    except (ChartError, SingularPoint) as e:
        raise ConfigError(f"bad point: {e}") from None
    _write(json.dumps(table, indent=2) + "\n", ns.out)
    return EXIT_PASS


# parser ---------------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", choices=SYSTEMS)
    p.add_argument("--N", type=int, help="lattice size (classical, relativistic)")
    p.add_argument("--n", type=int, help="rank of B_n or matrix size of gl(n)")
    p.add_argument("--rank", help="lie-catalog: a label such as B3 or G2, or an integer rank")
    p.add_argument("--seed", type=lambda s: int(s, 0))
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="todalab", description="Verify and integrate Toda-type multi-Hamiltonian systems.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run identity checks and write a JSON report")
    _common(v)
    v.add_argument("--checks", help="comma-separated check names, or 'all'")
    v.add_argument("--samples", type=int)
    v.add_argument("--mode", choices=("exact", "float"))
    v.add_argument("--tol", type=float)
    v.add_argument("--jobs", type=int, help="worker processes (default 1)")
    v.add_argument("--config", help="JSON config file; flags override its values")
    v.add_argument("--list", action="store_true", help="list the checks of --system and exit")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("integrate", help="RK4 trajectory as CSV plus a drift report")
    _common(i)
    i.add_argument("--point", help="initial point, comma-separated (default: seeded small point)")
    i.add_argument("--t-end", type=float, default=10.0)
    i.add_argument("--step", type=float, default=1e-3)
    i.add_argument("--halve", action="store_true", help="also run at step/2 for a Richardson estimate")
    i.add_argument("--tol", type=float, help="fail (exit 1) if any invariant drifts more than this")
    i.add_argument("--drift-out", help="path for the drift JSON")
    i.set_defaults(func=cmd_integrate)

    t = sub.add_parser("table", help="dump a bracket as JSON")
    _common(t)
    t.add_argument("--bracket", default="1", help="bracket index (or 'rational' where available)")
    t.add_argument("--point", help="evaluate at a point, comma-separated rationals")
    t.set_defaults(func=cmd_table)
    return ap


def _list(ns) -> int:
    if ns.system is None:
        raise ConfigError(f"--system is required; valid systems: {', '.join(SYSTEMS)}")
    for c in SYSTEM_SPECS[ns.system].checks:
        tag = " [literal, not in 'all']" if c.literal else ""
        print(f"{c.name:18} {c.doc}{tag}")
    return EXIT_PASS


def main(argv: Sequence[str] | None = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        if ns.cmd == "verify" and ns.list:
            return _list(ns)
        return ns.func(ns)
    except ConfigError as e:
        print(f"todalab: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ChartError as e:
        print(f"todalab: error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
