"""Command-line surface: reproducible evaluations, sweeps and file emission.

Exit codes: 0 success, 1 domain/convergence failure (one-line diagnostic on
stderr), 2 usage errors.  Sweep files are written atomically (temp file in
the target directory, then rename); the timestamp lives on its own header
line so reruns are byte-identical apart from that line.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from . import __version__
from .bounds import BoundKind, envelope, generalized_log, sweep_check
from .config import DEFAULT_CONFIG
from .crossings import (
    find_mode_m,
    find_x_ab,
    find_x_ab_lambda,
    find_x_star,
    find_yz,
    probe_conjecture,
)
from .errors import MittagError
from .gammaf import gamma, pochhammer_ratio
from .abel import (
    AbelProblem,
    RLCauchyProblem,
    solve_caputo,
    solve_rl_cauchy,
    solve_second_kind,
)
from .mleval import MLParams, Method, eval_ml, eval_ml_power, eval_ml_rescaled, resolve_method
from .sampling import GeneratorSpec, sample

SWEEP_COLUMNS = {
    "eval": ("alpha", "beta", "x", "value", "method"),
    "crossing": ("alpha", "beta", "lam", "root", "lo", "hi"),
    "bounds": ("kind", "alpha", "beta", "x", "lo", "value", "hi"),
}


@dataclass(frozen=True)
class Range:
    start: float
    stop: float
    count: int
    scale: str = "linear"  # or "geometric"

    def points(self) -> np.ndarray:
        if self.count < 1:
            raise MittagError(f"range count must be >= 1, got {self.count}")
        if self.count == 1:
            return np.array([self.start])
        if self.scale == "geometric":
            return np.geomspace(self.start, self.stop, self.count)
        if self.scale == "linear":
            return np.linspace(self.start, self.stop, self.count)
        raise MittagError(f"unknown range scale {self.scale!r}")


@dataclass(frozen=True)
class SweepSpec:
    task: str
    ranges: dict  # name -> Range
    fixed: dict = field(default_factory=dict)
    family: str = "raw"  # eval task: raw | power | rescaled_gamma | rescaled_poch
    output: str = "csv"
    seed: int = 0
    out_path: str = "sweep.csv"

    @classmethod
    def from_json(cls, text: str) -> "SweepSpec":
        raw = json.loads(text)
        ranges = {k: Range(**v) for k, v in raw.get("ranges", {}).items()}
        return cls(
            task=raw["task"],
            ranges=ranges,
            fixed=raw.get("fixed", {}),
            family=raw.get("family", "raw"),
            output=raw.get("output", "csv"),
            seed=int(raw.get("seed", 0)),
            out_path=raw.get("out_path", "sweep.csv"),
        )


@dataclass(frozen=True)
class RunRecord:
    spec: dict
    version: str
    timestamp: str
    rows: tuple
    columns: tuple


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mittag-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _record_to_csv(record: RunRecord) -> str:
    buf = io.StringIO()
    buf.write(f"# generated_at={record.timestamp}\n")
    buf.write(f"# mittag_version={record.version}\n")
    buf.write(f"# spec={json.dumps(record.spec, sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(record.columns)
    for row in record.rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _eval_value(family: str, alpha: float, beta: float, x: float) -> tuple[float, str]:
    params = MLParams(alpha, beta)
    if family == "raw":
        return eval_ml(params, x), resolve_method(params, x).value
    if family == "power":
        sign = -1 if x < 0 else 1
        return eval_ml_power(alpha, abs(x), sign), "auto"
    if family == "rescaled_gamma":  # E_alpha(Gamma(1+alpha) x)
        arg = gamma(1.0 + alpha) * x
        return eval_ml(params, arg), resolve_method(params, arg).value
    if family == "rescaled_poch":  # Gamma(beta) E_{a,b}((beta)_alpha x)
        arg = pochhammer_ratio(beta, alpha) * x
        return eval_ml_rescaled(params, arg), resolve_method(params, arg).value
    raise MittagError(f"unknown eval family {family!r}")


def run_sweep(spec: SweepSpec) -> RunRecord:
    """Evaluate the sweep grid and return the record (no file I/O here)."""
    grids = {name: rng.points() for name, rng in spec.ranges.items()}
    fixed = dict(spec.fixed)

    def axis(name: str, default=None):
        if name in grids:
            return [float(v) for v in grids[name]]
        if name in fixed:
            return [float(fixed[name])]
        if default is None:
            raise MittagError(f"sweep needs a value or range for {name!r}")
        return [default]

    rows = []
    if spec.task == "eval":
        for a in axis("alpha"):
            for b in axis("beta", 1.0):
                for x in axis("x"):
                    value, method = _eval_value(spec.family, a, b, x)
                    rows.append((a, b, x, value, method))
        columns = SWEEP_COLUMNS["eval"]
    elif spec.task == "crossing":
        for a in axis("alpha"):
            for b in axis("beta"):
                if not a < b:
                    continue
                for lam in axis("lam", 1.0):
                    res = (
                        find_x_ab(a, b)
                        if lam == 1.0
                        else find_x_ab_lambda(a, b, lam)
                    )
                    rows.append((a, b, lam, res.root, res.bracket_lo, res.bracket_hi))
        columns = SWEEP_COLUMNS["crossing"]
    elif spec.task == "bounds":
        kind = BoundKind(fixed.get("kind", "unif"))
        for a in axis("alpha"):
            for b in axis("beta", math.nan):
                for x in axis("x"):
                    bb = None if math.isnan(b) else b
                    env = envelope(kind, a, bb, x)
                    rows.append((kind.value, a, b, x, env.lo, env.value, env.hi))
        columns = SWEEP_COLUMNS["bounds"]
    else:
        raise MittagError(f"sweep task {spec.task!r} not supported")

    return RunRecord(
        spec={
            "task": spec.task,
            "ranges": {k: asdict(v) for k, v in spec.ranges.items()},
            "fixed": fixed,
            "family": spec.family,
            "seed": spec.seed,
        },
        version=__version__,
        timestamp=datetime.now(timezone.utc).isoformat(),
        rows=tuple(rows),
        columns=columns,
    )


def emit_record(record: RunRecord, path: str, output: str = "csv") -> None:
    """Write a run record to disk atomically."""
    if output == "csv":
        _atomic_write(path, _record_to_csv(record))
    elif output == "json":
        payload = {
            "spec": record.spec,
            "version": record.version,
            "timestamp": record.timestamp,
            "columns": list(record.columns),
            "rows": [list(r) for r in record.rows],
        }
        _atomic_write(path, json.dumps(payload, indent=1) + "\n")
    else:
        raise MittagError(f"unknown output format {output!r}")


def emit_plot_data(record: RunRecord, path: str) -> None:
    """Tidy CSV (one observation per row) for external plotting tools."""
    _atomic_write(path, _record_to_csv(record))


# ---------------------------------------------------------------------------
# argument parsing and dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mittag",
        description="Mittag-Leffler evaluations, crossing points, bounds, "
        "samplers and Abelian integral equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate E_{alpha,beta}")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--method", default="auto",
                   choices=[m.value for m in Method])
    p.add_argument("--family", default="raw",
                   choices=["raw", "power", "rescaled_gamma", "rescaled_poch"])
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("crossing", help="certified crossing points")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--lam", "--lambda", dest="lam", type=float)
    p.add_argument("--kind", default="xab", choices=["xab", "yz", "xstar", "mode"])

    p = sub.add_parser("bounds", help="bound envelopes")
    p.add_argument("--kind", required=True, choices=[k.value for k in BoundKind])
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--x", type=float)

    p = sub.add_parser("sample", help="seeded Monte Carlo batches")
    p.add_argument("--kind", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--truncation", type=int)
    p.add_argument("--n", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the draws as single-column CSV")

    p = sub.add_parser("abel", help="fractional integral equation solvers")
    p.add_argument("--problem", default="fde1", choices=["fde1", "fde2", "caputo"])
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--lam", "--lambda", dest="lam", type=float, required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--forcing", default="one",
                   help="built-in name ({one,zero,exp,step}) or two-column CSV path")
    p.add_argument("--t-max", type=float, default=2.0)
    p.add_argument("--nodes", type=int, default=2048)
    p.add_argument("--out", help="write (x, f) as CSV")

    p = sub.add_parser("probe", help="numeric probes of the open conjectures")
    p.add_argument("--id", required=True, dest="conjecture_id")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=20260810)

    p = sub.add_parser("sweep", help="grid sweep driven by a JSON spec file")
    p.add_argument("--spec", required=True)

    return parser


def _forcing_from_arg(arg: str, grid: np.ndarray) -> np.ndarray:
    from .abel import BUILTIN_FORCINGS, _resolve_forcing

    if arg in BUILTIN_FORCINGS:
        return _resolve_forcing(arg, grid)
    xs, gs = [], []
    with open(arg, newline="") as handle:
        for row in csv.reader(handle):
            if not row or row[0].startswith("#") or row[0] == "x":
                continue
            xs.append(float(row[0]))
            gs.append(float(row[1]))
    return np.interp(grid, np.array(xs), np.array(gs))


def _cmd_eval(ns) -> int:
    value, method = _eval_value(ns.family, ns.alpha, ns.beta, ns.x)
    if ns.method != "auto" and ns.family == "raw":
        value = eval_ml(MLParams(ns.alpha, ns.beta), ns.x, Method(ns.method))
        method = ns.method
    if ns.json:
        print(json.dumps({"alpha": ns.alpha, "beta": ns.beta, "x": ns.x,
                          "value": value, "method": method}))
    else:
        print(repr(value))
    return 0


def _cmd_crossing(ns) -> int:
    if ns.kind == "mode":
        crossing, ext = find_mode_m(ns.alpha)
        print(json.dumps({"kind": "mode", "alpha": ns.alpha,
                          "argmax": ext.argmax, "value": ext.value,
                          "bracket": [crossing.bracket_lo, crossing.bracket_hi],
                          "certified": crossing.certified}))
        return 0
    if ns.beta is None:
        raise MittagError("this crossing kind needs --beta")
    if ns.kind == "xab":
        res = (
            find_x_ab(ns.alpha, ns.beta)
            if ns.lam is None
            else find_x_ab_lambda(ns.alpha, ns.beta, ns.lam)
        )
        payload = {"kind": "xab", "alpha": ns.alpha, "beta": ns.beta,
                   "lam": 1.0 if ns.lam is None else ns.lam,
                   "root": res.root, "bracket": [res.bracket_lo, res.bracket_hi],
                   "residual": res.residual, "iterations": res.iterations,
                   "certified": res.certified}
    elif ns.kind == "yz":
        y, z = find_yz(ns.alpha, ns.beta)
        payload = {"kind": "yz", "alpha": ns.alpha, "beta": ns.beta,
                   "y": y.root, "z": z.root,
                   "certified": y.certified and z.certified}
    else:
        res = find_x_star(ns.alpha, ns.beta)
        payload = {"kind": "xstar", "alpha": ns.alpha, "beta": ns.beta,
                   "root": res.root, "bracket": [res.bracket_lo, res.bracket_hi],
                   "certified": res.certified}
    print(json.dumps(payload))
    return 0


def _cmd_bounds(ns) -> int:
    env = envelope(BoundKind(ns.kind), ns.alpha, ns.beta, ns.x)
    print(json.dumps({"kind": ns.kind, "alpha": ns.alpha, "beta": ns.beta,
                      "x": ns.x, "lo": env.lo, "value": env.value, "hi": env.hi,
                      "slack_lo": env.slack_lo, "slack_hi": env.slack_hi,
                      "holds": env.holds}))
    return 0


def _cmd_sample(ns) -> int:
    spec = GeneratorSpec(kind=ns.kind, alpha=ns.alpha, beta=ns.beta,
                         truncation=ns.truncation)
    batch = sample(spec, ns.n, ns.seed)
    if ns.out:
        buf = io.StringIO()
        buf.write("value\n")
        for v in batch.values:
            buf.write(f"{float(v)!r}\n")
        _atomic_write(ns.out, buf.getvalue())
    summary = {"kind": ns.kind, "alpha": ns.alpha, "n": ns.n, "seed": ns.seed,
               "mean": float(np.mean(batch.values)),
               "std": float(np.std(batch.values)), **batch.meta}
    print(json.dumps(summary))
    return 0


def _cmd_abel(ns) -> int:
    grid = np.linspace(0.0, ns.t_max, ns.nodes)
    g = _forcing_from_arg(ns.forcing, grid)
    if ns.problem == "fde1":
        trace = solve_second_kind(AbelProblem(ns.alpha, ns.lam, grid, g))
    else:
        problem = RLCauchyProblem(ns.alpha, ns.lam, ns.mu, grid, g)
        trace = (solve_rl_cauchy if ns.problem == "fde2" else solve_caputo)(problem)
    if ns.out:
        buf = io.StringIO()
        buf.write("x,f\n")
        for x, f in zip(trace.grid, trace.f):
            buf.write(f"{float(x)!r},{float(f)!r}\n")
        _atomic_write(ns.out, buf.getvalue())
    print(json.dumps({"problem": ns.problem, "alpha": ns.alpha, "lam": ns.lam,
                      "mu": ns.mu, "nodes": ns.nodes,
                      "f_end": float(trace.f[-1]),
                      "singular_origin": trace.singular_origin}))
    return 0


def _cmd_probe(ns) -> int:
    from .crossings import ProbeGrid

    grid = ProbeGrid(n_samples=ns.n, seed=ns.seed)
    report = probe_conjecture(ns.conjecture_id, grid)
    print(json.dumps({"conjecture_id": report.conjecture_id,
                      "violations": report.violations,
                      "min_margin": report.min_margin}))
    return 0


def _cmd_sweep(ns) -> int:
    with open(ns.spec) as handle:
        spec = SweepSpec.from_json(handle.read())
    record = run_sweep(spec)
    emit_record(record, spec.out_path, spec.output)
    print(json.dumps({"task": spec.task, "rows": len(record.rows),
                      "out": spec.out_path}))
    return 0


_COMMANDS = {
    "eval": _cmd_eval,
    "crossing": _cmd_crossing,
    "bounds": _cmd_bounds,
    "sample": _cmd_sample,
    "abel": _cmd_abel,
    "probe": _cmd_probe,
    "sweep": _cmd_sweep,
}


def dispatch(argv) -> int:
    """Parse and run; returns the process exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[ns.command](ns)
    except (MittagError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
