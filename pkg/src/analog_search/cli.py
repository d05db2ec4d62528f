"""Command-line front end.

    analog-search time    --efg 1 --ef 0 --phi 0 --beta 0.5236
    analog-search convert --ep 1 --eo 1 --alpha 0 --beta 0.5236
    analog-search trace   --efg 0 --ef 1 --phi 1.5708 --beta 0.5236 --t-max 3 --samples 301
    analog-search sweep   --efg 1 --ef 1 --beta 0.5236 --sweep phi=-3.14159:3.14159:32
    analog-search verify  --seed 0 --draws 200 --full-space --n 8 --m 2

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import SearchError
from .evolution import propagate_exact, trace
from .hamiltonian import from_coupling, from_spectral_tuned
from .qmodel import CouplingParams, InitialState, SpectralParams, mixing_geometry, to_coupling, to_spectral
from .timing import schedule_for_spectral
from .verify import report, run_checks

PROG = "analog-search"
COUPLING_KEYS = ("efg", "ef", "phi")
SPECTRAL_KEYS = ("ep", "eo", "alpha")
STATE_KEYS = ("beta", "u")


class UsageError(Exception):
    pass


def fmt_float(v) -> str:
    """Shortest round-trip text for a double; integral values drop the '.0'."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    r = repr(v)
    return r[:-2] if r.endswith(".0") else r


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


@dataclass
class RunConfig:
    command: str
    values: dict
    fmt: str
    out: str | None
    seed: int
    sweeps: list = field(default_factory=list)

    @property
    def kind(self) -> str:
        keys = set(self.values) | {name for name, _ in self.sweeps}
        has_c = bool(keys & set(COUPLING_KEYS))
        has_s = bool(keys & set(SPECTRAL_KEYS))
        if has_c and has_s:
            raise UsageError("give either --efg/--ef/--phi or --ep/--eo/--alpha, not both")
        if not (has_c or has_s):
            raise UsageError("missing parameters: give --efg/--ef/--phi or --ep/--eo/--alpha")
        return "coupling" if has_c else "spectral"

    def build(self, overrides: dict | None = None):
        """(params, init) for the configured parameterization."""
        v = dict(self.values)
        v.update(overrides or {})
        if "beta" not in v:
            raise UsageError("missing --beta")
        init = InitialState(v["beta"], v.get("u", 0.0))
        if self.kind == "coupling":
            for k in ("efg", "ef"):
                if k not in v:
                    raise UsageError(f"missing --{k}")
            return CouplingParams(v["efg"], v["ef"], v.get("phi", 0.0)), init
        for k in ("ep", "eo"):
            if k not in v:
                raise UsageError(f"missing --{k}")
        return SpectralParams(v["ep"], v["eo"], v.get("alpha", 0.0)), init


def _spectral_of(params, init):
    if isinstance(params, CouplingParams):
        return to_spectral(params, init)[0]
    return params


def _hamiltonian_of(params, init):
    if isinstance(params, CouplingParams):
        return from_coupling(params, init)
    return from_spectral_tuned(params, init)


def _inputs(params, init) -> dict:
    d = {"beta": init.beta, "u": init.u}
    if isinstance(params, CouplingParams):
        d.update(efg=params.e_fg, ef=params.e_f, phi=params.phi)
    else:
        d.update(ep=params.e_p, eo=params.e_o, alpha=params.alpha)
    return d


def _cell(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, float, np.integer, np.floating)):
        return fmt_float(x)
    return str(x)


def _write_rows(stream, header, rows):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])


def _emit_object(cfg: RunConfig, obj: dict, stream):
    if cfg.fmt == "csv":
        flat = {k: v for k, v in obj.items() if not isinstance(v, dict)}
        _write_rows(stream, list(flat), [list(flat.values())])
    else:
        clean = {k: ({kk: _json_value(vv) for kk, vv in v.items()} if isinstance(v, dict) else _json_value(v))
                 for k, v in obj.items()}
        stream.write(json.dumps(clean) + "\n")


def cmd_time(cfg: RunConfig, stream) -> int:
    params, init = cfg.build()
    sp = _spectral_of(params, init)
    sched = schedule_for_spectral(sp, init)
    geom = mixing_geometry(init, sp.alpha)
    _emit_object(cfg, {
        "t_first": sched.t_first,
        "period": sched.period,
        "e_p": sp.e_p,
        "e_o": sp.e_o,
        "alpha": sp.alpha,
        "gamma": geom.gamma,
        "x": geom.x,
        "p_floor": sched.p_floor,
        "degenerate": sched.degenerate or geom.degenerate,
        "inputs": _inputs(params, init),
    }, stream)
    return 0


def cmd_convert(cfg: RunConfig, stream) -> int:
    params, init = cfg.build()
    if isinstance(params, CouplingParams):
        cp = params
        sp, geom = to_spectral(cp, init)
    else:
        sp = params
        geom = mixing_geometry(init, sp.alpha)
        cp = to_coupling(sp, init)
    _emit_object(cfg, {
        "efg": cp.e_fg, "ef": cp.e_f, "phi": cp.phi,
        "ep": sp.e_p, "eo": sp.e_o, "alpha": sp.alpha,
        "gamma": geom.gamma, "x": geom.x,
        "beta": init.beta, "u": init.u,
        "degenerate": sp.degenerate or geom.degenerate,
    }, stream)
    return 0


def cmd_trace(cfg: RunConfig, stream, t_max, n_samples, numeric, dt) -> int:
    params, init = cfg.build()
    h = _hamiltonian_of(params, init)
    if t_max is None:
        if h.e_o == 0:
            raise UsageError("--t-max is required when E_o = 0")
        t_max = 2 * math.pi / h.e_o
    if numeric and dt is None:
        raise UsageError("--numeric needs --dt")
    tr = trace(h, init.ket, t_max, n_samples, method="numeric" if numeric else "exact", dt=dt)
    rows = zip(tr.times, tr.p_w, tr.a_w.real, tr.a_w.imag, tr.a_perp.real, tr.a_perp.imag)
    _write_rows(stream, ["t", "p_w", "re_a_w", "im_a_w", "re_a_perp", "im_a_perp"], rows)
    return 0


def parse_sweep(text: str) -> tuple[str, np.ndarray]:
    try:
        name, rng = text.split("=", 1)
        start, stop, steps = rng.split(":")
        start, stop, steps = float(start), float(stop), int(steps)
    except ValueError:
        raise UsageError(f"malformed sweep {text!r}, expected name=start:stop:steps") from None
    name = name.strip()
    if name not in COUPLING_KEYS + SPECTRAL_KEYS + STATE_KEYS:
        raise UsageError(f"cannot sweep {name!r}")
    if steps < 2:
        raise UsageError("sweep steps must be >= 2")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError("sweep bounds must be finite")
    return name, np.linspace(start, stop, steps)


def sweep_point(cfg: RunConfig, overrides: dict, p_threshold: float) -> tuple[float, float, float]:
    """(t_first, delta_max, P at t_first); NaN where the point is degenerate or invalid."""
    try:
        params, init = cfg.build(overrides)
        sp = _spectral_of(params, init)
        sched = schedule_for_spectral(sp, init)
        if sched.degenerate:
            return 0.0, sched.tolerance_halfwidth(p_threshold), init.ket.p_w
        h = _hamiltonian_of(params, init)
        p = propagate_exact(h, init.ket, sched.t_first).p_w
        return sched.t_first, sched.tolerance_halfwidth(p_threshold), p
    except SearchError:
        return math.nan, math.nan, math.nan


def cmd_sweep(cfg: RunConfig, stream, p_threshold: float) -> int:
    if not 1 <= len(cfg.sweeps) <= 2:
        raise UsageError("sweep takes one or two --sweep ranges")
    names = [n for n, _ in cfg.sweeps]
    if len(set(names)) != len(names):
        raise UsageError("the same parameter is swept twice")
    cfg.kind  # parameterization check before any work
    rows = []
    for combo in itertools.product(*(grid for _, grid in cfg.sweeps)):
        overrides = dict(zip(names, (float(c) for c in combo)))
        rows.append([*combo, *sweep_point(cfg, overrides, p_threshold)])
    _write_rows(stream, [*names, "t_first", f"delta_max(p={fmt_float(p_threshold)})", "p_at_t_first"], rows)
    return 0


def cmd_verify(cfg: RunConfig, stream, draws, full_space) -> int:
    results = run_checks(cfg.seed, draws, full_space)
    for r in results:
        print(r.line(), file=sys.stderr)
    rep = report(results, cfg.seed, draws)
    print(("all checks passed" if rep["passed"] else "verification FAILED"), file=sys.stderr)
    if cfg.fmt == "csv":
        _write_rows(stream, ["name", "passed", "max_error", "tolerance", "cases"],
                    [[r.name, r.passed, r.max_error, r.tolerance, r.cases] for r in results])
    else:
        stream.write(json.dumps(rep) + "\n")
    return 0 if rep["passed"] else 1


def _add_common(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("csv", "json"), default=d, help="output format")
    p.add_argument("--out", default=d, metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0,
                   help="seed for randomized verification (default 0)")


def _add_params(p: argparse.ArgumentParser):
    g = p.add_argument_group("parameters (radians; pick one parameterization)")
    for key, text in (("efg", "Farhi-Gutmann weight E_fg"), ("ef", "Fenner weight E_f"),
                      ("phi", "coupling phase phi"), ("ep", "mean energy E_p"),
                      ("eo", "half gap E_o"), ("alpha", "eigenvector phase alpha"),
                      ("beta", "initial-state angle beta in [0, pi/2]"),
                      ("u", "initial-state phase u")):
        g.add_argument(f"--{key}", type=float, default=argparse.SUPPRESS, help=text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="Analog quantum search timing and dynamics.")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (("time", "first measuring time and derived geometry"),
                       ("convert", "convert between the two parameterizations")):
        p = sub.add_parser(name, help=text)
        _add_common(p, suppress=True)
        _add_params(p)

    p = sub.add_parser("trace", help="marked-state probability over time (CSV)")
    _add_common(p, suppress=True)
    _add_params(p)
    p.add_argument("--t-max", type=float, default=None, help="end time (default two periods)")
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--numeric", action="store_true", help="integrate with RK4 instead of the exact propagator")
    p.add_argument("--dt", type=float, default=None)

    p = sub.add_parser("sweep", help="measuring time over a parameter grid (CSV)")
    _add_common(p, suppress=True)
    _add_params(p)
    p.add_argument("--sweep", action="append", default=[], metavar="NAME=START:STOP:STEPS")
    p.add_argument("--p-threshold", type=float, default=0.99)

    p = sub.add_parser("verify", help="run the randomized invariant suite")
    _add_common(p, suppress=True)
    p.add_argument("--draws", type=int, default=200)
    p.add_argument("--full-space", action="store_true")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--m", type=int, default=2)
    return parser


def _dispatch(args, stream) -> int:
    keys = COUPLING_KEYS + SPECTRAL_KEYS + STATE_KEYS
    values = {k: getattr(args, k) for k in keys if hasattr(args, k)}
    for k, v in values.items():
        if not math.isfinite(v):
            raise UsageError(f"--{k} must be finite")
    streaming = args.command in ("trace", "sweep")
    if streaming and args.format == "json":
        raise UsageError(f"{args.command} writes CSV only")
    default_fmt = "csv" if streaming else "json"
    cfg = RunConfig(args.command, values, args.format or default_fmt, args.out, args.seed)

    if args.command == "time":
        return cmd_time(cfg, stream)
    if args.command == "convert":
        return cmd_convert(cfg, stream)
    if args.command == "trace":
        if args.samples < 2:
            raise UsageError("--samples must be >= 2")
        if args.t_max is not None and not args.t_max > 0:
            raise UsageError("--t-max must be positive")
        return cmd_trace(cfg, stream, args.t_max, args.samples, args.numeric, args.dt)
    if args.command == "sweep":
        cfg.sweeps = [parse_sweep(s) for s in args.sweep]
        return cmd_sweep(cfg, stream, args.p_threshold)
    if args.draws < 1:
        raise UsageError("--draws must be >= 1")
    full = (args.n, args.m) if args.full_space else None
    if full is not None and not 1 <= args.m < args.n:
        raise UsageError("--full-space needs 1 <= m < n")
    return cmd_verify(cfg, stream, args.draws, full)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    buf = io.StringIO()
    try:
        code = _dispatch(args, buf)
    except (UsageError, SearchError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
