"""Randomized invariant checks behind the ``verify`` subcommand."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .evolution import probability_closed, propagate_exact
from .fullspace import SearchInstance, evolve_full
from .hamiltonian import bae_kwon, from_coupling, from_projectors, from_spectral_tuned
from .qmodel import CouplingParams, InitialState, angles_close, to_coupling, to_spectral
from .timing import first_time_from_coupling, measuring_times


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    cases: int

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict}  {self.name:<28} max_err={self.max_error:.3e}  tol={self.tolerance:.0e}  n={self.cases}"


def draw_coupling(rng: np.random.Generator, e_max: float = 3.0) -> tuple[CouplingParams, InitialState]:
    cp = CouplingParams(rng.uniform(0, e_max), rng.uniform(0, e_max), rng.uniform(-math.pi, math.pi))
    init = InitialState(rng.uniform(0.05, 1.5), rng.uniform(-math.pi, math.pi))
    return cp, init


def _entry_error(h1, h2) -> float:
    return float(np.max(np.abs(h1.matrix() - h2.matrix())))


def _check(name, errors, tol) -> CheckResult:
    errors = list(errors)
    worst = max(errors) if errors else 0.0
    return CheckResult(name, bool(worst <= tol), worst, tol, len(errors))


def run_checks(seed: int = 0, draws: int = 200, full_space: tuple[int, int] | None = None) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    samples = [draw_coupling(rng) for _ in range(draws)]
    # keep away from the gap closing, where conversions lose all relative accuracy
    samples = [(cp, init) for cp, init in samples if to_spectral(cp, init)[0].e_o > 1e-3]

    rt_coupling, rt_spectral, eq14_11, eq14_proj, eq15, p_closed, p_exact = [], [], [], [], [], [], []
    for cp, init in samples:
        sp, geom = to_spectral(cp, init)
        back = to_coupling(sp, init)
        rt_coupling.append(max(
            abs(back.e_fg - cp.e_fg), abs(back.e_f - cp.e_f),
            0.0 if angles_close(back.phi, cp.phi, 1e-9) or cp.e_f < 1e-9 else abs(back.phi - cp.phi),
        ))
        sp2, _ = to_spectral(back, init)
        rt_spectral.append(max(abs(sp2.e_p - sp.e_p), abs(sp2.e_o - sp.e_o),
                               abs(math.remainder(sp2.alpha - sp.alpha, 2 * math.pi))))

        h = from_coupling(cp, init)
        eq14_11.append(_entry_error(h, from_spectral_tuned(sp, init)))
        eq14_proj.append(_entry_error(h, from_projectors(cp, init)))

        sched = measuring_times(geom, init, sp.alpha, sp.e_o)
        t1 = first_time_from_coupling(cp, init)
        eq15.append(abs(t1 - sched.t_first))
        p_closed.append(abs(1.0 - probability_closed(init, geom.gamma, sp.e_o, t1)))
        p_exact.append(abs(1.0 - propagate_exact(h, init.ket, t1).p_w))

    branch = []
    for _ in range(max(1, draws // 2)):
        init = InitialState(rng.uniform(0.05, 1.5), 0.0)
        for phi in (0.0, math.pi):
            cp = CouplingParams(rng.uniform(0, 3), rng.uniform(0, 3), phi)
            branch.append(_entry_error(bae_kwon(cp, init), from_coupling(cp, init)))

    results = [
        _check("coupling round trip", rt_coupling, 1e-9),
        _check("spectral round trip", rt_spectral, 1e-10),
        _check("coupling == tuned spectral", eq14_11, 1e-10),
        _check("coupling == projector sum", eq14_proj, 1e-12),
        _check("bae-kwon branches", branch, 1e-12),
        _check("first time closed forms", eq15, 1e-10),
        _check("certainty (closed form)", p_closed, 1e-12),
        _check("certainty (propagator)", p_exact, 1e-12),
    ]

    if full_space is not None:
        n, m = full_space
        errs = []
        while len(errs) < 3:
            cp, init = draw_coupling(rng)
            inst = SearchInstance.first(n, m, init.u)
            sp, geom = to_spectral(cp, inst.init)
            # the dense step guard needs |H| dt <= 0.05 at dt = 1e-3/E_o
            if sp.e_o < 0.2 or (abs(sp.e_p) + sp.e_o) / sp.e_o > 20:
                continue
            tr = evolve_full(inst, cp, math.pi / sp.e_o, 1e-3 / sp.e_o)
            p2 = probability_closed(inst.init, geom.gamma, sp.e_o, tr.times)
            errs.append(float(np.max(np.abs(tr.p_w - p2))))
        results.append(_check(f"full space N={n} M={m}", errs, 1e-6))
    return results


def report(results: list[CheckResult], seed: int, draws: int) -> dict:
    return {
        "seed": seed,
        "draws": draws,
        "passed": all(r.passed for r in results),
        "checks": [asdict(r) for r in results],
    }

