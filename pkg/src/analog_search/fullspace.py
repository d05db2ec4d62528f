"""Dense N-item search oracle used to check the two-dimensional reduction."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, ScaleGuardError, StepSizeError
from .evolution import STEP_GUARD, ProbabilityTrace, rk4_step
from .qmodel import CouplingParams, InitialState, wrap_angle

MAX_ITEMS = 4096


@dataclass(frozen=True)
class SearchInstance:
    """N items, a set of marked indices, and phase u on the marked part of |s>.

    The phase is modeled as a uniform factor e^{iu} on every marked
    component of the uniform superposition.
    """

    n_items: int
    marked: tuple[int, ...]
    u: float = 0.0

    def __post_init__(self):
        marked = tuple(sorted(set(int(i) for i in self.marked)))
        if self.n_items < 2:
            raise InvalidParameter(f"need at least 2 items, got {self.n_items}")
        if not 1 <= len(marked) < self.n_items:
            raise InvalidParameter("the marked set must be a non-empty proper subset")
        if marked[0] < 0 or marked[-1] >= self.n_items:
            raise InvalidParameter("marked index out of range")
        object.__setattr__(self, "marked", marked)
        object.__setattr__(self, "u", wrap_angle(self.u))

    @classmethod
    def first(cls, n_items: int, n_marked: int, u: float = 0.0) -> "SearchInstance":
        return cls(n_items, tuple(range(n_marked)), u)

    @property
    def n_marked(self) -> int:
        return len(self.marked)

    @property
    def init(self) -> InitialState:
        return InitialState(math.asin(math.sqrt(self.n_marked / self.n_items)), self.u)

    def marked_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_items, dtype=bool)
        mask[list(self.marked)] = True
        return mask

    def marked_ket(self) -> np.ndarray:
        w = np.zeros(self.n_items, dtype=complex)
        w[self.marked_mask()] = 1 / math.sqrt(self.n_marked)
        return w

    def initial_ket(self) -> np.ndarray:
        s = np.full(self.n_items, 1 / math.sqrt(self.n_items), dtype=complex)
        s[self.marked_mask()] *= cmath.exp(1j * self.u)
        return s

    def perp_ket(self) -> np.ndarray:
        """Normalized part of |s> orthogonal to |w>."""
        w, s = self.marked_ket(), self.initial_ket()
        r = s - np.vdot(w, s) * w
        return r / np.linalg.norm(r)


def build_full_hamiltonian(inst: SearchInstance, cp: CouplingParams) -> np.ndarray:
    """Dense N x N operator E_fg(|w><w| + |s><s|) + E_f(e^{i phi}|w><s| + h.c.)."""
    if inst.n_items > MAX_ITEMS:
        raise ScaleGuardError(f"N = {inst.n_items} exceeds the dense oracle limit {MAX_ITEMS}")
    w, s = inst.marked_ket(), inst.initial_ket()
    ws = np.outer(w, s.conj())
    h = cp.e_fg * (np.outer(w, w.conj()) + np.outer(s, s.conj()))
    h += cp.e_f * cmath.exp(1j * cp.phi) * ws
    h += cp.e_f * cmath.exp(-1j * cp.phi) * ws.conj().T
    return 0.5 * (h + h.conj().T)


def reduce_to_plane(inst: SearchInstance, h: np.ndarray) -> np.ndarray:
    """2x2 matrix of ``h`` in the basis (|w>, |w_perp>)."""
    basis = np.stack([inst.marked_ket(), inst.perp_ket()], axis=1)
    return basis.conj().T @ h @ basis


def evolve_full(inst: SearchInstance, cp: CouplingParams, t_max: float, dt: float) -> ProbabilityTrace:
    """RK4 trace of the total marked probability starting from |s>.

    The step is shrunk so the grid lands on ``t_max``; every step is a
    sample.  The Frobenius norm bounds the spectral radius in the step
    guard.  Metadata reports the worst norm drift and the worst leakage out
    of span{|w>, |s>}.
    """
    if not t_max > 0:
        raise InvalidParameter(f"t_max must be positive, got {t_max}")
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    h = build_full_hamiltonian(inst, cp)
    radius = np.linalg.norm(h)
    if dt * radius > STEP_GUARD:
        raise StepSizeError(f"dt * |H| = {dt * radius:.3g} exceeds {STEP_GUARD}")
    n = math.ceil(t_max / dt)
    step = t_max / n
    gen = -1j * h
    mask = inst.marked_mask()
    plane = np.stack([inst.marked_ket(), inst.perp_ket()], axis=1)

    psi = inst.initial_ket()
    times = step * np.arange(n + 1)
    p = np.empty(n + 1)
    p[0] = np.sum(np.abs(psi[mask]) ** 2)
    drift = leak = 0.0
    for i in range(1, n + 1):
        psi = rk4_step(gen, psi, step)
        p[i] = np.sum(np.abs(psi[mask]) ** 2)
        if i % 64 == 0 or i == n:
            drift = max(drift, abs(np.linalg.norm(psi) - 1))
            leak = max(leak, np.linalg.norm(psi - plane @ (plane.conj().T @ psi)))
    return ProbabilityTrace(
        times,
        p,
        metadata={"dt": step, "n_items": inst.n_items, "n_marked": inst.n_marked,
                  "norm_drift": drift, "leakage": leak},
    )
