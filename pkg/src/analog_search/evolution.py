"""Time evolution of two-level states: closed-form propagator and an RK4 oracle."""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInitialState, InvalidParameter, StepSizeError
from .hamiltonian import Hamiltonian2
from .qmodel import DEGENERACY_TOL, InitialState, QubitState, SpectralParams

log = logging.getLogger(__name__)

# largest admissible E_o * dt for the RK4 oracle
STEP_GUARD = 0.05
# RK4 on a rotation of angle E_o*t loses phase at the rate (E_o dt)^4 E_o / 120;
# the documented bound carries a factor 2 margin
RK4_ERROR_CONSTANT = 1.0 / 60.0


def _projectors(h: Hamiltonian2):
    e1_ket, e2_ket = h.eigenstates()
    v1, v2 = e1_ket.to_array(), e2_ket.to_array()
    return np.outer(v1, v1.conj()), np.outer(v2, v2.conj())


def propagator(h: Hamiltonian2, t: float) -> np.ndarray:
    """e^{-iHt} = e^{-iE1 t}|E1><E1| + e^{-iE2 t}|E2><E2|."""
    e1, e2 = h.eigenvalues()
    if e1 == e2:
        return cmath.exp(-1j * h.e_p * t) * np.eye(2, dtype=complex)
    p1, p2 = _projectors(h)
    return cmath.exp(-1j * e1 * t) * p1 + cmath.exp(-1j * e2 * t) * p2


def _propagate_many(h: Hamiltonian2, psi0: QubitState, times: np.ndarray) -> np.ndarray:
    """States at each of ``times`` as an array of shape (len(times), 2)."""
    times = np.asarray(times, dtype=float)
    v = psi0.to_array()
    e1, e2 = h.eigenvalues()
    if e1 == e2:
        return np.exp(-1j * h.e_p * times)[:, None] * v[None, :]
    p1, p2 = _projectors(h)
    c1, c2 = p1 @ v, p2 @ v
    return np.exp(-1j * e1 * times)[:, None] * c1 + np.exp(-1j * e2 * times)[:, None] * c2


def propagate_exact(h: Hamiltonian2, psi0: QubitState, t: float) -> QubitState:
    if t < 0:
        raise InvalidParameter(f"t must be >= 0, got {t}")
    if t == 0:
        return psi0
    return QubitState.from_array(propagator(h, t) @ psi0.to_array())


def rk4_step(a: np.ndarray, y: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of dy/dt = a @ y for a single vector ``y``."""
    k1 = a @ y
    k2 = a @ (y + 0.5 * dt * k1)
    k3 = a @ (y + 0.5 * dt * k2)
    k4 = a @ (y + dt * k3)
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_steps(generator: np.ndarray, psi: np.ndarray, dt, n_steps) -> np.ndarray:
    """Classical fourth-order Runge-Kutta for d(psi)/dt = generator @ psi.

    Works on batches: ``generator`` of shape (..., n, n), ``psi`` of shape
    (..., n), ``dt`` and ``n_steps`` broadcastable to the batch shape.  Each
    batch member takes its own number of steps and is frozen afterwards.
    """
    a = np.asarray(generator, dtype=complex)
    psi = np.array(psi, dtype=complex)
    dt = np.asarray(dt, dtype=float)
    n_steps = np.asarray(n_steps)
    batch = np.broadcast_shapes(psi.shape[:-1], dt.shape, n_steps.shape)
    psi = np.broadcast_to(psi, batch + psi.shape[-1:]).copy()
    dt = np.broadcast_to(dt, batch)[..., None]
    n_steps = np.broadcast_to(n_steps, batch)

    def f(y):
        return np.einsum("...ij,...j->...i", a, y)

    half = dt / 2
    for k in range(int(n_steps.max(initial=0))):
        k1 = f(psi)
        k2 = f(psi + half * k1)
        k3 = f(psi + half * k2)
        k4 = f(psi + dt * k3)
        new = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        psi = np.where((k < n_steps)[..., None], new, psi)
    return psi


def rk4_error_bound(e_o: float, dt: float, t: float) -> float:
    """Documented amplitude error bound C (E_o dt)^4 E_o t of ``propagate_numeric``."""
    return RK4_ERROR_CONSTANT * (e_o * dt) ** 4 * e_o * t


def _check_step(h: Hamiltonian2, dt: float):
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    if dt * h.e_o > STEP_GUARD:
        raise StepSizeError(f"dt * E_o = {dt * h.e_o:.3g} exceeds {STEP_GUARD}")


def propagate_numeric(h: Hamiltonian2, psi0: QubitState, t: float, dt: float) -> QubitState:
    """Integrate i d(psi)/dt = H psi with fixed-step RK4.

    The step is shrunk so that an integer number of steps lands on ``t``.
    The E_p multiple of the identity commutes with everything, so it is
    applied as an exact phase and RK4 integrates the traceless part, whose
    spectral radius is E_o.  Norm drift is logged and left in the result.
    """
    _check_step(h, dt)
    if t < 0:
        raise InvalidParameter(f"t must be >= 0, got {t}")
    if t == 0:
        return psi0
    n = math.ceil(t / dt)
    k = h.matrix() - h.e_p * np.eye(2)
    psi = rk4_steps(-1j * k, psi0.to_array(), t / n, n)
    out = QubitState.from_array(cmath.exp(-1j * h.e_p * t) * psi)
    drift = abs(out.norm() - psi0.norm())
    if drift > 1e-10:
        log.warning("RK4 norm drift %.3e after %d steps", drift, n)
    else:
        log.debug("RK4 norm drift %.3e after %d steps", drift, n)
    return out


def amplitude_perp(sp: SpectralParams, x: float, init: InitialState, t: float) -> complex:
    """<w_perp| e^{-iHt} |s> for the spectral-form Hamiltonian with mixing angle x."""
    b, d = init.beta, sp.alpha - init.u
    c2, s2 = math.cos(2 * x), math.sin(2 * x)
    ct, st = math.cos(sp.e_o * t), math.sin(sp.e_o * t)
    re = math.cos(b) * ct - math.sin(d) * s2 * math.sin(b) * st
    im = (c2 * math.cos(b) - math.cos(d) * s2 * math.sin(b)) * st
    return cmath.exp(-1j * sp.e_p * t) * complex(re, im)


def probability_closed(init: InitialState, gamma: float, e_o: float, t):
    """P(t) = 1 - (cos^2 b / cos^2 g) cos^2(E_o t + g).  Accepts scalar or array ``t``."""
    cg = math.cos(gamma)
    if cg < DEGENERACY_TOL:
        raise DegenerateInitialState("cos(gamma) = 0")
    ratio = (math.cos(init.beta) / cg) ** 2
    phase = e_o * np.asarray(t, dtype=float) + gamma
    p = 1.0 - ratio * np.cos(phase) ** 2
    return float(p) if p.ndim == 0 else p


@dataclass
class ProbabilityTrace:
    """Marked-state probability sampled on a time grid.

    ``a_w``/``a_perp`` hold the amplitudes when the producer tracks them.
    """

    times: np.ndarray
    p_w: np.ndarray
    a_w: np.ndarray | None = None
    a_perp: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.p_w = np.asarray(self.p_w, dtype=float)
        if self.times.shape != self.p_w.shape:
            raise InvalidParameter("times and p_w differ in length")
        if np.any(np.diff(self.times) <= 0):
            raise InvalidParameter("sample times must be strictly increasing")
        if np.any(self.p_w < 0) or np.any(self.p_w > 1 + 1e-9):
            raise InvalidParameter("probabilities outside [0, 1]")

    def __len__(self):
        return len(self.times)

    def first_peak(self, t_window: float | None = None) -> float:
        """Time of the largest sample within [0, t_window]."""
        mask = slice(None) if t_window is None else self.times <= t_window
        times, p = self.times[mask], self.p_w[mask]
        return float(times[int(np.argmax(p))])


def trace(
    h: Hamiltonian2,
    psi0: QubitState,
    t_max: float,
    n_samples: int,
    *,
    method: str = "exact",
    dt: float | None = None,
) -> ProbabilityTrace:
    """Sample |<w|psi(t)>|^2 on the closed uniform grid [0, t_max].

    ``method="numeric"`` integrates between consecutive samples with RK4 at
    a step no larger than ``dt``.
    """
    if n_samples < 2:
        raise InvalidParameter(f"n_samples must be >= 2, got {n_samples}")
    if not t_max > 0:
        raise InvalidParameter(f"t_max must be positive, got {t_max}")
    times = np.linspace(0.0, t_max, n_samples)
    if method == "exact":
        states = _propagate_many(h, psi0, times)
        states[0] = psi0.to_array()
    elif method == "numeric":
        if dt is None:
            raise InvalidParameter("numeric tracing needs dt")
        _check_step(h, dt)
        spacing = t_max / (n_samples - 1)
        n = math.ceil(spacing / dt)
        k = -1j * (h.matrix() - h.e_p * np.eye(2))
        states = np.empty((n_samples, 2), dtype=complex)
        psi = psi0.to_array()
        states[0] = psi
        for i in range(1, n_samples):
            # traceless part integrated in the frame rotating with E_p
            step = (times[i] - times[i - 1]) / n
            for _ in range(n):
                psi = rk4_step(k, psi, step)
            states[i] = psi
        states = states * np.exp(-1j * h.e_p * times)[:, None]
    else:
        raise InvalidParameter(f"unknown method {method!r}")
    p_w = np.abs(states[:, 0]) ** 2
    return ProbabilityTrace(
        times,
        p_w,
        states[:, 0],
        states[:, 1],
        metadata={"method": method, "t_max": t_max, "n_samples": n_samples, "dt": dt},
    )
