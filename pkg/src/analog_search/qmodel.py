"""Parameter types for the two-level search model and conversions between them.

Everything is expressed in the basis {|w>, |w_perp>} where |w> is the marked
state.  Energies are dimensionless (hbar = 1), so times carry inverse-energy
units.  Angles are radians, normalized to (-pi, pi].
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInitialState, InvalidParameter

ANGLE_TOL = 1e-10
NORM_TOL = 1e-12
# cos(gamma) below this is treated as zero
DEGENERACY_TOL = 1e-12


def wrap_angle(a: float) -> float:
    """Map an angle onto (-pi, pi]."""
    a = math.remainder(float(a), 2 * math.pi)
    if a <= -math.pi:
        a += 2 * math.pi
    return a


def angles_close(a: float, b: float, tol: float = ANGLE_TOL) -> bool:
    return abs(wrap_angle(a - b)) <= tol


def _finite(name, *values):
    for v in values:
        if not math.isfinite(v):
            raise InvalidParameter(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class SpectralParams:
    """Eigen-side parameterization: mean energy, half-gap and eigenvector phase."""

    e_p: float
    e_o: float
    alpha: float = 0.0

    def __post_init__(self):
        _finite("spectral parameters", self.e_p, self.e_o, self.alpha)
        if self.e_o < 0:
            raise InvalidParameter(f"e_o must be >= 0, got {self.e_o}")
        object.__setattr__(self, "e_p", float(self.e_p))
        object.__setattr__(self, "e_o", float(self.e_o))
        object.__setattr__(self, "alpha", wrap_angle(self.alpha))

    @classmethod
    def from_levels(cls, e1: float, e2: float, alpha: float = 0.0) -> "SpectralParams":
        if e1 < e2:
            raise InvalidParameter("expected e1 >= e2")
        return cls((e1 + e2) / 2, (e1 - e2) / 2, alpha)

    @property
    def e1(self) -> float:
        return self.e_p + self.e_o

    @property
    def e2(self) -> float:
        return self.e_p - self.e_o

    @property
    def degenerate(self) -> bool:
        return self.e_o == 0.0


@dataclass(frozen=True)
class CouplingParams:
    """Construction-side parameterization (E_fg, E_f, phi).

    ``e_fg`` multiplies |w><w| + |s><s| and ``e_f`` the phased cross term
    e^{i phi}|w><s| + h.c.  A negative ``e_f`` is not accepted since its sign
    is a shift of ``phi`` by pi.
    """

    e_fg: float
    e_f: float
    phi: float = 0.0

    def __post_init__(self):
        _finite("coupling parameters", self.e_fg, self.e_f, self.phi)
        if self.e_f < 0:
            raise InvalidParameter(f"e_f must be >= 0 (fold the sign into phi), got {self.e_f}")
        object.__setattr__(self, "e_fg", float(self.e_fg))
        object.__setattr__(self, "e_f", float(self.e_f))
        object.__setattr__(self, "phi", wrap_angle(self.phi))


@dataclass(frozen=True)
class InitialState:
    """|s> = e^{iu} sin(beta)|w> + cos(beta)|w_perp>, with beta in [0, pi/2]."""

    beta: float
    u: float = 0.0

    def __post_init__(self):
        _finite("initial state", self.beta, self.u)
        if not 0.0 <= self.beta <= math.pi / 2:
            raise InvalidParameter(f"beta must lie in [0, pi/2], got {self.beta}")
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "u", wrap_angle(self.u))

    @classmethod
    def uniform(cls, n_items: int, n_marked: int, u: float = 0.0) -> "InitialState":
        """Uniform superposition over ``n_items`` with ``n_marked`` targets."""
        if not 1 <= n_marked < n_items:
            raise InvalidParameter("need 1 <= n_marked < n_items")
        return cls(math.asin(math.sqrt(n_marked / n_items)), u)

    @property
    def ket(self) -> "QubitState":
        return QubitState(cmath.exp(1j * self.u) * math.sin(self.beta), complex(math.cos(self.beta)))


@dataclass(frozen=True)
class QubitState:
    """Amplitudes on |w> and |w_perp>.

    Construction does not renormalize.  States produced by the exact
    propagator are unit norm to 1e-12; numerically integrated states may
    drift, which ``norm_drift`` exposes.
    """

    a_w: complex
    a_perp: complex

    def __post_init__(self):
        object.__setattr__(self, "a_w", complex(self.a_w))
        object.__setattr__(self, "a_perp", complex(self.a_perp))

    @classmethod
    def checked(cls, a_w: complex, a_perp: complex, tol: float = NORM_TOL) -> "QubitState":
        state = cls(a_w, a_perp)
        if state.norm_drift > tol:
            raise InvalidParameter(f"state is not normalized (|norm - 1| = {state.norm_drift:.3e})")
        return state

    @classmethod
    def from_array(cls, v) -> "QubitState":
        return cls(v[0], v[1])

    def to_array(self) -> np.ndarray:
        return np.array([self.a_w, self.a_perp], dtype=complex)

    def norm(self) -> float:
        return math.hypot(abs(self.a_w), abs(self.a_perp))

    @property
    def norm_drift(self) -> float:
        return abs(self.norm() - 1.0)

    @property
    def p_w(self) -> float:
        return abs(self.a_w) ** 2

    def overlap(self, other: "QubitState") -> complex:
        """<self|other>."""
        return self.a_w.conjugate() * other.a_w + self.a_perp.conjugate() * other.a_perp

    def same_ray(self, other: "QubitState", tol: float = 1e-12) -> bool:
        """Equality up to a global phase."""
        return abs(abs(self.overlap(other)) - self.norm() * other.norm()) <= tol


MARKED = QubitState(1.0, 0.0)
PERP = QubitState(0.0, 1.0)


@dataclass(frozen=True)
class DerivedGeometry:
    """Auxiliary angle gamma and mixing angle x fixed by the certainty condition.

    ``degenerate`` is set when cos(gamma) = 0; x is then reported as 0.
    """

    gamma: float
    x: float
    degenerate: bool = False

    @property
    def cos_2x(self) -> float:
        return math.cos(2 * self.x)

    @property
    def sin_2x(self) -> float:
        return math.sin(2 * self.x)


def mixing_geometry(init: InitialState, alpha: float) -> DerivedGeometry:
    """gamma and x for eigenvector phase ``alpha``; flags rather than raises on cos(gamma) = 0."""
    d = alpha - init.u
    sb, cb = math.sin(init.beta), math.cos(init.beta)
    sin_g = max(-1.0, min(1.0, sb * math.sin(d)))
    gamma = math.asin(sin_g)
    if math.cos(gamma) < DEGENERACY_TOL:
        return DerivedGeometry(gamma, 0.0, True)
    # cos 2x = sin b cos(a-u)/cos g, sin 2x = cos b/cos g; the common positive factor drops out
    x = 0.5 * math.atan2(cb, sb * math.cos(d))
    return DerivedGeometry(gamma, x)


def to_spectral(cp: CouplingParams, init: InitialState) -> tuple[SpectralParams, DerivedGeometry]:
    """Convert (E_fg, E_f, phi) to (E_p, E_o, alpha) for the given initial state.

    The off-diagonal combination z = E_f e^{i(phi-u)} + E_fg sin(beta) carries
    alpha - u as its argument and E_o/cos(gamma) as its modulus.  When z = 0 the
    spectrum is degenerate and alpha is set to 0 (``SpectralParams.degenerate``).
    """
    sb, cb = math.sin(init.beta), math.cos(init.beta)
    d = cp.phi - init.u
    re = cp.e_f * math.cos(d) + cp.e_fg * sb
    im = cp.e_f * math.sin(d)
    e_p = cp.e_fg + cp.e_f * math.cos(d) * sb
    e_o = math.hypot(re, im * cb)
    if re == 0.0 and im == 0.0:
        alpha = 0.0
    else:
        alpha = math.atan2(im, re) + init.u
    sp = SpectralParams(e_p, e_o, alpha)
    return sp, mixing_geometry(init, sp.alpha)


def to_coupling(sp: SpectralParams, init: InitialState) -> CouplingParams:
    """Convert (E_p, E_o, alpha) back to (E_fg, E_f, phi).

    Raises DegenerateInitialState when cos(beta) = 0 or cos(gamma) = 0.  When
    the recovered E_f is zero, phi is reported as 0.  E_fg may come out
    negative for spectra that are not reachable with a non-negative
    Farhi-Gutmann weight; it is returned as is.
    """
    sb, cb = math.sin(init.beta), math.cos(init.beta)
    if cb < DEGENERACY_TOL:
        raise DegenerateInitialState("beta = pi/2: |s> is the marked state, E_fg is undefined")
    geom = mixing_geometry(init, sp.alpha)
    if geom.degenerate:
        raise DegenerateInitialState("cos(gamma) = 0")
    cg = math.cos(geom.gamma)
    d = sp.alpha - init.u
    radius = sp.e_o / cg
    e_fg = (sp.e_p - radius * sb * math.cos(d)) / (cb * cb)
    w = radius * cmath.exp(1j * d) - e_fg * sb
    e_f = abs(w)
    phi = cmath.phase(w) + init.u if e_f > 0 else 0.0
    return CouplingParams(e_fg, e_f, phi)
