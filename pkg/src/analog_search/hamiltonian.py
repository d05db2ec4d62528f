"""2x2 search Hamiltonians in the {|w>, |w_perp>} basis."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .qmodel import (
    ANGLE_TOL,
    CouplingParams,
    InitialState,
    QubitState,
    SpectralParams,
    wrap_angle,
)
from .timing import solve_mixing_angle


@dataclass(frozen=True)
class Hamiltonian2:
    """Hermitian 2x2 operator stored as real diagonal plus the upper entry.

    h_pw is always the conjugate of h_wp, so Hermiticity holds by
    construction.
    """

    h_ww: float
    h_wp: complex
    h_pp: float

    def __post_init__(self):
        object.__setattr__(self, "h_ww", float(self.h_ww))
        object.__setattr__(self, "h_wp", complex(self.h_wp))
        object.__setattr__(self, "h_pp", float(self.h_pp))

    @classmethod
    def from_matrix(cls, m, atol: float = 1e-12) -> "Hamiltonian2":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidParameter(f"expected a 2x2 matrix, got shape {m.shape}")
        err = np.max(np.abs(m - m.conj().T))
        if err > atol:
            raise InvalidParameter(f"matrix is not Hermitian (max deviation {err:.3e})")
        return cls(m[0, 0].real, (m[0, 1] + m[1, 0].conjugate()) / 2, m[1, 1].real)

    @property
    def h_pw(self) -> complex:
        return self.h_wp.conjugate()

    def matrix(self) -> np.ndarray:
        return np.array([[self.h_ww, self.h_wp], [self.h_pw, self.h_pp]], dtype=complex)

    @property
    def trace(self) -> float:
        return self.h_ww + self.h_pp

    @property
    def e_p(self) -> float:
        return 0.5 * (self.h_ww + self.h_pp)

    @property
    def e_o(self) -> float:
        return math.hypot(0.5 * (self.h_ww - self.h_pp), abs(self.h_wp))

    def eigenvalues(self) -> tuple[float, float]:
        """(E1, E2) with E1 >= E2."""
        return self.e_p + self.e_o, self.e_p - self.e_o

    def eigenstates(self) -> tuple[QubitState, QubitState]:
        """Eigenvectors for (E1, E2) in the rotated form

        |E1> = e^{i alpha} cos x |w> + sin x |w_perp>
        |E2> = -sin x |w> + e^{-i alpha} cos x |w_perp>

        with alpha = arg(h_wp).  A degenerate spectrum returns the basis.
        """
        e_o = self.e_o
        if e_o == 0.0:
            return QubitState(1.0, 0.0), QubitState(0.0, 1.0)
        x = 0.5 * math.atan2(abs(self.h_wp), 0.5 * (self.h_ww - self.h_pp))
        alpha = cmath.phase(self.h_wp) if self.h_wp != 0 else 0.0
        c, s = math.cos(x), math.sin(x)
        ph = cmath.exp(1j * alpha)
        return QubitState(ph * c, s), QubitState(-s, ph.conjugate() * c)

    def spectral(self) -> SpectralParams:
        alpha = cmath.phase(self.h_wp) if self.h_wp != 0 else 0.0
        return SpectralParams(self.e_p, self.e_o, alpha)

    def apply(self, psi: QubitState) -> QubitState:
        return QubitState(
            self.h_ww * psi.a_w + self.h_wp * psi.a_perp,
            self.h_pw * psi.a_w + self.h_pp * psi.a_perp,
        )


def from_spectral_angle(sp: SpectralParams, x: float) -> Hamiltonian2:
    """Spectral form with an explicit mixing angle ``x``.

    Diagonal E_p +- E_o cos 2x, off-diagonal E_o sin 2x e^{+-i alpha}.
    """
    c2, s2 = math.cos(2 * x), math.sin(2 * x)
    return Hamiltonian2(
        sp.e_p + sp.e_o * c2,
        sp.e_o * s2 * cmath.exp(1j * sp.alpha),
        sp.e_p - sp.e_o * c2,
    )


def from_spectral_tuned(sp: SpectralParams, init: InitialState) -> Hamiltonian2:
    """Spectral form with x chosen so that |s> reaches |w> with certainty."""
    return from_spectral_angle(sp, solve_mixing_angle(init, sp.alpha).x)


def from_coupling(cp: CouplingParams, init: InitialState) -> Hamiltonian2:
    """E_fg(|w><w| + |s><s|) + E_f(e^{i phi}|w><s| + h.c.) written out entrywise."""
    sb, cb = math.sin(init.beta), math.cos(init.beta)
    d = cp.phi - init.u
    return Hamiltonian2(
        cp.e_fg * (1 + sb * sb) + 2 * cp.e_f * math.cos(d) * sb,
        cmath.exp(1j * init.u) * (cp.e_f * cmath.exp(1j * d) + cp.e_fg * sb) * cb,
        cp.e_fg * cb * cb,
    )


def from_projectors(cp: CouplingParams, init: InitialState) -> Hamiltonian2:
    """Same operator as ``from_coupling`` but assembled from outer products of the kets."""
    w = np.array([1.0, 0.0], dtype=complex)
    s = init.ket.to_array()
    ws = np.outer(w, s.conj())
    m = cp.e_fg * (np.outer(w, w.conj()) + np.outer(s, s.conj()))
    m = m + cp.e_f * (cmath.exp(1j * cp.phi) * ws + cmath.exp(-1j * cp.phi) * ws.conj().T)
    return Hamiltonian2.from_matrix(m)


def farhi_gutmann(e_fg: float, init: InitialState) -> Hamiltonian2:
    """E_fg (|w><w| + |s><s|)."""
    w = np.array([1.0, 0.0], dtype=complex)
    s = init.ket.to_array()
    return Hamiltonian2.from_matrix(e_fg * (np.outer(w, w.conj()) + np.outer(s, s.conj())))


def fenner(e_f: float, init: InitialState) -> Hamiltonian2:
    """E_f i (|w><s| - |s><w|)."""
    w = np.array([1.0, 0.0], dtype=complex)
    s = init.ket.to_array()
    ws = np.outer(w, s.conj())
    return Hamiltonian2.from_matrix(1j * e_f * (ws - ws.conj().T))


def bae_kwon(cp: CouplingParams, init: InitialState) -> Hamiltonian2:
    """Real search Hamiltonian for phi = n*pi and u = 0.

    Upper signs correspond to phi = 0, lower signs to phi = pi:

        [[E_fg(1 + sin^2 b) +- 2 E_f sin b, (E_fg sin b +- E_f) cos b],
         [(E_fg sin b +- E_f) cos b,        E_fg cos^2 b            ]]
    """
    if abs(init.u) > ANGLE_TOL:
        raise InvalidParameter(f"requires u = 0, got {init.u}")
    phi = wrap_angle(cp.phi)
    if abs(phi) <= ANGLE_TOL:
        sign = 1.0
    elif abs(abs(phi) - math.pi) <= ANGLE_TOL:
        sign = -1.0
    else:
        raise InvalidParameter(f"phi must be a multiple of pi, got {cp.phi}")
    sb, cb = math.sin(init.beta), math.cos(init.beta)
    off = (cp.e_fg * sb + sign * cp.e_f) * cb
    return Hamiltonian2(cp.e_fg * (1 + sb * sb) + sign * 2 * cp.e_f * sb, off, cp.e_fg * cb * cb)
