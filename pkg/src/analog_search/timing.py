"""Certainty condition, measuring instants and timing tolerance."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateInitialState, InvalidParameter, ZeroGapError
from .qmodel import (
    CouplingParams,
    DerivedGeometry,
    InitialState,
    SpectralParams,
    mixing_geometry,
    to_spectral,
)

__all__ = [
    "DerivedGeometry",
    "MeasuringSchedule",
    "solve_mixing_angle",
    "measuring_times",
    "first_time_from_coupling",
    "tolerance_window",
    "schedule_for_spectral",
    "schedule_for_coupling",
]


def solve_mixing_angle(init: InitialState, alpha: float) -> DerivedGeometry:
    """Mixing angle x that removes the time-independent part of <w_perp|e^{-iHt}|s>.

    cos 2x = sin(b) cos(alpha - u)/cos(g) and sin 2x = cos(b)/cos(g), where
    sin(g) = sin(b) sin(alpha - u).  Raises DegenerateInitialState when
    cos(g) = 0, i.e. |s> already is |w> up to phase.
    """
    geom = mixing_geometry(init, alpha)
    if geom.degenerate:
        raise DegenerateInitialState("cos(gamma) = 0: the initial state is the marked state up to phase")
    return geom


def _halfwidth(cos_beta: float, gamma: float, e_o: float, p_threshold: float) -> float:
    if not 0.0 <= p_threshold <= 1.0:
        raise InvalidParameter(f"p_threshold must lie in [0, 1], got {p_threshold}")
    if not e_o > 0:
        raise ZeroGapError("tolerance window needs e_o > 0")
    if cos_beta == 0.0:
        return math.pi / (2 * e_o)
    ratio = math.sqrt(1.0 - p_threshold) * math.cos(gamma) / cos_beta
    return math.asin(min(1.0, ratio)) / e_o


@dataclass(frozen=True)
class MeasuringSchedule:
    """Instants at which the marked state is found with probability one.

    ``degenerate`` marks the case where |s> already is |w> up to phase; then
    ``t_first`` is 0.
    """

    t_first: float
    period: float
    e_o: float
    gamma: float
    cos_beta: float
    degenerate: bool = False

    def instants(self, j: int) -> float:
        if j < 1:
            raise InvalidParameter(f"instant index starts at 1, got {j}")
        return self.t_first + (j - 1) * self.period

    def tolerance_halfwidth(self, p_threshold: float) -> float:
        if self.degenerate:
            return math.inf if self.e_o == 0 else math.pi / (2 * self.e_o)
        return _halfwidth(self.cos_beta, self.gamma, self.e_o, p_threshold)

    @property
    def p_floor(self) -> float:
        """Lowest probability reached during one period."""
        if self.degenerate:
            return 1.0
        return 1.0 - (self.cos_beta / math.cos(self.gamma)) ** 2


def measuring_times(geom: DerivedGeometry, init: InitialState, alpha: float, e_o: float) -> MeasuringSchedule:
    """t_j = ((2j - 1) pi/2 - asin(sin b sin(alpha - u)))/E_o.

    ``alpha`` is only used to check that ``geom`` belongs to (init, alpha).
    """
    if not e_o > 0:
        raise ZeroGapError("E_o = 0: the probability is constant, no finite measuring time")
    expected = math.sin(init.beta) * math.sin(alpha - init.u)
    if abs(math.sin(geom.gamma) - expected) > 1e-9:
        raise InvalidParameter("geometry does not match the initial state and alpha")
    period = math.pi / e_o
    cb = math.cos(init.beta)
    if geom.degenerate:
        return MeasuringSchedule(0.0, period, e_o, geom.gamma, cb, True)
    t_first = (math.pi / 2 - geom.gamma) / e_o
    return MeasuringSchedule(t_first, period, e_o, geom.gamma, cb)


def first_time_from_coupling(cp: CouplingParams, init: InitialState) -> float:
    """First certainty instant written directly in (E_fg, E_f, phi, u, beta).

    With d = phi - u and r = E_f cos d + E_fg sin b:

        E_o = sqrt(r^2 + E_f^2 sin^2 d cos^2 b)
        t_1 = (pi/2 - asin(E_f sin b sin d / sqrt(r^2 + E_f^2 sin^2 d))) / E_o
    """
    sb, cb = math.sin(init.beta), math.cos(init.beta)
    d = cp.phi - init.u
    r = cp.e_f * math.cos(d) + cp.e_fg * sb
    im = cp.e_f * math.sin(d)
    e_o = math.sqrt(r * r + im * im * cb * cb)
    if e_o == 0.0:
        raise ZeroGapError("E_o = 0: the probability is constant, no finite measuring time")
    arg = sb * im / math.sqrt(r * r + im * im)
    arg = max(-1.0, min(1.0, arg))
    return (math.pi / 2 - math.asin(arg)) / e_o


def tolerance_window(init: InitialState, geom: DerivedGeometry, e_o: float, p_threshold: float) -> float:
    """Half-width delta around each measuring instant where P stays >= p_threshold.

    Derived from the probability law: at t_1 + delta,
    P = 1 - (cos^2 b / cos^2 g) sin^2(E_o delta), so

        delta = asin(min(1, sqrt(1 - p) cos g / cos b)) / E_o.

    A threshold at or below the probability floor gives the half period
    pi/(2 E_o).  The width scales exactly as 1/E_o.
    """
    return _halfwidth(math.cos(init.beta), geom.gamma, e_o, p_threshold)


def schedule_for_spectral(sp: SpectralParams, init: InitialState) -> MeasuringSchedule:
    """Schedule with the degenerate case folded into a t_first = 0 marker."""
    geom = mixing_geometry(init, sp.alpha)
    if sp.e_o == 0.0 and (geom.degenerate or init.beta == math.pi / 2):
        return MeasuringSchedule(0.0, math.inf, 0.0, geom.gamma, math.cos(init.beta), True)
    return measuring_times(geom, init, sp.alpha, sp.e_o)


def schedule_for_coupling(cp: CouplingParams, init: InitialState) -> MeasuringSchedule:
    sp, _ = to_spectral(cp, init)
    return schedule_for_spectral(sp, init)
