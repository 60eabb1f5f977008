"""Discrete symmetries: the reflection group acting on endpoints and covectors.

The three reflections of the pendulum phase cylinder generate, with the
identity, the dihedral group D2.  They lift to extremal trajectories and
descend both to the endpoint space (acting on (theta, x, y)) and to the
initial covector (acting through the terminal vertical state).  Modulo time
reversal and rotations, reflection 1 flips an elastic arc in the center of
its chord, reflection 2 in the middle perpendicular of the chord, and
reflection 3 in the chord itself.

Fixed points of the endpoint action are the sets {theta = 0}, {P = 0} and
the two lines {y = 0, theta in {0, pi}}, where P = x sin(theta/2)
- y cos(theta/2); fixed points of the covector action are read off the
midpoint coordinate tau in each stratum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

from .elliptic import jacobi
from .expmap import State
from .phase import (
    ROTATING,
    SEPARATRIX,
    Covector,
    Stratum,
    flow_vertical,
    stratify,
    to_elliptic,
    wrap_angle,
)


class Reflection(IntEnum):
    """The three nontrivial elements of the dihedral symmetry group."""

    CHORD_CENTER = 1
    CHORD_PERPENDICULAR = 2
    CHORD = 3


_COMPOSE = {(1, 2): 3, (2, 1): 3, (1, 3): 2, (3, 1): 2, (2, 3): 1, (3, 2): 1}


def compose(i, j) -> int:
    """Group composition; 0 encodes the identity element."""
    i, j = int(i), int(j)
    if i == 0:
        return j
    if j == 0:
        return i
    if i == j:
        return 0
    return _COMPOSE[(i, j)]


@dataclass(frozen=True)
class MaxwellCoords:
    """Midpoint/half-length coordinates (tau, p) of an elastic arc.

    tau marks the arc midpoint in the rectified phase, p half the rectified
    arc length: p = sqrt(r) t / 2 on the oscillating stratum and separatrix,
    p = sqrt(r) t / (2k) on the rotating strata.
    """

    tau: float
    p: float


def reflect_state(i, q: State) -> State:
    """Action of reflection i on an endpoint (theta, x, y); an involution."""
    i = Reflection(i)
    ct, st = math.cos(q.theta), math.sin(q.theta)
    if i is Reflection.CHORD_CENTER:
        return State(q.x * ct + q.y * st, -q.x * st + q.y * ct, -q.theta)
    if i is Reflection.CHORD_PERPENDICULAR:
        return State(q.x * ct + q.y * st, q.x * st - q.y * ct, q.theta)
    return State(q.x, -q.y, -q.theta)


def reflect_covector(i, lam: Covector, t: float) -> Covector:
    """Action of reflection i on a covector, through its time-t vertical state.

    Preserves r and the pendulum energy.  The action depends on t: the
    reflected trajectory is the one meeting the original at time t.
    """
    i = Reflection(i)
    if i is Reflection.CHORD:
        return Covector(-lam.beta, -lam.c, lam.r)
    lt = flow_vertical(lam, t)
    if i is Reflection.CHORD_CENTER:
        return Covector(lt.beta, -lt.c, lam.r)
    return Covector(-lt.beta, lt.c, lam.r)


def _half_angle(theta: float) -> float:
    """Representative theta/2 in (-pi/2, pi/2] of the normalized angle."""
    return 0.5 * wrap_angle(theta)


def P_of(q: State) -> float:
    """P = x sin(theta/2) - y cos(theta/2); zero iff q is fixed by reflection 2.

    Defined up to sign (the theta/2 representative); only the zero set and
    |P| are contract-stable.
    """
    h = _half_angle(q.theta)
    return q.x * math.sin(h) - q.y * math.cos(h)


def Q_of(q: State) -> float:
    """Q = x cos(theta/2) + y sin(theta/2); companion rotation of P."""
    h = _half_angle(q.theta)
    return q.x * math.cos(h) + q.y * math.sin(h)


def is_fixed_state(i, q: State, tol: float = 1e-9) -> bool:
    """Whether the endpoint q lies on the fixed-point set of reflection i."""
    i = Reflection(i)
    if i is Reflection.CHORD_CENTER:
        return abs(wrap_angle(q.theta)) < tol
    if i is Reflection.CHORD_PERPENDICULAR:
        scale = max(1.0, math.hypot(q.x, q.y))
        return abs(P_of(q)) < tol * scale
    return m3_branch(q, tol) is not None


def m3_branch(q: State, tol: float = 1e-9) -> str | None:
    """Branch of the chord-reflection fixed set: "plus" (theta=0), "minus" (theta=pi)."""
    if abs(q.y) >= tol:
        return None
    th = wrap_angle(q.theta)
    if abs(th) < tol:
        return "plus"
    if abs(abs(th) - math.pi) < tol:
        return "minus"
    return None


def maxwell_coords(lam: Covector, t: float) -> MaxwellCoords:
    """(tau, p) of the arc [0, t] of lam's extremal; needs lam in N1/N2/N3."""
    s = stratify(lam)
    ec = to_elliptic(lam)
    sr = math.sqrt(ec.r)
    if s in ROTATING:
        k = float(ec.k)
        p = sr * t / (2.0 * k)
        return MaxwellCoords(tau=sr * ec.psi + p, p=p)
    p = sr * t / 2.0
    return MaxwellCoords(tau=sr * ec.phi + p, p=p)


def is_fixed_covector(i, lam: Covector, t: float, tol: float = 1e-9) -> bool:
    """Whether reflection i maps lam's trajectory over [0, t] to itself.

    Per-stratum conditions on the midpoint coordinate tau; reflections 1 and
    3 fix nothing in the rotating, separatrix and circular strata, and the
    equilibrium strata are fixed by everything.
    """
    i = Reflection(i)
    s = stratify(lam)
    if s in (Stratum.N4, Stratum.N5, Stratum.N7):
        return True
    if s in (Stratum.N6_PLUS, Stratum.N6_MINUS):
        if i is Reflection.CHORD_PERPENDICULAR:
            return abs(wrap_angle(2.0 * lam.beta + lam.c * t)) < tol
        return False
    ec = to_elliptic(lam)
    k = float(ec.k)
    sr = math.sqrt(ec.r)
    if s in ROTATING:
        mc = MaxwellCoords(
            tau=sr * ec.psi + sr * t / (2.0 * k), p=sr * t / (2.0 * k)
        )
    else:
        mc = MaxwellCoords(tau=sr * ec.phi + sr * t / 2.0, p=sr * t / 2.0)
    if s is Stratum.N1:
        jv = jacobi(mc.tau, k)
        if i is Reflection.CHORD_CENTER:
            return abs(jv.cn) < tol
        if i is Reflection.CHORD_PERPENDICULAR:
            return abs(jv.sn) < tol
        return False
    if s in SEPARATRIX:
        return i is Reflection.CHORD_PERPENDICULAR and abs(mc.tau) < tol
    # rotating strata
    if i is Reflection.CHORD_PERPENDICULAR:
        jv = jacobi(mc.tau, k)
        return abs(jv.sn * jv.cn) < tol
    return False
