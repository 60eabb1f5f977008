"""Closed-form exponential mapping: covector -> endpoint of its elastica.

The endpoint (x_t, y_t, theta_t) of the unit-speed curve driven by the
pendulum solution is expressed through Jacobi functions on the oscillating
stratum, through the reciprocal-modulus transform of the *same* expressions
on the rotating strata (one code path, no second transcription), through
hyperbolic functions on the separatrix, and through circular/linear motion
in the degenerate cases.  Minus branches are obtained from plus branches by
the phase-space inversion (beta, c) -> (-beta, -c), which acts on endpoints
as (theta, x, y) -> (-theta, x, -y).

The tangent angle always satisfies theta_t = beta_t - beta_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .elliptic import JacobiValues, jacobi, jacobi_recip_modulus
from .phase import (
    ROTATING,
    SEPARATRIX,
    Covector,
    Stratum,
    stratify,
    to_elliptic,
    wrap_angle,
)

CLASS_K_TOL = 1e-9


def _sech(u: float) -> float:
    """1/cosh with underflow to zero instead of overflow for |u| > ~710."""
    return 1.0 / math.cosh(u) if abs(u) < 709.0 else 0.0


@dataclass(frozen=True)
class State:
    """Group element (x, y, theta) reached by the elastica; theta in (-pi, pi]."""

    x: float
    y: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(self.theta))


class ElasticaClass(Enum):
    LINE = "Line"
    INFLECTIONAL_SMALL_K = "InflectionalSmallK"
    RECTANGULAR = "Rectangular"
    INFLECTIONAL_MID_K = "InflectionalMidK"
    FIGURE_EIGHT = "FigureEight"
    INFLECTIONAL_LARGE_K = "InflectionalLargeK"
    CRITICAL = "Critical"
    NON_INFLECTIONAL = "NonInflectional"
    CIRCLE = "Circle"


def _endpoint_oscillating(
    k: float, sr: float, t: float, j0: JacobiValues, jt: JacobiValues
):
    """Endpoint from the oscillating-stratum quadratures.

    Written for algebraic modulus k; fed with reciprocal-modulus Jacobi
    values (and k > 1) it yields the rotating-stratum endpoint as well.
    """
    dE = jt.eps - j0.eps
    k2 = k * k
    sin_half = k * (j0.dn * jt.sn - j0.sn * jt.dn)
    cos_half = j0.dn * jt.dn + k2 * j0.sn * jt.sn
    theta = 2.0 * math.atan2(sin_half, cos_half)
    x = (
        (2.0 / sr) * j0.dn * j0.dn * dE
        + (4.0 * k2 / sr) * j0.dn * j0.sn * (j0.cn - jt.cn)
        + (2.0 * k2 / sr) * j0.sn * j0.sn * (sr * t - dE)
        - t
    )
    y = (2.0 * k / sr) * (2.0 * j0.dn * j0.dn - 1.0) * (j0.cn - jt.cn) - (
        2.0 * k / sr
    ) * j0.sn * j0.dn * (2.0 * dE - sr * t)
    return x, y, theta


def _normal_form(lam: Covector, tol=None):
    """Classify lam and reduce minus branches to plus via the inversion i.

    Returns (stratum, plus-branch covector, invert flag).
    """
    s = stratify(lam, tol)
    if s in (Stratum.N2_MINUS, Stratum.N3_MINUS):
        return s, Covector(-lam.beta, -lam.c, lam.r), True
    return s, lam, False


def _prepare(lam: Covector) -> Callable[[float], tuple]:
    """Precompute the per-covector data; return t -> (x, y, theta)."""
    s, lam_p, inverted = _normal_form(lam)

    if s in (Stratum.N4, Stratum.N5, Stratum.N7):

        def line(t: float):
            return t, 0.0, 0.0

        return line

    if s in (Stratum.N6_PLUS, Stratum.N6_MINUS):
        c = lam.c

        def circle(t: float):
            ct = c * t
            return math.sin(ct) / c, (1.0 - math.cos(ct)) / c, ct

        return circle

    ec = to_elliptic(lam_p)
    r = ec.r
    sr = math.sqrt(r)

    if s is Stratum.N1:
        k = float(ec.k)
        u0 = sr * ec.phi
        j0 = jacobi(u0, k)

        def oscillating(t: float):
            return _endpoint_oscillating(k, sr, t, j0, jacobi(u0 + sr * t, k))

        return oscillating

    if s in ROTATING:
        k = float(ec.k)
        k_alg = 1.0 / k
        u0 = sr * ec.phi
        j0 = jacobi_recip_modulus(u0, k)

        def rotating(t: float):
            jt = jacobi_recip_modulus(u0 + sr * t, k)
            x, y, theta = _endpoint_oscillating(k_alg, sr, t, j0, jt)
            return (x, -y, -theta) if inverted else (x, y, theta)

        return rotating

    # separatrix: hyperbolic closed forms (numerically stable at k = 1)
    u0 = sr * ec.phi
    th0 = math.tanh(u0)
    se0 = _sech(u0)

    def critical(t: float):
        ut = u0 + sr * t
        tht = math.tanh(ut)
        sett = _sech(ut)
        dth = tht - th0
        dse = se0 - sett
        x = (
            (2.0 / sr) * (1.0 - 2.0 * th0 * th0) * dth
            + (4.0 / sr) * th0 * se0 * dse
            - (1.0 - 2.0 * th0 * th0) * t
        )
        y = (
            (2.0 / sr) * (2.0 * se0 * se0 - 1.0) * dse
            - (4.0 / sr) * th0 * se0 * dth
            + 2.0 * th0 * se0 * t
        )
        theta = 2.0 * math.atan2(
            tht * se0 - th0 * sett, se0 * sett + th0 * tht
        )
        return (x, -y, -theta) if inverted else (x, y, theta)

    return critical


def exp_map(lam: Covector, t: float) -> State:
    """Endpoint of the elastica of lam at arc length t >= 0."""
    if t < 0.0:
        raise ValueError("exp_map needs t >= 0")
    return State(*_prepare(lam)(t))


def sample_elastica(lam: Covector, t1: float, n: int) -> list[State]:
    """n uniformly spaced endpoint samples over [0, t1], endpoints included."""
    if n < 2:
        raise ValueError("need at least two samples")
    if t1 <= 0.0:
        raise ValueError("need t1 > 0")
    at = _prepare(lam)
    step = t1 / (n - 1)
    return [State(*at(i * step)) for i in range(n)]


def classify(lam: Covector, tol: float = CLASS_K_TOL) -> ElasticaClass:
    """Euler's nine qualitative classes, decided by stratum and modulus."""
    from .maxwell import find_k0  # deferred import: avoids a module cycle

    s = stratify(lam)
    if s in (Stratum.N4, Stratum.N5, Stratum.N7):
        return ElasticaClass.LINE
    if s in (Stratum.N6_PLUS, Stratum.N6_MINUS):
        return ElasticaClass.CIRCLE
    if s in SEPARATRIX:
        return ElasticaClass.CRITICAL
    if s in ROTATING:
        return ElasticaClass.NON_INFLECTIONAL
    k = float(to_elliptic(lam).k)
    k_rect = 1.0 / math.sqrt(2.0)
    k0 = float(find_k0())
    if abs(k - k_rect) <= tol:
        return ElasticaClass.RECTANGULAR
    if abs(k - k0) <= tol:
        return ElasticaClass.FIGURE_EIGHT
    if k < k_rect:
        return ElasticaClass.INFLECTIONAL_SMALL_K
    if k < k0:
        return ElasticaClass.INFLECTIONAL_MID_K
    return ElasticaClass.INFLECTIONAL_LARGE_K


def elastic_energy_closed(lam: Covector, t: float) -> float:
    """Bending energy (1/2) integral of curvature^2 over [0, t], in closed form.

    The curvature along the extremal is the pendulum velocity c_s, whose
    square integrates through the epsilon function (oscillating/rotating)
    or tanh (separatrix); zero exactly on the line strata.
    """
    if t < 0.0:
        raise ValueError("elastic energy needs t >= 0")
    s, lam_p, _ = _normal_form(lam)
    if s in (Stratum.N4, Stratum.N5, Stratum.N7):
        return 0.0
    if s in (Stratum.N6_PLUS, Stratum.N6_MINUS):
        return 0.5 * lam.c * lam.c * t
    ec = to_elliptic(lam_p)
    r = ec.r
    sr = math.sqrt(r)
    if s is Stratum.N1:
        k = float(ec.k)
        u0 = sr * ec.phi
        dE = jacobi(u0 + sr * t, k).eps - jacobi(u0, k).eps
        return 2.0 * sr * (dE - (1.0 - k * k) * sr * t)
    if s in ROTATING:
        k = float(ec.k)
        v0 = sr * ec.psi
        dE = jacobi(v0 + sr * t / k, k).eps - jacobi(v0, k).eps
        return 2.0 * sr / k * dE
    u0 = sr * ec.phi
    return 2.0 * sr * (math.tanh(u0 + sr * t) - math.tanh(u0))
