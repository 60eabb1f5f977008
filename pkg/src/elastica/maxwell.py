"""Maxwell strata: root equations, threshold constants, and the cut-time bound.

An extremal cannot stay globally optimal past the first time its endpoint is
also reached by a distinct reflected extremal of equal bending energy.  In
the (tau, p) coordinates of an arc those meeting events reduce to scalar
equations: the p-lattice {2Kn} together with the roots of f1 on the
oscillating stratum, the lattice {Kn} on the rotating strata, and the root
curve of g1 (chord reflection through turned tangents) governed by the
constants k0 (figure-eight modulus, 2E = K), k* and u*.

All scalar roots are found by bracketing + Brent, with brackets supplied by
the localization facts encoded here, never by blind scanning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from scipy.optimize import brentq

from .elliptic import (
    Modulus,
    ellint_E,
    ellint_E_inc,
    ellint_F_inc,
    ellint_K,
    jacobi,
)
from .phase import (
    ROTATING,
    Covector,
    Stratum,
    stratify,
    to_elliptic,
)

DEFAULT_TOL = 1e-9
BRENT_XTOL = 1e-15
BRENT_RTOL = 8.9e-16
KSTAR_GRID_STEP = 1e-3
K0_SNAP = 1e-12  # within this distance of k0, lattice roots are exact
_ROOT_SCAN_MAX = 8  # lattice indices examined when locating first Maxwell times

K_RECT = 1.0 / math.sqrt(2.0)


class PoleError(ZeroDivisionError):
    """Evaluation at a pole of the reduced root function."""


class MaxwellStratum(Enum):
    MAX1 = "MAX1"
    MAX2 = "MAX2"
    MAX3_PLUS = "MAX3plus"
    MAX3_MINUS = "MAX3minus"


@dataclass(frozen=True)
class MaxwellReport:
    """First Maxwell times per reflection stratum and the cut-time upper bound.

    Times and the bound are +inf where the stratum is never met.  For
    oscillating covectors whose midpoint coordinate sits on the tau-lattice
    (cn tau * sn tau = 0 at the bound time) the bound is flagged: there the
    meeting partner degenerates and the bound rests on conjugate-point
    grounds rather than on a Maxwell point.
    """

    stratum: Stratum
    t1_max1: float
    t1_max2: float
    t1_max3plus: float
    t1_max3minus: float
    bound: float
    tau_degenerate: bool = False


# ---------------------------------------------------------------------------
# scalar root functions

def f1(p: float, k) -> float:
    """sn p dn p - (2 eps(p) - p) cn p: perpendicular-reflection equation, oscillating case.

    Odd in p; its positive roots p_n^1 mark arcs meeting their
    middle-perpendicular reflections.
    """
    kf = float(k)
    jv = jacobi(p, kf)
    return jv.sn * jv.dn - (2.0 * jv.eps - p) * jv.cn


def f2(p: float, k) -> float:
    """[k^2 sn p cn p + dn p ((2-k^2) p - 2 eps(p))] / k: rotating-case companion of f1.

    Vanishes only at p = 0, so non-inflectional arcs never meet their
    middle-perpendicular reflections away from the trivial time.
    """
    kf = float(k)
    jv = jacobi(p, kf)
    return (kf * kf * jv.sn * jv.cn + jv.dn * ((2.0 - kf * kf) * p - 2.0 * jv.eps)) / kf


def g1_n1(p: float, k) -> float:
    """Chord-reflection (turned-tangent) equation on the oscillating stratum.

    (1 - k^2 + k^2 cn^4 p)(2 eps(p) - p) + cn p sn p dn p (2 k^2 sn^2 p - 1);
    behaves like (2/3) p^3 at the origin.
    """
    kf = float(k)
    jv = jacobi(p, kf)
    cn2 = jv.cn * jv.cn
    return (1.0 - kf * kf + kf * kf * cn2 * cn2) * (2.0 * jv.eps - p) + (
        jv.cn * jv.sn * jv.dn * (2.0 * kf * kf * jv.sn * jv.sn - 1.0)
    )


def g1_n2(p: float, k) -> float:
    """Chord-reflection equation on the rotating strata; positive on (0, K)."""
    kf = float(k)
    jv = jacobi(p, kf)
    sn2 = jv.sn * jv.sn
    return (
        kf * kf * jv.cn * jv.sn * jv.dn * (2.0 * sn2 - 1.0)
        + (1.0 - 2.0 * sn2 + kf * kf * sn2 * sn2)
        * (2.0 * jv.eps - (2.0 - kf * kf) * p)
    ) / kf


# ---------------------------------------------------------------------------
# amplitude-variable auxiliaries for the chord-reflection root curve

def a1(u: float, k) -> float:
    """Quadratic in cos 2u whose sign drives the monotonicity of h2.

    c0 + c1 cos 2u + c2 cos^2 2u with c0 = 8 - 10k^2 + 4k^4,
    c1 = 4k^2(3 - 2k^2), c2 = 2k^2(2k^2 - 1); equals 8 at u = 0 for every k.
    """
    kf = float(k)
    k2 = kf * kf
    c0 = 8.0 - 10.0 * k2 + 4.0 * k2 * k2
    c1 = 4.0 * k2 * (3.0 - 2.0 * k2)
    c2 = 2.0 * k2 * (2.0 * k2 - 1.0)
    t = math.cos(2.0 * u)
    return c0 + c1 * t + c2 * t * t


def h1(u: float, k) -> float:
    """g1_n1 written in the amplitude variable u = am p."""
    kf = float(k)
    k2 = kf * kf
    cu, su = math.cos(u), math.sin(u)
    return (1.0 - k2 + k2 * cu**4) * (
        2.0 * ellint_E_inc(u, kf) - ellint_F_inc(u, kf)
    ) + cu * su * math.sqrt(1.0 - k2 * su * su) * (2.0 * k2 * su * su - 1.0)


def h2(u: float, k) -> float:
    """h1 normalized by its positive prefactor 1 - k^2 + k^2 cos^4 u."""
    kf = float(k)
    den = 1.0 - kf * kf + kf * kf * math.cos(u) ** 4
    if abs(den) < 1e-300:
        raise PoleError(f"h2 pole at u = {u}, k = {kf}")
    return h1(u, kf) / den


def h2_du(u: float, k) -> float:
    """du-derivative of h2; its sign is the sign of a1."""
    kf = float(k)
    k2 = kf * kf
    den = 1.0 - k2 + k2 * math.cos(u) ** 4
    pref = (
        math.sin(u) ** 2
        * math.sqrt(2.0 - k2 + k2 * math.cos(2.0 * u))
        / (4.0 * math.sqrt(2.0) * den * den)
    )
    return pref * a1(u, kf)


def compat_n1(u: float, k) -> float:
    """Compatibility margin 2 k^2 sin^2 u - 1 of the chord-reflection system.

    Nonnegative values make the tau-equation solvable.
    """
    kf = float(k)
    return 2.0 * kf * kf * math.sin(u) ** 2 - 1.0


# ---------------------------------------------------------------------------
# constants and root curves

@lru_cache(maxsize=1)
def find_k0() -> Modulus:
    """The unique modulus in (1/sqrt(2), 1) with 2E(k) = K(k) (figure-eight)."""
    k0 = brentq(
        lambda k: 2.0 * ellint_E(k) - ellint_K(k),
        K_RECT,
        1.0 - 1e-12,
        xtol=BRENT_XTOL,
        rtol=BRENT_RTOL,
    )
    return Modulus(k0)


def u_a1(k) -> float:
    """Unique zero of a1 in (pi/4, pi/2] for k in [1/sqrt(2), 1].

    Equals pi/2 at both endpoint moduli; solved from the quadratic in
    cos 2u with the cancellation-free root formula.
    """
    kf = float(k)
    if not K_RECT - 1e-14 <= kf <= 1.0:
        raise ValueError(f"u_a1 needs k in [1/sqrt(2), 1], got {kf}")
    k2 = kf * kf
    c0 = 8.0 - 10.0 * k2 + 4.0 * k2 * k2
    c1 = 4.0 * k2 * (3.0 - 2.0 * k2)
    c2 = 2.0 * k2 * (2.0 * k2 - 1.0)
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc <= 0.0:
        return math.pi / 2.0
    t = -2.0 * c0 / (c1 + math.sqrt(disc))
    t = max(-1.0, min(0.0, t))
    return 0.5 * math.acos(t)


def _alpha(k: float) -> float:
    """h1 along the curve u = pi - u_a1(k); its largest zero defines k*."""
    return h1(math.pi - u_a1(k), k)


@lru_cache(maxsize=1)
def find_kstar():
    """(k*, u*): threshold below which the chord-reflection stratum is empty.

    k* is the supremum of zeros of alpha(k) = h1(pi - u_a1(k), k) below the
    figure-eight modulus; located by descending from k0 in fixed steps until
    the sign change, then Brent-refined, then verified negative on a grid of
    (k*, k0].
    """
    k0 = float(find_k0())
    hi = k0
    val_hi = _alpha(hi)
    lo = hi
    while True:
        lo = hi - KSTAR_GRID_STEP
        if lo <= K_RECT:
            raise RuntimeError("no sign change of alpha above 1/sqrt(2)")
        val_lo = _alpha(lo)
        if val_lo >= 0.0 > val_hi or val_lo > 0.0 >= val_hi:
            break
        hi, val_hi = lo, val_lo
    kstar = brentq(_alpha, lo, hi, xtol=BRENT_XTOL, rtol=BRENT_RTOL)
    for i in range(1, 200):
        kk = kstar + (k0 - kstar) * i / 200.0
        if _alpha(kk) >= 0.0:
            raise RuntimeError(f"alpha not negative on (k*, k0] at k = {kk}")
    ustar = math.pi - u_a1(kstar)
    return Modulus(kstar), ustar


def u_h1(k) -> float:
    """First positive zero in u of h1(., k), for k in [k*, 1).

    Lies in (pi/2, 3pi/4) below the figure-eight modulus, equals pi/2 there,
    and drops into (pi/4, pi/2) above it.
    """
    kf = float(k)
    kstar, _ = find_kstar()
    if not float(kstar) - 1e-12 <= kf < 1.0:
        raise ValueError(f"u_h1 needs k in [k*, 1), got {kf}")
    k0 = float(find_k0())
    if abs(kf - k0) < K0_SNAP:
        return math.pi / 2.0
    if kf < k0:
        lo, hi = math.pi / 2.0, math.pi - u_a1(kf)
    else:
        lo, hi = u_a1(kf), math.pi / 2.0
    flo, fhi = h1(lo, kf), h1(hi, kf)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    return brentq(lambda u: h1(u, kf), lo, hi, xtol=BRENT_XTOL, rtol=BRENT_RTOL)


def p_g1(k) -> float:
    """First positive root of g1_n1(., k): the amplitude zero mapped through F."""
    kf = float(k)
    return ellint_F_inc(u_h1(kf), kf)


def p1_roots(k, n: int) -> float:
    """n-th root p_n^1 of f1, odd in n, localized in (2Kn - K, 2Kn + K).

    For positive n the root sits right of the lattice point 2Kn below the
    figure-eight modulus, on it there, and left of it above.
    """
    kf = float(k)
    if not 0.0 < kf < 1.0:
        raise ValueError(f"p1_roots needs k in (0, 1), got {kf}")
    if n == 0:
        return 0.0
    if n < 0:
        return -p1_roots(kf, -n)
    K = ellint_K(kf)
    k0 = float(find_k0())
    if abs(kf - k0) < K0_SNAP:
        return 2.0 * K * n
    if kf < k0:
        lo, hi = 2.0 * K * n, 2.0 * K * n + K
    else:
        lo, hi = 2.0 * K * n - K, 2.0 * K * n
    return brentq(lambda p: f1(p, kf), lo, hi, xtol=BRENT_XTOL, rtol=BRENT_RTOL)


# ---------------------------------------------------------------------------
# Maxwell strata membership and first Maxwell times

def _lattice_index(x: float, step: float, tol: float):
    """Nearest lattice index n of x in step*Z, or None if farther than tol."""
    n = round(x / step)
    return n if abs(x - n * step) <= tol else None


def in_maxwell(lam: Covector, t: float, tol: float = DEFAULT_TOL) -> set:
    """Maxwell strata containing lam at time t, each equation tested at tol.

    Strata are measure-zero, so membership is meaningful only with a
    tolerance contract: lattice conditions compare p to the nearest lattice
    point, function conditions compare residuals against tol.
    """
    if t <= 0.0:
        raise ValueError("in_maxwell needs t > 0")
    s = stratify(lam)
    out: set[MaxwellStratum] = set()
    if s in (
        Stratum.N3_PLUS,
        Stratum.N3_MINUS,
        Stratum.N4,
        Stratum.N5,
        Stratum.N7,
    ):
        return out
    if s in (Stratum.N6_PLUS, Stratum.N6_MINUS):
        n = _lattice_index(lam.c * t, 2.0 * math.pi, tol)
        if n is not None and n != 0:
            out.add(MaxwellStratum.MAX1)
            out.add(MaxwellStratum.MAX3_PLUS)
        return out

    ec = to_elliptic(lam)
    k = float(ec.k)
    K = ellint_K(k)
    sr = math.sqrt(ec.r)

    if s is Stratum.N1:
        p = sr * t / 2.0
        tau = sr * ec.phi + p
        jt = jacobi(tau, k)
        jp = jacobi(p, k)
        n_even = _lattice_index(p, 2.0 * K, tol)
        on_even = n_even is not None and n_even != 0
        n_f1 = round(p / (2.0 * K))
        on_f1 = n_f1 >= 1 and abs(p - p1_roots(k, n_f1)) <= tol
        at_k0 = abs(k - float(find_k0())) <= tol
        if on_even and abs(jt.cn) > tol:
            out.add(MaxwellStratum.MAX1)
        if on_f1 and abs(jt.sn) > tol:
            out.add(MaxwellStratum.MAX2)
        if (
            (at_k0 and on_even)
            or (on_f1 and abs(jt.cn) <= tol)
            or (on_even and abs(jt.sn) <= tol)
        ):
            out.add(MaxwellStratum.MAX3_PLUS)
        sn2p = jp.sn * jp.sn
        if sn2p > 0.0:
            rhs = (2.0 * k * k * sn2p - 1.0) / (k * k * sn2p)
            if (
                -tol <= rhs <= 1.0 + tol
                and abs(g1_n1(p, k)) <= tol
                and abs(jt.sn * jt.sn - rhs) <= tol
            ):
                out.add(MaxwellStratum.MAX3_MINUS)
        return out

    # rotating strata
    p = sr * t / (2.0 * k)
    tau = sr * ec.psi + p
    jt = jacobi(tau, k)
    jp = jacobi(p, k)
    n = _lattice_index(p, K, tol)
    on_lattice = n is not None and n != 0
    if on_lattice and abs(jt.sn * jt.cn) > tol:
        out.add(MaxwellStratum.MAX1)
    if on_lattice and abs(jt.sn * jt.cn) <= tol:
        out.add(MaxwellStratum.MAX3_PLUS)
    sn2p = jp.sn * jp.sn
    if sn2p > 0.0:
        rhs = (2.0 * sn2p - 1.0) / (k * k * sn2p)
        if (
            -tol <= rhs <= 1.0 + tol
            and abs(g1_n2(p, k)) <= tol
            and abs(jt.sn * jt.sn - rhs) <= tol
        ):
            out.add(MaxwellStratum.MAX3_MINUS)
    return out


def _first_times_oscillating(k: float, u0: float, sr: float, tol: float):
    """First Maxwell times (max1, max2, max3+, max3-) for an N1 covector."""
    K = ellint_K(k)
    k0 = float(find_k0())
    j0 = jacobi(u0, k)

    t_max1 = 4.0 * K / sr if abs(j0.cn) > tol else math.inf

    t_max2 = math.inf
    for n in range(1, _ROOT_SCAN_MAX + 1):
        pn = p1_roots(k, n)
        if abs(jacobi(u0 + pn, k).sn) > tol:
            t_max2 = 2.0 * pn / sr
            break

    candidates = []
    if abs(k - k0) <= tol:
        candidates.append(4.0 * K / sr)
    if abs(j0.sn) <= tol:
        candidates.append(4.0 * K / sr)
    for n in range(1, _ROOT_SCAN_MAX + 1):
        pn = p1_roots(k, n)
        if abs(jacobi(u0 + pn, k).cn) <= tol:
            candidates.append(2.0 * pn / sr)
            break
    t_max3p = min(candidates) if candidates else math.inf

    t_max3m = math.inf
    kstar, _ = find_kstar()
    if k >= float(kstar):
        pg = p_g1(k)
        sn2p = jacobi(pg, k).sn ** 2
        rhs = (2.0 * k * k * sn2p - 1.0) / (k * k * sn2p)
        if -tol <= rhs <= 1.0 + tol:
            if abs(jacobi(u0 + pg, k).sn ** 2 - rhs) <= tol:
                t_max3m = 2.0 * pg / sr

    return t_max1, t_max2, t_max3p, t_max3m


def cut_time_bound(lam: Covector, tol: float = DEFAULT_TOL) -> MaxwellReport:
    """Upper bound on the cut time, with first per-reflection Maxwell times.

    Oscillating: (2/sqrt(r)) min(2K, p_1^1); rotating: (2k/sqrt(r)) K;
    circular: 2 pi/|c|; +inf on the separatrix, equilibria and the frozen
    case.  Scales like time under the dilation symmetry.
    """
    s = stratify(lam)
    if s in (
        Stratum.N3_PLUS,
        Stratum.N3_MINUS,
        Stratum.N4,
        Stratum.N5,
        Stratum.N7,
    ):
        return MaxwellReport(s, math.inf, math.inf, math.inf, math.inf, math.inf)
    if s in (Stratum.N6_PLUS, Stratum.N6_MINUS):
        T = 2.0 * math.pi / abs(lam.c)
        return MaxwellReport(s, T, math.inf, T, math.inf, T)

    ec = to_elliptic(lam)
    k = float(ec.k)
    sr = math.sqrt(ec.r)
    K = ellint_K(k)

    if s in ROTATING:
        v0 = sr * ec.psi
        bound = 2.0 * k * K / sr
        jv = jacobi(v0, k)
        on_lattice = abs(jv.sn * jv.cn) <= tol
        t1 = math.inf if on_lattice else bound
        t3p = bound if on_lattice else math.inf
        return MaxwellReport(s, t1, math.inf, t3p, math.inf, bound)

    u0 = sr * ec.phi
    k0 = float(find_k0())
    p1 = 2.0 * K if k <= k0 else p1_roots(k, 1)
    bound = 2.0 * p1 / sr
    t1, t2, t3p, t3m = _first_times_oscillating(k, u0, sr, tol)
    jb = jacobi(u0 + p1, k)
    return MaxwellReport(
        s,
        t1,
        t2,
        t3p,
        t3m,
        bound,
        tau_degenerate=abs(jb.cn * jb.sn) <= tol,
    )
