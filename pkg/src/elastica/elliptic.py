"""Jacobi elliptic integrals and functions on the real modulus k in [0, 1].

Everything is built on the arithmetic-geometric mean (AGM): complete
integrals come straight from the AGM scale, incomplete integrals from the
ascending Landen transformation of the amplitude, and the Jacobi functions
sn/cn/dn together with the amplitude am and Jacobi's epsilon function (the
incomplete second-kind integral of the amplitude) from the descending
recursion over the same scale.  The degenerate moduli k = 0 and k = 1 are
dispatched to their trigonometric/hyperbolic closed forms instead of being
approached as limits.

The epsilon function is returned unreduced: eps(u + 2K) = eps(u) + 2E, so
differences eps(b) - eps(a) over long arguments are meaningful.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

AGM_MAX_ITER = 32
AGM_TOL = 1e-15

# Below this distance from k = 0 or k = 1 the modulus derivatives are
# dominated by the 1/(k (1 - k^2)) factor and lose digits.
DERIV_CONDITIONING_LIMIT = 1e-3


class EllipticDomainError(ValueError):
    """Argument outside the real domain of the requested function."""


class EllipticDivergenceError(ValueError):
    """The requested integral diverges (k = 1 endpoint)."""


@dataclass(frozen=True)
class Modulus:
    """Elliptic modulus k in [0, 1] with its cached complement k' = sqrt(1-k^2)."""

    k: float
    kprime: float = float("nan")

    def __post_init__(self):
        k = float(self.k)
        if not 0.0 <= k <= 1.0 or math.isnan(k):
            raise EllipticDomainError(f"modulus must lie in [0, 1], got {k}")
        if math.isnan(self.kprime):
            # (1-k)(1+k) avoids cancellation for k near 1
            object.__setattr__(self, "kprime", math.sqrt((1.0 - k) * (1.0 + k)))
        elif abs(k * k + self.kprime**2 - 1.0) > 1e-14:
            raise EllipticDomainError("kprime inconsistent with k")

    def __float__(self) -> float:
        return self.k


@dataclass(frozen=True)
class JacobiValues:
    """Values sn u, cn u, dn u, the amplitude am u, and epsilon eps = E(u)."""

    sn: float
    cn: float
    dn: float
    am: float
    eps: float


def _as_k(k) -> float:
    """Accept a Modulus or a bare float and return the float modulus."""
    kf = float(k)
    if not 0.0 <= kf <= 1.0 or math.isnan(kf):
        raise EllipticDomainError(f"modulus must lie in [0, 1], got {kf}")
    return kf


@lru_cache(maxsize=512)
def _agm_scale(k: float):
    """AGM scale for modulus k in (0, 1).

    Returns (a, b, c, n) tuples with a[0] = 1, b[0] = k', c[0] = k and
    c[i] = (a[i-1] - b[i-1]) / 2, truncated at the first |c[n]| < AGM_TOL.
    """
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    a = [1.0]
    b = [kp]
    c = [k]
    for _ in range(AGM_MAX_ITER):
        an = 0.5 * (a[-1] + b[-1])
        bn = math.sqrt(a[-1] * b[-1])
        cn = 0.5 * (a[-1] - b[-1])
        a.append(an)
        b.append(bn)
        c.append(cn)
        if abs(cn) < AGM_TOL:
            break
    return tuple(a), tuple(b), tuple(c), len(a) - 1


def ellint_K(k) -> float:
    """Complete elliptic integral of the first kind K(k)."""
    kf = _as_k(k)
    if kf == 1.0:
        raise EllipticDivergenceError("K(k) diverges as k -> 1")
    if kf == 0.0:
        return math.pi / 2.0
    a, _, _, n = _agm_scale(kf)
    return math.pi / (2.0 * a[n])


def ellint_E(k) -> float:
    """Complete elliptic integral of the second kind E(k)."""
    kf = _as_k(k)
    if kf == 0.0:
        return math.pi / 2.0
    if kf == 1.0:
        return 1.0
    a, _, c, n = _agm_scale(kf)
    s = sum(2.0 ** (i - 1) * c[i] * c[i] for i in range(n + 1))
    return math.pi / (2.0 * a[n]) * (1.0 - s)


def _reduce_phase(phi: float):
    """Split phi = phi_red + m*pi with phi_red in [-pi/2, pi/2]."""
    m = math.floor(phi / math.pi + 0.5)
    return phi - m * math.pi, m


def _incomplete_agm(phi: float, k: float):
    """(F, E) at amplitude phi in [-pi/2, pi/2] for k in (0, 1).

    Ascending Landen transformation of the amplitude; the zeta sum over the
    scale gives the second-kind integral through E = Z + (E/K) F.
    """
    sign = 1.0
    if phi < 0.0:
        sign, phi = -1.0, -phi
    a, b, c, n = _agm_scale(k)
    phi_i = phi
    zeta = 0.0
    for i in range(1, n + 1):
        d = math.atan2(b[i - 1] * math.sin(phi_i), a[i - 1] * math.cos(phi_i))
        d += 2.0 * math.pi * math.floor((phi_i - d) / (2.0 * math.pi) + 0.5)
        phi_i = phi_i + d
        zeta += c[i] * math.sin(phi_i)
    K = math.pi / (2.0 * a[n])
    s = sum(2.0 ** (i - 1) * c[i] * c[i] for i in range(n + 1))
    E = K * (1.0 - s)
    F = phi_i / (2.0**n * a[n])
    return sign * F, sign * (zeta + E / K * F)


def ellint_F_inc(phi: float, k) -> float:
    """Incomplete first-kind integral F(phi, k), any real phi.

    Extended by quasi-periodicity F(phi + pi) = F(phi) + 2K.
    """
    kf = _as_k(k)
    if kf == 1.0:
        if abs(phi) >= math.pi / 2.0:
            raise EllipticDivergenceError("F(phi, 1) diverges for |phi| >= pi/2")
        return math.atanh(math.sin(phi))
    if kf == 0.0:
        return phi
    phi_red, m = _reduce_phase(phi)
    F, _ = _incomplete_agm(phi_red, kf)
    return F + 2.0 * m * ellint_K(kf)


def ellint_E_inc(phi: float, k) -> float:
    """Incomplete second-kind integral E(phi, k), any real phi."""
    kf = _as_k(k)
    if kf == 0.0:
        return phi
    if kf == 1.0:
        phi_red, m = _reduce_phase(phi)
        return math.sin(phi_red) + 2.0 * m
    phi_red, m = _reduce_phase(phi)
    _, E = _incomplete_agm(phi_red, kf)
    return E + 2.0 * m * ellint_E(kf)


def jacobi(u: float, k) -> JacobiValues:
    """sn, cn, dn, am and eps at real u, modulus k in [0, 1].

    The amplitude and epsilon are the continuous (unreduced) branches:
    am(u + 2K) = am(u) + pi and eps(u + 2K) = eps(u) + 2E.
    """
    kf = _as_k(k)
    if kf == 0.0:
        return JacobiValues(math.sin(u), math.cos(u), 1.0, u, u)
    if kf == 1.0:
        t = math.tanh(u)
        s = 1.0 / math.cosh(u)
        return JacobiValues(t, s, s, math.atan(math.sinh(u)), t)
    a, _, c, n = _agm_scale(kf)
    K = math.pi / (2.0 * a[n])
    s_sum = sum(2.0 ** (i - 1) * c[i] * c[i] for i in range(n + 1))
    E = K * (1.0 - s_sum)

    m = math.floor(u / (2.0 * K) + 0.5)
    u_red = u - 2.0 * K * m

    phi = 2.0**n * a[n] * u_red
    zeta = 0.0
    for i in range(n, 0, -1):
        zeta += c[i] * math.sin(phi)
        s = c[i] / a[i] * math.sin(phi)
        phi = 0.5 * (phi + math.asin(max(-1.0, min(1.0, s))))

    sn_r = math.sin(phi)
    cn_r = math.cos(phi)
    kp = math.sqrt((1.0 - kf) * (1.0 + kf))
    dn = math.sqrt(cn_r * cn_r + kp * kp * sn_r * sn_r)
    eps_r = zeta + E / K * u_red

    sgn = -1.0 if m % 2 else 1.0
    return JacobiValues(
        sn=sgn * sn_r,
        cn=sgn * cn_r,
        dn=dn,
        am=phi + m * math.pi,
        eps=eps_r + 2.0 * m * E,
    )


def jacobi_recip_modulus(u: float, k) -> JacobiValues:
    """Jacobi values at modulus 1/k > 1, expressed through modulus k in (0, 1).

    sn(u, 1/k) = k sn(u/k, k), cn(u, 1/k) = dn(u/k, k),
    dn(u, 1/k) = cn(u/k, k), eps(u, 1/k) = eps(u/k, k)/k - (1-k^2)/k^2 * u.
    The rotating-pendulum amplitude is bounded, so am is the principal branch.
    """
    kf = _as_k(k)
    if kf == 0.0:
        raise EllipticDomainError("reciprocal-modulus transform undefined at k = 0")
    if kf == 1.0:
        return jacobi(u, 1.0)
    jv = jacobi(u / kf, kf)
    sn = kf * jv.sn
    cn = jv.dn
    dn = jv.cn
    eps = jv.eps / kf - (1.0 - kf * kf) / (kf * kf) * u
    return JacobiValues(sn, cn, dn, math.atan2(sn, cn), eps)


def jacobi_add(u: float, v: float, k) -> JacobiValues:
    """Jacobi values at u + v from the addition formulas (no evaluation at u+v).

    eps obeys eps(u+v) = eps(u) + eps(v) - k^2 sn u sn v sn(u+v).
    """
    kf = _as_k(k)
    ju = jacobi(u, kf)
    jv = jacobi(v, kf)
    k2 = kf * kf
    den = 1.0 - k2 * ju.sn * ju.sn * jv.sn * jv.sn
    sn = (ju.sn * jv.cn * jv.dn + jv.sn * ju.cn * ju.dn) / den
    cn = (ju.cn * jv.cn - ju.sn * ju.dn * jv.sn * jv.dn) / den
    dn = (ju.dn * jv.dn - k2 * ju.sn * ju.cn * jv.sn * jv.cn) / den
    eps = ju.eps + jv.eps - k2 * ju.sn * jv.sn * sn
    am = math.atan2(sn, cn)
    if kf < 1.0:
        # restore the unreduced amplitude branch; am - pi*w/(2K) stays in
        # (-pi/2, pi/2), so rounding to the nearest 2*pi multiple is safe
        est = math.pi * (u + v) / (2.0 * ellint_K(kf))
        am += 2.0 * math.pi * math.floor((est - am) / (2.0 * math.pi) + 0.5)
    return JacobiValues(sn, cn, dn, am, eps)


def jacobi_derivs_k(u: float, k):
    """Partial derivatives of (sn, cn, dn, eps) with respect to the modulus k.

    Valid for k in (0, 1); warns when the 1/(k (1-k^2)) prefactor makes the
    evaluation ill-conditioned near the endpoints.
    """
    kf = _as_k(k)
    if kf == 0.0 or kf == 1.0:
        raise EllipticDomainError("modulus derivatives need k in (0, 1)")
    if kf < DERIV_CONDITIONING_LIMIT or 1.0 - kf * kf < DERIV_CONDITIONING_LIMIT:
        warnings.warn(
            "jacobi_derivs_k is ill-conditioned for k near 0 or 1 "
            f"(k = {kf:.3e})",
            RuntimeWarning,
            stacklevel=2,
        )
    jv = jacobi(u, kf)
    sn, cn, dn, eps = jv.sn, jv.cn, jv.dn, jv.eps
    kp2 = (1.0 - kf) * (1.0 + kf)
    dsn = (
        u * cn * dn / kf
        + kf / kp2 * sn * cn * cn
        - eps * cn * dn / (kf * kp2)
    )
    dcn = (
        -u * sn * dn / kf
        - kf / kp2 * sn * sn * cn
        + eps * sn * dn / (kf * kp2)
    )
    ddn = (
        -kf / kp2 * sn * sn * dn
        - kf * u * sn * cn
        + kf / kp2 * eps * sn * cn
    )
    deps = kf / kp2 * sn * cn * dn - kf * u * sn * sn - kf / kp2 * eps * cn * cn
    return dsn, dcn, ddn, deps
