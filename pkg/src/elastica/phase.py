"""Pendulum phase space over the initial fiber: strata and rectifying coordinates.

A covector (beta, c, r) drives the generalized pendulum

    beta' = c,   c' = -r sin(beta),   r' = 0,

whose energy E = c^2/2 - r cos(beta) partitions the fiber into strata: the
oscillating region (E between -r and r), the rotating region (E > r), the
separatrices, the equilibria, and the gravity-free cases r = 0.  On the three
nondegenerate families the flow is rectified by elliptic coordinates
(k, phi, r): k is a reparametrized energy (the Jacobi modulus) and phi is the
time of motion from the axis {beta = 0, c > 0} (c < 0 on the minus branches),
so that phi_t = phi + t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .elliptic import (
    Modulus,
    ellint_F_inc,
    ellint_K,
    jacobi,
)

TWO_PI = 2.0 * math.pi


class UnsupportedStratumError(ValueError):
    """Operation not defined on this stratum."""


def wrap_angle(a: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    w = math.remainder(a, TWO_PI)
    if w <= -math.pi:
        w += TWO_PI
    return w


@dataclass(frozen=True)
class Covector:
    """Initial vertical state (beta, c, r) of the generalized pendulum.

    beta is normalized to (-pi, pi]; r must be nonnegative.
    """

    beta: float
    c: float
    r: float

    def __post_init__(self):
        if self.r < 0.0:
            raise ValueError(f"pendulum constant r must be >= 0, got {self.r}")
        object.__setattr__(self, "beta", wrap_angle(self.beta))


class Stratum(Enum):
    N1 = "N1"
    N2_PLUS = "N2plus"
    N2_MINUS = "N2minus"
    N3_PLUS = "N3plus"
    N3_MINUS = "N3minus"
    N4 = "N4"
    N5 = "N5"
    N6_PLUS = "N6plus"
    N6_MINUS = "N6minus"
    N7 = "N7"

    @property
    def family(self) -> int:
        """Family index 1..7, collapsing the +/- branches."""
        return int(self.value[1])

    @property
    def sign(self) -> int:
        """+1 / -1 on the signed branches, 0 elsewhere."""
        if self.value.endswith("plus"):
            return 1
        if self.value.endswith("minus"):
            return -1
        return 0


OSCILLATING = (Stratum.N1,)
ROTATING = (Stratum.N2_PLUS, Stratum.N2_MINUS)
SEPARATRIX = (Stratum.N3_PLUS, Stratum.N3_MINUS)
ELLIPTIC_STRATA = OSCILLATING + ROTATING + SEPARATRIX


@dataclass(frozen=True)
class EllipticCoords:
    """Rectifying coordinates (stratum, k, phi, r).

    phi is the time coordinate, stored reduced to [0, period); in the
    rotating strata the companion coordinate psi = phi/k is exposed as a
    property.  On the separatrix phi ranges over all reals.
    """

    stratum: Stratum
    k: Modulus
    phi: float
    r: float

    def __post_init__(self):
        if self.stratum not in ELLIPTIC_STRATA:
            raise UnsupportedStratumError(
                f"elliptic coordinates exist only on N1/N2/N3, got {self.stratum}"
            )
        if self.r <= 0.0:
            raise ValueError("elliptic coordinates need r > 0")
        k = float(self.k)
        if self.stratum is Stratum.N1 and not 0.0 < k < 1.0:
            raise ValueError("oscillating stratum needs k in (0, 1)")
        if self.stratum in ROTATING and not 0.0 < k < 1.0:
            raise ValueError("rotating strata need k in (0, 1)")
        if self.stratum in SEPARATRIX and k != 1.0:
            raise ValueError("separatrix strata need k = 1")

    @property
    def psi(self) -> float:
        """Rotating-stratum companion coordinate psi = phi / k."""
        if self.stratum not in ROTATING:
            raise UnsupportedStratumError("psi is defined on the rotating strata only")
        return self.phi / float(self.k)


def energy(lam: Covector) -> float:
    """Pendulum energy E = c^2/2 - r cos(beta); always >= -r."""
    return 0.5 * lam.c * lam.c - lam.r * math.cos(lam.beta)


def default_tol(lam: Covector) -> float:
    """Stratification half-width, relative to the covector's scale."""
    return 1e-9 * max(lam.r, lam.c * lam.c, 1.0)


def stratify(lam: Covector, tol: float | None = None) -> Stratum:
    """Classify a covector into its stratum.

    The measure-zero boundaries (E = +-r, r = 0, the unstable equilibrium)
    absorb a band of half-width tol so the classification is deterministic
    near the separatrices.
    """
    if tol is None:
        tol = default_tol(lam)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    r, c = lam.r, lam.c
    if r <= tol:
        return (
            (Stratum.N6_PLUS if c > 0 else Stratum.N6_MINUS)
            if abs(c) > tol
            else Stratum.N7
        )
    E = energy(lam)
    if E <= -r + tol:
        return Stratum.N4
    if E > r + tol:
        return Stratum.N2_PLUS if c > 0 else Stratum.N2_MINUS
    if abs(E - r) <= tol:
        # separatrix level: split into the saddle point and the two branches
        if abs(wrap_angle(lam.beta - math.pi)) <= tol:
            return Stratum.N5
        return Stratum.N3_PLUS if c > 0 else Stratum.N3_MINUS
    return Stratum.N1


def period(obj) -> float:
    """Period of the pendulum motion in time: 4K/sqrt(r), 2Kk/sqrt(r), inf, 2pi/|c|.

    Accepts EllipticCoords (N1/N2/N3) or a Covector (additionally N6).
    """
    if isinstance(obj, Covector):
        s = stratify(obj)
        if s in (Stratum.N6_PLUS, Stratum.N6_MINUS):
            return TWO_PI / abs(obj.c)
        return period(to_elliptic(obj))
    ec = obj
    sr = math.sqrt(ec.r)
    if ec.stratum is Stratum.N1:
        return 4.0 * ellint_K(ec.k) / sr
    if ec.stratum in ROTATING:
        return 2.0 * ellint_K(ec.k) * float(ec.k) / sr
    if ec.stratum in SEPARATRIX:
        return math.inf
    raise UnsupportedStratumError(f"no period on {ec.stratum}")


def to_elliptic(lam: Covector, tol: float | None = None) -> EllipticCoords:
    """Forward map (beta, c, r) -> (stratum, k, phi, r) on N1, N2+-, N3+-.

    phi is recovered by quadrant-aware inversion of the defining triples: the
    amplitude is taken from atan2 of the (sn, cn) pair, mapped through the
    quasi-periodic incomplete integral, and reduced to [0, period).
    """
    s = stratify(lam, tol)
    r = lam.r
    sr = math.sqrt(r) if r > 0 else 0.0
    if s is Stratum.N1:
        E = energy(lam)
        k = math.sqrt((E + r) / (2.0 * r))
        am = math.atan2(math.sin(0.5 * lam.beta), 0.5 * lam.c / sr)
        sru = ellint_F_inc(am, k) % (4.0 * ellint_K(k))
        return EllipticCoords(s, Modulus(k), sru / sr, r)
    if s in ROTATING:
        E = energy(lam)
        k = math.sqrt(2.0 * r / (E + r))
        sgn = float(s.sign)
        am = math.atan2(sgn * math.sin(0.5 * lam.beta), math.cos(0.5 * lam.beta))
        srv = ellint_F_inc(am, k) % (2.0 * ellint_K(k))
        return EllipticCoords(s, Modulus(k), k * srv / sr, r)
    if s in SEPARATRIX:
        sgn = float(s.sign)
        sru = math.atanh(sgn * math.sin(0.5 * lam.beta))
        return EllipticCoords(s, Modulus(1.0), sru / sr, r)
    raise UnsupportedStratumError(f"no elliptic coordinates on {s}")


def from_elliptic(ec: EllipticCoords) -> Covector:
    """Inverse map: evaluate the stratum's defining triple at (k, phi, r)."""
    r = ec.r
    sr = math.sqrt(r)
    k = float(ec.k)
    if ec.stratum is Stratum.N1:
        jv = jacobi(sr * ec.phi, k)
        beta = 2.0 * math.atan2(k * jv.sn, jv.dn)
        return Covector(beta, 2.0 * k * sr * jv.cn, r)
    if ec.stratum in ROTATING:
        sgn = float(ec.stratum.sign)
        jv = jacobi(sr * ec.psi, k)
        beta = 2.0 * math.atan2(sgn * jv.sn, jv.cn)
        return Covector(beta, sgn * 2.0 * sr / k * jv.dn, r)
    if ec.stratum in SEPARATRIX:
        sgn = float(ec.stratum.sign)
        u = sr * ec.phi
        sech = 1.0 / math.cosh(u) if abs(u) < 709.0 else 0.0
        beta = 2.0 * math.atan2(sgn * math.tanh(u), sech)
        return Covector(beta, sgn * 2.0 * sr * sech, r)
    raise UnsupportedStratumError(f"no elliptic coordinates on {ec.stratum}")


def flow_vertical(lam: Covector, t: float, tol: float | None = None) -> Covector:
    """Closed-form pendulum flow for time t, on every stratum.

    Rectified strata advance phi by t; N6 rotates uniformly; the equilibria
    N4/N5 and the frozen case N7 are returned unchanged (constant motion).
    """
    s = stratify(lam, tol)
    if s in ELLIPTIC_STRATA:
        ec = to_elliptic(lam, tol)
        phi_t = ec.phi + t
        if s is not Stratum.N3_PLUS and s is not Stratum.N3_MINUS:
            phi_t %= period(ec)
        return from_elliptic(
            EllipticCoords(ec.stratum, ec.k, phi_t, ec.r)
        )
    if s in (Stratum.N6_PLUS, Stratum.N6_MINUS):
        return Covector(lam.beta + lam.c * t, lam.c, lam.r)
    # N4 / N5 / N7: equilibria of the vertical subsystem
    return lam


def to_h(lam: Covector):
    """Hamiltonian coordinates (h1, h2, h3) = (-r cos beta, c, -r sin beta)."""
    return (-lam.r * math.cos(lam.beta), lam.c, -lam.r * math.sin(lam.beta))
