"""Independent numerical ground truth and the boundary-value solver.

Nothing here reuses the closed forms: the extremal system is integrated by
fixed-step RK4 (fixed, not adaptive, so golden values are reproducible),
elliptic integrals are recomputed by adaptive Simpson quadrature, and the
boundary-value problem is solved by multi-start damped Newton iteration on
the forward map.  These routines exist to cross-validate the analytic
modules and to invert the endpoint map.
"""

from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .expmap import State, elastic_energy_closed, exp_map, wrap_angle
from .maxwell import MaxwellReport, cut_time_bound
from .phase import Covector

log = logging.getLogger(__name__)

BVP_RESIDUAL_TOL = 1e-9
BVP_MERGE_DIST = 1e-6
BVP_MAX_ITER = 60
BVP_DAMPING = 0.5
FD_STEP = 1e-7


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 configuration; step * max_steps bounds the horizon."""

    step: float = 1e-4
    max_steps: int = 10_000_000

    def __post_init__(self):
        if self.step <= 0.0:
            raise ValueError("step must be positive")


class MaxStepsExceeded(RuntimeError):
    """Horizon longer than step * max_steps."""


def integrate_extremal(
    lam: Covector, t: float, cfg: IntegratorConfig | None = None
):
    """RK4 integration of the full extremal system with accumulated energy.

    State is (beta, c, x, y, theta) plus the running cost J = (1/2) int c^2;
    r is conserved exactly.  Returns (endpoint State, endpoint Covector, J).
    """
    if t < 0.0:
        raise ValueError("integration time must be >= 0")
    cfg = cfg or IntegratorConfig()
    n_full = int(t / cfg.step)
    if n_full + 1 > cfg.max_steps:
        raise MaxStepsExceeded(
            f"horizon {t} needs more than {cfg.max_steps} steps of {cfg.step}"
        )
    r = lam.r
    b, c, x, y, th, J = lam.beta, lam.c, 0.0, 0.0, 0.0, 0.0
    sin, cos = math.sin, math.cos

    def advance(b, c, x, y, th, J, h):
        k1b = c
        k1c = -r * sin(b)
        k1x = cos(th)
        k1y = sin(th)
        k1j = 0.5 * c * c
        b2 = b + 0.5 * h * k1b
        c2 = c + 0.5 * h * k1c
        th2 = th + 0.5 * h * c
        k2b = c2
        k2c = -r * sin(b2)
        k2x = cos(th2)
        k2y = sin(th2)
        k2j = 0.5 * c2 * c2
        b3 = b + 0.5 * h * k2b
        c3 = c + 0.5 * h * k2c
        th3 = th + 0.5 * h * k2b
        k3b = c3
        k3c = -r * sin(b3)
        k3x = cos(th3)
        k3y = sin(th3)
        k3j = 0.5 * c3 * c3
        b4 = b + h * k3b
        c4 = c + h * k3c
        th4 = th + h * k3b
        k4b = c4
        k4c = -r * sin(b4)
        k4x = cos(th4)
        k4y = sin(th4)
        k4j = 0.5 * c4 * c4
        s = h / 6.0
        return (
            b + s * (k1b + 2.0 * (k2b + k3b) + k4b),
            c + s * (k1c + 2.0 * (k2c + k3c) + k4c),
            x + s * (k1x + 2.0 * (k2x + k3x) + k4x),
            y + s * (k1y + 2.0 * (k2y + k3y) + k4y),
            th + s * (k1b + 2.0 * (k2b + k3b) + k4b),
            J + s * (k1j + 2.0 * (k2j + k3j) + k4j),
        )

    h = cfg.step
    for _ in range(n_full):
        b, c, x, y, th, J = advance(b, c, x, y, th, J, h)
    rem = t - n_full * h
    if rem > 1e-15 * max(1.0, t):
        b, c, x, y, th, J = advance(b, c, x, y, th, J, rem)
    return State(x, y, th), Covector(b, c, r), J


class QuadratureError(RuntimeError):
    """Adaptive Simpson failed to converge within the depth limit."""


def _simpson(f, a, b, fa, fm, fb):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, b, fa, fm, fb, whole, tol, depth):
    if depth > 60:
        raise QuadratureError("adaptive Simpson exceeded depth 60")
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(f, a, m, fa, flm, fm)
    right = _simpson(f, m, b, fm, frm, fb)
    if abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    return _adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1) + _adaptive(
        f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1
    )


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-13) -> float:
    """Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol."""
    if a == b:
        return 0.0
    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    whole = _simpson(f, a, b, fa, fm, fb)
    return _adaptive(f, a, b, fa, fm, fb, whole, tol, 0)


def quad_F(phi: float, k) -> float:
    """First-kind incomplete integral by quadrature, phi in [0, pi/2], k in [0, 1)."""
    kf = float(k)
    if not 0.0 <= kf < 1.0:
        raise ValueError("quad_F needs k in [0, 1)")
    if not 0.0 <= phi <= math.pi / 2.0 + 1e-15:
        raise ValueError("quad_F needs phi in [0, pi/2]")
    k2 = kf * kf
    return adaptive_simpson(
        lambda s: 1.0 / math.sqrt(1.0 - k2 * math.sin(s) ** 2), 0.0, phi
    )


def quad_E(phi: float, k) -> float:
    """Second-kind incomplete integral by quadrature, phi in [0, pi/2], k in [0, 1]."""
    kf = float(k)
    if not 0.0 <= kf <= 1.0:
        raise ValueError("quad_E needs k in [0, 1]")
    if not 0.0 <= phi <= math.pi / 2.0 + 1e-15:
        raise ValueError("quad_E needs phi in [0, pi/2]")
    k2 = kf * kf
    return adaptive_simpson(
        lambda s: math.sqrt(max(0.0, 1.0 - k2 * math.sin(s) ** 2)), 0.0, phi
    )


def attainable(q1: State, t1: float, tol: float = 1e-12) -> bool:
    """Exact-time attainability from the identity: open disk plus one boundary point.

    True iff x^2 + y^2 < t1^2, or (x, y, theta) is the straight-line endpoint
    (t1, 0, 0) (compared at relative tolerance tol).
    """
    if t1 <= 0.0:
        raise ValueError("attainable needs t1 > 0")
    if q1.x * q1.x + q1.y * q1.y < t1 * t1:
        return True
    scale = max(1.0, t1)
    return (
        abs(q1.x - t1) <= tol * scale
        and abs(q1.y) <= tol * scale
        and abs(wrap_angle(q1.theta)) <= tol
    )


@dataclass(frozen=True)
class BvpSolution:
    """Converged boundary-value solution with its optimality annotations."""

    lam: Covector
    energy: float
    residual: float
    report: MaxwellReport
    optimal_candidate: bool  # t1 <= cut-time bound of lam


def start_grid() -> list[Covector]:
    """Deterministic multistart grid over (beta, c, r).

    Shuffled with a fixed seed so that any prefix (a smaller `starts` count)
    still samples all corners of the grid.
    """
    grid = []
    for beta in (0.0, 0.5 * math.pi, -0.5 * math.pi, math.pi):
        for mag in (0.5, 1.0, 2.0, 4.0, 8.0):
            for c in (mag, -mag):
                for r in (0.0, 0.5, 1.0, 4.0, 16.0):
                    grid.append(Covector(beta, c, r))
    random.Random(0).shuffle(grid)
    return grid


def _residual(vec, q1: State, t1: float):
    beta, c, r = vec
    q = exp_map(Covector(beta, c, max(r, 0.0)), t1)
    return np.array(
        [q.x - q1.x, q.y - q1.y, wrap_angle(q.theta - q1.theta)], dtype=float
    )


def _newton_from(start: Covector, q1: State, t1: float):
    """Damped Newton iteration from one start; None unless converged."""
    v = np.array([start.beta, start.c, start.r], dtype=float)
    res = _residual(v, q1, t1)
    best = float(np.max(np.abs(res)))
    for _ in range(BVP_MAX_ITER):
        if best < BVP_RESIDUAL_TOL:
            return Covector(float(v[0]), float(v[1]), float(max(v[2], 0.0))), best
        jac = np.empty((3, 3))
        for j in range(3):
            h = FD_STEP * max(1.0, abs(v[j]))
            vp = v.copy()
            vp[j] += h
            vm = v.copy()
            vm[j] -= h
            if j == 2 and vm[2] < 0.0:
                vm[2] = 0.0
                h = (vp[2] - vm[2]) / 2.0 or FD_STEP
            jac[:, j] = (_residual(vp, q1, t1) - _residual(vm, q1, t1)) / (2.0 * h)
        try:
            step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(step)):
            return None
        # backtracking with fixed damping ratio
        scale = 1.0
        for _ in range(25):
            cand = v + scale * step
            cand[2] = max(cand[2], 0.0)
            cand_res = _residual(cand, q1, t1)
            cand_norm = float(np.max(np.abs(cand_res)))
            if math.isfinite(cand_norm) and cand_norm < best:
                v, res, best = cand, cand_res, cand_norm
                break
            scale *= BVP_DAMPING
        else:
            return None
    if best < BVP_RESIDUAL_TOL:
        return Covector(float(v[0]), float(v[1]), float(max(v[2], 0.0))), best
    return None


def _solve_one(args):
    start, qtuple, t1 = args
    q1 = State(*qtuple)
    return _newton_from(start, q1, t1)


def bvp_shoot(
    q1: State, t1: float, starts: int = 200, jobs: int = 1
) -> list[BvpSolution]:
    """Invert the endpoint map: all distinct covectors steering to q1 in time t1.

    Multi-start damped Newton over (beta, c, r); converged solutions
    (max-norm residual < 1e-9) are de-duplicated at distance 1e-6, sorted by
    bending energy, and annotated with their cut-time bound and whether
    t1 <= bound.  Straight-line solutions (J = 0) are canonicalized to the
    frozen covector, collapsing the degenerate (beta, r) freedom.

    Returns an empty list (with a logged diagnostic) when no start converges.
    """
    if not attainable(q1, t1):
        raise ValueError("target is outside the exact-time attainable set")
    grid = start_grid()[: max(1, starts)]
    if jobs > 1:
        payload = [(s, (q1.x, q1.y, q1.theta), t1) for s in grid]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_solve_one, payload, chunksize=4))
    else:
        raw = [_newton_from(s, q1, t1) for s in grid]

    converged: list[tuple[Covector, float]] = []
    for item in raw:
        if item is None:
            continue
        lam, res = item
        if elastic_energy_closed(lam, t1) < 1e-12:
            lam = Covector(0.0, 0.0, 0.0)
        elif lam.r < 1e-5:
            # near r = 0 the residual is flat in beta and r (gauge freedom of
            # the gravity-free strata); snap to the canonical representative
            # when it solves the problem equally well
            cand = Covector(0.0, lam.c, 0.0)
            cand_res = float(np.max(np.abs(_residual((0.0, lam.c, 0.0), q1, t1))))
            if cand_res < BVP_RESIDUAL_TOL:
                lam, res = cand, cand_res
        converged.append((lam, res))

    # merge duplicates: same point in (beta, c, r), or same trajectory
    # (equal energy and equal midpoint state); keep the smallest residual
    converged.sort(key=lambda it: it[1])
    found: list[tuple[Covector, float]] = []
    midpoints: list[tuple[float, State]] = []
    for lam, res in converged:
        J = elastic_energy_closed(lam, t1)
        qm = exp_map(lam, 0.5 * t1)
        dup = False
        for (prev, _), (Jp, qp) in zip(found, midpoints):
            if (
                abs(wrap_angle(lam.beta - prev.beta)) < BVP_MERGE_DIST
                and abs(lam.c - prev.c) < BVP_MERGE_DIST
                and abs(lam.r - prev.r) < BVP_MERGE_DIST
            ):
                dup = True
                break
            if abs(J - Jp) < BVP_MERGE_DIST * max(1.0, Jp) and (
                max(
                    abs(qm.x - qp.x),
                    abs(qm.y - qp.y),
                    abs(wrap_angle(qm.theta - qp.theta)),
                )
                < BVP_MERGE_DIST * max(1.0, t1)
            ):
                dup = True
                break
        if not dup:
            found.append((lam, res))
            midpoints.append((J, qm))

    if not found:
        log.warning(
            "bvp_shoot: no convergence to (%g, %g, %g) at t1=%g from %d starts",
            q1.x,
            q1.y,
            q1.theta,
            t1,
            len(grid),
        )
        return []

    out = []
    for lam, res in found:
        rep = cut_time_bound(lam)
        out.append(
            BvpSolution(
                lam=lam,
                energy=elastic_energy_closed(lam, t1),
                residual=res,
                report=rep,
                optimal_candidate=t1 <= rep.bound,
            )
        )
    out.sort(key=lambda s: s.energy)
    return out
