"""Command-line surface: evaluate endpoints, constants, root curves, geometry, BVP.

Every command emits machine-readable output (JSON with stable keys, RFC-4180
CSV, or SVG for geometry).  Exit codes: 0 ok, 2 flag parsing, 3 domain
violation, 4 I/O failure, 5 unattainable target.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .elliptic import EllipticDomainError, EllipticDivergenceError, ellint_K
from .expmap import State, classify, elastic_energy_closed, exp_map, sample_elastica
from .maxwell import (
    DEFAULT_TOL,
    cut_time_bound,
    find_k0,
    find_kstar,
    in_maxwell,
    p1_roots,
    p_g1,
    u_a1,
    u_h1,
)
from .oracle import IntegratorConfig, attainable, bvp_shoot, integrate_extremal
from .phase import Covector, UnsupportedStratumError, energy, stratify

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4
EXIT_UNATTAINABLE = 5


def _env_tol() -> float:
    raw = os.environ.get("ELASTICA_TOL")
    return float(raw) if raw else DEFAULT_TOL


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _json_doc(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _csv_doc(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fin(x: float):
    """JSON-safe number: infinities become the string 'inf'."""
    return x if math.isfinite(x) else "inf"


def _covector(args) -> Covector:
    scale = math.pi / 180.0 if getattr(args, "deg", False) else 1.0
    return Covector(args.beta * scale, args.c, args.r)


# ---------------------------------------------------------------------------
# commands

def cmd_exp(args) -> int:
    lam = _covector(args)
    q = exp_map(lam, args.t)
    doc = {
        "x": q.x,
        "y": q.y,
        "theta": q.theta,
        "stratum": stratify(lam).value,
        "elastica_class": classify(lam).value,
        "energy": elastic_energy_closed(lam, args.t),
    }
    if args.format == "csv":
        keys = list(doc)
        _emit(_csv_doc(keys, [[doc[k] for k in keys]]), args.output)
    else:
        _emit(_json_doc(doc), args.output)
    return EXIT_OK


def cmd_oracle_exp(args) -> int:
    lam = _covector(args)
    q, lam_t, J = integrate_extremal(lam, args.t, IntegratorConfig(step=args.step))
    doc = {
        "x": q.x,
        "y": q.y,
        "theta": q.theta,
        "beta_t": lam_t.beta,
        "c_t": lam_t.c,
        "energy": J,
        "step": args.step,
    }
    if args.format == "csv":
        keys = list(doc)
        _emit(_csv_doc(keys, [[doc[k] for k in keys]]), args.output)
    else:
        _emit(_json_doc(doc), args.output)
    return EXIT_OK


def cmd_constants(args) -> int:
    from .elliptic import ellint_E
    from .maxwell import h1

    k0 = float(find_k0())
    kstar, ustar = find_kstar()
    kstar = float(kstar)
    doc = {
        "k0": k0,
        "kstar": kstar,
        "ustar": ustar,
        "k0_residual": 2.0 * ellint_E(k0) - ellint_K(k0),
        "kstar_residual": h1(math.pi - u_a1(kstar), kstar),
        "ustar_identity_residual": ustar - (math.pi - u_a1(kstar)),
    }
    if args.format == "csv":
        keys = list(doc)
        _emit(_csv_doc(keys, [[doc[k] for k in keys]]), args.output)
    else:
        _emit(_json_doc(doc), args.output)
    return EXIT_OK


# lower edge of each curve's modulus domain; None stands for k*, which is
# only known after find_kstar runs (the upper edge is always 1, exclusive)
_CURVE_DOMAIN = {
    "p11": 0.0,
    "pg1": None,
    "ua1": 1.0 / math.sqrt(2.0),
    "uh1": None,
    "cutbound": 0.0,
}


def _sweep_value(curve: str, k: float, family: str) -> float:
    if curve == "p11":
        return p1_roots(k, 1)
    if curve == "pg1":
        return p_g1(k)
    if curve == "ua1":
        return u_a1(k)
    if curve == "uh1":
        return u_h1(k)
    # cut-time bound at r = 1 for the requested family
    if family == "n2":
        return 2.0 * k * ellint_K(k)
    k0 = float(find_k0())
    p1 = 2.0 * ellint_K(k) if k <= k0 else p1_roots(k, 1)
    return 2.0 * p1


def _sweep_row(args_tuple):
    curve, k, family = args_tuple
    v = _sweep_value(curve, k, family)
    return (k, v, v / ellint_K(k))


def cmd_sweep(args) -> int:
    lo = _CURVE_DOMAIN[args.curve]
    if lo is None:
        lo = float(find_kstar()[0])
    if not lo <= args.kmin <= args.kmax < 1.0:
        sys.stderr.write(
            f"error: sweep domain for {args.curve} is [{lo:.6g}, 1)\n"
        )
        return EXIT_DOMAIN
    n = args.n
    ks = [args.kmin + (args.kmax - args.kmin) * i / (n - 1) for i in range(n)] if n > 1 else [args.kmin]
    payload = [(args.curve, k, args.family) for k in ks]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_row, payload, chunksize=8))
    else:
        rows = [_sweep_row(p) for p in payload]
    if args.format == "json":
        doc = [{"k": r[0], "value": r[1], "value_over_K": r[2]} for r in rows]
        _emit(_json_doc(doc), args.output)
    else:
        _emit(_csv_doc(["k", "value", "value_over_K"], rows), args.output)
    return EXIT_OK


def _svg_polyline(points, title: str) -> str:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    margin = 0.05 * span
    x0, y0 = min(xs) - margin, min(ys) - margin
    box = span + 2.0 * margin
    scale = 1000.0 / box
    # flip y so the mathematical orientation points up
    pts = " ".join(
        f"{(x - x0) * scale:.3f},{(box - (y - y0)) * scale:.3f}" for x, y in zip(xs, ys)
    )
    stroke = 1000.0 * 0.002
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'viewBox="0 0 1000 1000">\n'
        f"  <title>{title}</title>\n"
        f'  <polyline fill="none" stroke="black" stroke-width="{stroke}" '
        f'points="{pts}"/>\n'
        "</svg>\n"
    )


def cmd_elastica(args) -> int:
    if args.gallery is not None:
        return _gallery(args.gallery, args.n)
    lam = _covector(args)
    pts = sample_elastica(lam, args.t1, args.n)
    title = classify(lam).value
    if args.format == "svg":
        _emit(_svg_polyline([(q.x, q.y) for q in pts], title), args.output)
    else:
        _emit(
            _csv_doc(["x", "y", "theta"], [(q.x, q.y, q.theta) for q in pts]),
            args.output,
        )
    return EXIT_OK


def _gallery(outdir: str, n: int) -> int:
    """One canonical curve per qualitative class, r = 1 throughout."""
    from .phase import EllipticCoords, Modulus, Stratum, from_elliptic

    k0 = float(find_k0())
    K = ellint_K

    def oscillating(k):
        return from_elliptic(EllipticCoords(Stratum.N1, Modulus(k), 0.0, 1.0))

    entries = [
        ("line", Covector(0.0, 0.0, 0.0), 1.0),
        ("inflectional_small_k", oscillating(0.5), 8.0 * K(0.5)),
        ("rectangular", oscillating(1.0 / math.sqrt(2.0)), 8.0 * K(1.0 / math.sqrt(2.0))),
        ("inflectional_mid_k", oscillating(0.85), 8.0 * K(0.85)),
        ("figure_eight", oscillating(k0), 8.0 * K(k0)),
        ("inflectional_large_k", oscillating(0.97), 8.0 * K(0.97)),
        (
            "critical",
            from_elliptic(EllipticCoords(Stratum.N3_PLUS, Modulus(1.0), -3.0, 1.0)),
            6.0,
        ),
        (
            "non_inflectional",
            from_elliptic(EllipticCoords(Stratum.N2_PLUS, Modulus(0.8), 0.0, 1.0)),
            4.0 * 0.8 * K(0.8),
        ),
        ("circle", Covector(0.0, 2.0 * math.pi, 0.0), 1.0),
    ]
    os.makedirs(outdir, exist_ok=True)
    for name, lam, t1 in entries:
        pts = sample_elastica(lam, t1, n)
        svg = _svg_polyline([(q.x, q.y) for q in pts], classify(lam).value)
        with open(os.path.join(outdir, f"{name}.svg"), "w", encoding="utf-8") as fh:
            fh.write(svg)
    sys.stdout.write(f"wrote {len(entries)} files to {outdir}\n")
    return EXIT_OK


def cmd_maxwell(args) -> int:
    lam = _covector(args)
    tol = args.tol if args.tol is not None else _env_tol()
    membership = sorted(m.value for m in in_maxwell(lam, args.t, tol))
    rep = cut_time_bound(lam, tol)
    doc = {
        "stratum": rep.stratum.value,
        "membership": membership,
        "t1_max1": _fin(rep.t1_max1),
        "t1_max2": _fin(rep.t1_max2),
        "t1_max3plus": _fin(rep.t1_max3plus),
        "t1_max3minus": _fin(rep.t1_max3minus),
        "bound": _fin(rep.bound),
        "tau_degenerate": rep.tau_degenerate,
    }
    _emit(_json_doc(doc), args.output)
    return EXIT_OK


def cmd_bvp(args) -> int:
    q1 = State(args.x, args.y, args.theta)
    if not attainable(q1, args.t1):
        sys.stderr.write(
            "error: target unattainable; need x^2 + y^2 < t1^2 "
            "or (x, y, theta) = (t1, 0, 0)\n"
        )
        return EXIT_UNATTAINABLE
    sols = bvp_shoot(q1, args.t1, starts=args.starts, jobs=args.jobs)
    rows = [
        {
            "beta": s.lam.beta,
            "c": s.lam.c,
            "r": s.lam.r,
            "energy": s.energy,
            "residual": s.residual,
            "cut_time_bound": _fin(s.report.bound),
            "optimal_candidate": s.optimal_candidate,
        }
        for s in sols
    ]
    if args.format == "csv":
        keys = ["beta", "c", "r", "energy", "residual", "cut_time_bound", "optimal_candidate"]
        _emit(_csv_doc(keys, [[row[k] for k in keys] for row in rows]), args.output)
    else:
        _emit(_json_doc(rows), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _add_covector_flags(p: argparse.ArgumentParser):
    p.add_argument("--beta", type=float, required=True, help="pendulum angle")
    p.add_argument("--c", type=float, required=True, help="initial curvature")
    p.add_argument("--r", type=float, required=True, help="pendulum constant (>= 0)")
    p.add_argument("--deg", action="store_true", help="beta given in degrees")


def _add_output_flags(p: argparse.ArgumentParser, formats=("json", "csv")):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("-o", "--output", default=None, help="write to file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="elastica",
        description="Euler elasticae: endpoints, Maxwell strata, cut-time bounds.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exp", help="closed-form endpoint of an elastica")
    _add_covector_flags(p)
    p.add_argument("--t", type=float, required=True, help="arc length (>= 0)")
    _add_output_flags(p)
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("oracle-exp", help="endpoint by RK4 integration")
    _add_covector_flags(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--step", type=float, default=1e-4)
    _add_output_flags(p)
    p.set_defaults(func=cmd_oracle_exp)

    p = sub.add_parser("constants", help="threshold moduli k0, k*, u*")
    _add_output_flags(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("sweep", help="tabulate a root curve over the modulus")
    p.add_argument("curve", choices=["p11", "pg1", "ua1", "uh1", "cutbound"])
    p.add_argument("--kmin", type=float, required=True)
    p.add_argument("--kmax", type=float, required=True)
    p.add_argument("--n", type=int, default=50)
    p.add_argument(
        "--family",
        choices=["n1", "n2"],
        default="n1",
        help="stratum family for the cutbound curve (r = 1)",
    )
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    _add_output_flags(p, formats=("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("elastica", help="sample an elastica as SVG or CSV")
    _add_covector_flags(p)
    p.add_argument("--t1", type=float, default=1.0, help="total arc length")
    p.add_argument("--n", type=int, default=400, help="sample count (>= 2)")
    p.add_argument("--gallery", default=None, metavar="DIR",
                   help="emit one SVG per qualitative class into DIR and exit")
    _add_output_flags(p, formats=("svg", "csv"))
    p.set_defaults(func=cmd_elastica)

    p = sub.add_parser("maxwell", help="Maxwell strata membership and cut-time bound")
    _add_covector_flags(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--tol", type=float, default=None)
    _add_output_flags(p, formats=("json",))
    p.set_defaults(func=cmd_maxwell)

    p = sub.add_parser("bvp", help="invert the endpoint map by shooting")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--starts", type=int, default=200)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    _add_output_flags(p)
    p.set_defaults(func=cmd_bvp)

    return ap


def main(argv=None) -> int:
    # required --beta conflicts with negative values looking like flags;
    # argparse handles "--beta=-0.5", documented in the README
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EllipticDomainError, EllipticDivergenceError, UnsupportedStratumError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
