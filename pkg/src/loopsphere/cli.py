"""Command-line front end.

Subcommands map one-to-one onto the library modules:

    spectrum     radial eigenvalues by shrinking truncations
    gap          spectral-gap report with convexity and bound comparison
    classify     endpoint classification of the radial problem
    frobenius    indicial (Frobenius) exponents at both endpoints
    veff         effective potential of the Liouville normal form
    volume       Riemannian volume: quadrature vs closed form
    curvature    full curvature report at a loop (JSON loop input)
    ricci        closed-form Ricci tables at one radial coordinate
    angular      angular (Stiefel-fiber) eigenvalues and multiplicities
    factorize    loop JSON -> rotations JSON, or rotations JSON -> loop JSON
    check        constraint residual, degree, and stratum of a loop
    random-loop  seeded random sphere-valued loop of prescribed degree

Exit codes: 0 success, 2 validation error (bad flags or malformed input),
3 numeric diagnostic failure.  Output is JSON (default) or CSV with floats at
17 significant digits; identical flags and seed give byte-identical output.
The environment variable LOOPSPEC_THREADS parallelizes truncation levels.
"""

import argparse
import json
import sys

import numpy as np

from . import angular, curvature, manifold, radial, resolution, trigpoly
from .prng import SplitMix64

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _fmt(value):
    """One CSV cell: floats at 17 significant digits, everything else as str."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _write(text, output):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_rows(header, rows, fmt, output):
    """A rectangular table: CSV rows, or JSON list of row objects."""
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(cell) for cell in row) for row in rows]
        _write("\n".join(lines) + "\n", output)
    else:
        data = [dict(zip(header, row)) for row in rows]
        _write(json.dumps(_jsonable(data), indent=2) + "\n", output)


def _emit_record(record, fmt, output):
    """A single keyed record: JSON object, or key,value CSV."""
    if fmt == "csv":
        lines = ["key,value"]
        for key, value in record.items():
            lines.append(f"{key},{_fmt(value) if not isinstance(value, (list, dict)) else json.dumps(_jsonable(value))}")
        _write("\n".join(lines) + "\n", output)
    else:
        _write(json.dumps(_jsonable(record), indent=2) + "\n", output)


def _read_input(path):
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


# ---------------------------------------------------------------------------
# Seeded random loops
# ---------------------------------------------------------------------------


def random_loop(k, degree, radius, seed):
    """Seeded random sphere-valued loop: N random plane rotations of a point.

    The base point is a uniformly random direction scaled to the sphere;
    each step applies a plane rotation through a random orthonormal pair,
    which generically raises the harmonic degree by exactly one while
    preserving the constraint identically.
    """
    if k < 2:
        raise ValueError(f"sphere dimension k must be >= 2, got {k}")
    if degree < 0:
        raise ValueError(f"loop degree must be >= 0, got {degree}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    rng = SplitMix64(seed)
    d = k + 1
    base = np.array(rng.gauss_vector(d))
    base *= radius / np.linalg.norm(base)
    n = trigpoly.trig_poly(base)
    for _ in range(degree):
        a = np.array(rng.gauss_vector(d))
        b = np.array(rng.gauss_vector(d))
        a /= np.linalg.norm(a)
        b -= (a @ b) * a
        b /= np.linalg.norm(b)
        rot = resolution.rotation_from_basis(a, b)
        n = resolution.apply_rotation(rot, n)
    return n


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _params(args):
    return manifold.ModelParams(k=args.k, R=args.R, L=args.L)


def _cmd_spectrum(args):
    params = _params(args)
    if args.l is not None:
        if args.k != 2:
            raise ValueError("angular-harmonic radial equations require --k 2")
        prob = radial.coefficients_with_harmonics(params, args.l, args.s or 0)
    else:
        prob = radial.coefficients(params)
    res = radial.spectrum(prob, count=args.neigs, tol=args.tol, levels=args.levels)
    hist = np.asarray(res.history, dtype=float)
    est = np.abs(hist[-1] - hist[-2]) if hist.shape[0] >= 2 else np.full(args.neigs, np.nan)
    header = ["n", "lambda", "est_error", "converged"]
    rows = [
        [i, float(res.raw[i]), float(est[i]), bool(res.converged)]
        for i in range(len(res.raw))
    ]
    _emit_rows(header, rows, args.format, args.output)
    return EXIT_OK if res.converged else EXIT_NUMERIC


def _cmd_gap(args):
    params = _params(args)
    rep = radial.gap_analysis(params, tol=args.tol, levels=args.levels)
    record = {
        "k": rep["k"],
        "R": rep["R"],
        "lambda0": rep["lambda0_raw"],
        "lambda1": rep["lambda1_raw"],
        "gap": rep["gap"],
        "bound_12_over_R2": rep["bound_12_over_R2"],
        "lavine_paper": rep["lavine_bound_recorded"],
        "lavine_classical": rep["lavine_bound_classical"],
        "convex": rep["convex_potential"],
        "rayleigh_upper": rep["rayleigh_upper_raw"],
        "gap_exceeds_12_over_R2": rep["gap_exceeds_12_over_R2"],
        "gap_exceeds_lavine_paper": rep["gap_exceeds_recorded"],
        "gap_exceeds_lavine_classical": rep["gap_exceeds_classical"],
        "radius_limit_for_12_bound": rep["radius_limit_for_12_bound"],
        "converged": rep["converged"],
        "convergence_proven": rep["convergence_proven"],
    }
    _emit_record(record, args.format, args.output)
    return EXIT_OK if rep["converged"] else EXIT_NUMERIC


def _cmd_classify(args):
    params = _params(args)
    reports = radial.classify_endpoints(params)
    header = ["endpoint", "kind", "mu1", "mu2", "log_case"]
    rows = [
        [ep, rep.kind.value, rep.exponents[0], rep.exponents[1], rep.log_case]
        for ep, rep in sorted(reports.items())
    ]
    _emit_rows(header, rows, args.format, args.output)
    return EXIT_OK


def _cmd_frobenius(args):
    params = _params(args)
    prob = radial.coefficients(params)
    header = ["endpoint", "mu1", "mu2", "log_case"]
    rows = []
    for ep in prob.interval:
        (mu1, mu2), log_case = radial.frobenius_exponents(prob, ep)
        rows.append([ep, mu1, mu2, log_case])
    _emit_rows(header, rows, args.format, args.output)
    return EXIT_OK


def _cmd_veff(args):
    params = _params(args)
    veff = radial.liouville_potential(params)
    hi = np.pi * params.R / 2.0
    record = {
        "k": params.k,
        "R": params.R,
        "interval": [0.0, hi],
        "endpoint_exponents": {
            "0": list(radial.veff_exponents(params, 0.0)),
            "pi_R_over_2": list(radial.veff_exponents(params, hi)),
        },
        "inverse_square_coefficients": {
            "0": (params.k**2 - 6.0 * params.k + 8.0) / 4.0,
            "pi_R_over_2": (4.0 * params.k**2 - 16.0 * params.k + 15.0) / 4.0,
        },
    }
    if args.tau is not None:
        record["tau"] = args.tau
        record["value"] = veff.value(args.tau)
    _emit_record(record, args.format, args.output)
    return EXIT_OK


def _cmd_volume(args):
    params = _params(args)
    quad = manifold.radial_volume_quadrature(params)
    closed = manifold.radial_volume_closed_form(params)
    record = {
        "k": params.k,
        "R": params.R,
        "radial_quadrature": quad,
        "radial_closed_form": closed,
        "stiefel_volume": manifold.stiefel_volume(params.k),
        "total_volume": manifold.volume_total(params),
        "relative_deviation": abs(quad - closed) / closed,
    }
    _emit_record(record, args.format, args.output)
    return EXIT_OK


def _cmd_curvature(args):
    n, radius = trigpoly.loop_from_json(_read_input(args.input))
    rep = curvature.scalar_and_mean(n, radius=radius)
    record = {
        "k": n.ambient_dim - 1,
        "N": n.degree,
        "R": radius,
        "dim": rep.dim,
        "scalar": rep.scalar,
        "mean_sq": rep.mean_sq,
        "ricci_min": rep.ricci_min,
        "ricci_eigenvalues": sorted(np.linalg.eigvalsh(rep.ricci_matrix).tolist()),
        "leung_rhs": rep.leung_rhs,
        "condition_gram": rep.condition_gram,
        "scalar_terms": rep.scalar_terms,
        "scalar_trace_residual": rep.scalar_trace_residual,
    }
    _emit_record(record, args.format, args.output)
    return EXIT_OK


def _cmd_ricci(args):
    if not (0.0 < args.t < 1.0):
        raise ValueError(f"--t must lie in (0, 1), got {args.t}")
    header = ["quantity", "value"]
    rows = []
    if args.k == 2:
        closed = curvature.ricci_closed_form_k2(args.t, args.R)
        for value, mult in closed["eigenvalues"]:
            rows.append([f"variety_ricci_eigenvalue_mult{mult}", value])
        rows.append(["variety_scalar", closed["scalar"]])
        rows.append(["variety_ricci_lower_bound", closed["lower_bound"]])
    for label, value in sorted(curvature.fiber_ricci_closed(args.k, args.t).items()):
        rows.append([f"fiber_ricci_{label}", value])
    _emit_rows(header, rows, args.format, args.output)
    return EXIT_OK


def _cmd_angular(args):
    if not (0.0 < args.t < 1.0):
        raise ValueError(f"--t must lie in (0, 1), got {args.t}")
    header = ["eigenvalue", "multiplicity"]
    if args.k == 2:
        if args.l is None:
            raise ValueError("k = 2 angular spectra require --l")
        if args.s is not None:
            value = angular.angular_eigenvalue_k2(args.l, args.s, args.t, args.R)
            rows = [[value, 1 if args.s == 0 else 2]]
        else:
            rows = [list(item) for item in angular.angular_spectrum_k2(args.l, args.t, args.R)]
    elif args.k == 3:
        # For k = 3 the representation is labeled by the two highest weights
        # of the commuting su(2) factors, passed as --l and --s.
        if args.l is None or args.s is None:
            raise ValueError("k = 3 angular spectra require both --l and --s (the two highest weights)")
        vals = angular.angular_spectrum_k3(args.l, args.s, args.t)
        grouped = []
        for v in vals:
            if grouped and abs(v - grouped[-1][0]) <= 1e-10 * (1.0 + abs(v)):
                grouped[-1][1] += 1
            else:
                grouped.append([float(v), 1])
        rows = grouped
    else:
        raise ValueError(f"angular spectra are implemented for k in {{2, 3}}, got {args.k}")
    _emit_rows(header, rows, args.format, args.output)
    return EXIT_OK


def _cmd_factorize(args):
    data = json.loads(_read_input(args.input))
    if "rotations" in data:
        fact = resolution.rotations_from_dict(data)
        n = resolution.compose(fact)
        _write(json.dumps(_jsonable(trigpoly.loop_to_dict(n, fact.radius)), indent=2) + "\n", args.output)
    else:
        n, radius = trigpoly.loop_from_dict(data)
        fact = resolution.factorize(n, radius)
        _write(json.dumps(_jsonable(resolution.rotations_to_dict(fact)), indent=2) + "\n", args.output)
    return EXIT_OK


def _cmd_check(args):
    n, radius = trigpoly.loop_from_json(_read_input(args.input))
    params = manifold.ModelParams(k=n.ambient_dim - 1, R=radius)
    residual = trigpoly.constraint_residual(n, radius).max_abs_coeff()
    ok = residual <= 1e-9 * radius**2
    stratum = (
        manifold.classify_stratum(n, params).value
        if n.degree <= 1
        else ("smooth" if ok else "not-on-variety")
    )
    record = {
        "k": params.k,
        "N": n.degree,
        "R": radius,
        "constraint_residual": residual,
        "on_sphere": ok,
        "stratum": stratum,
    }
    _emit_record(record, args.format, args.output)
    return EXIT_OK if ok else EXIT_NUMERIC


def _cmd_random_loop(args):
    n = random_loop(args.k, args.N, args.R, args.seed)
    _write(json.dumps(_jsonable(trigpoly.loop_to_dict(n, args.R)), indent=2) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(sub, *, k=False, R=False, L=False, t=False, tau=False,
                ls=False, eigs=False, io_in=False, seed=False, N=False):
    if k:
        sub.add_argument("--k", type=int, required=True, help="sphere dimension (>= 2)")
    if R:
        sub.add_argument("--R", type=float, default=1.0, help="sphere radius (> 0)")
    if L:
        sub.add_argument("--L", type=float, default=1.0, help="coupling scale (> 0)")
    if t:
        sub.add_argument("--t", type=float, required=True, help="radial coordinate in (0, 1)")
    if tau:
        sub.add_argument("--tau", type=float, default=None, help="arclength coordinate in (0, pi R / 2)")
    if ls:
        sub.add_argument("--l", type=int, default=None, help="representation label")
        sub.add_argument("--s", type=int, default=None, help="weight / second representation label")
    if eigs:
        sub.add_argument("--neigs", type=int, default=2, help="number of eigenvalues")
        sub.add_argument("--tol", type=float, default=1e-6, help="relative convergence tolerance")
        sub.add_argument("--levels", type=int, default=7, help="number of truncation levels")
    if io_in:
        sub.add_argument("--input", required=True, help="input JSON path ('-' for stdin)")
    if seed:
        sub.add_argument("--seed", type=int, required=True, help="64-bit PRNG seed")
    if N:
        sub.add_argument("--N", type=int, required=True, help="harmonic degree (>= 0)")
    sub.add_argument("--output", default=None, help="output path (default stdout)")
    sub.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="loopsphere",
        description="Finite-dimensional loop spaces of round spheres.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("spectrum", help="radial eigenvalues by shrinking truncations")
    _add_common(sub, k=True, R=True, L=True, ls=True, eigs=True)
    sub.set_defaults(handler=_cmd_spectrum)

    sub = subs.add_parser("gap", help="spectral-gap report")
    _add_common(sub, k=True, R=True, L=True, eigs=True)
    sub.set_defaults(handler=_cmd_gap)

    sub = subs.add_parser("classify", help="endpoint classification")
    _add_common(sub, k=True, R=True, L=True)
    sub.set_defaults(handler=_cmd_classify)

    sub = subs.add_parser("frobenius", help="indicial exponents at both endpoints")
    _add_common(sub, k=True, R=True, L=True)
    sub.set_defaults(handler=_cmd_frobenius)

    sub = subs.add_parser("veff", help="Liouville-form effective potential")
    _add_common(sub, k=True, R=True, L=True, tau=True)
    sub.set_defaults(handler=_cmd_veff)

    sub = subs.add_parser("volume", help="Riemannian volume, quadrature vs closed form")
    _add_common(sub, k=True, R=True, L=True)
    sub.set_defaults(handler=_cmd_volume)

    sub = subs.add_parser("curvature", help="curvature report at a loop")
    _add_common(sub, io_in=True)
    sub.set_defaults(handler=_cmd_curvature)

    sub = subs.add_parser("ricci", help="closed-form Ricci tables")
    _add_common(sub, k=True, R=True, t=True)
    sub.set_defaults(handler=_cmd_ricci)

    sub = subs.add_parser("angular", help="angular eigenvalues and multiplicities")
    _add_common(sub, k=True, R=True, t=True, ls=True)
    sub.set_defaults(handler=_cmd_angular)

    sub = subs.add_parser("factorize", help="loop <-> plane-rotation factorization")
    _add_common(sub, io_in=True)
    sub.set_defaults(handler=_cmd_factorize)

    sub = subs.add_parser("check", help="constraint residual and stratum of a loop")
    _add_common(sub, io_in=True)
    sub.set_defaults(handler=_cmd_check)

    sub = subs.add_parser("random-loop", help="seeded random sphere-valued loop")
    _add_common(sub, k=True, R=True, seed=True, N=True)
    sub.set_defaults(handler=_cmd_random_loop)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (trigpoly.LoopFormatError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (curvature.NearSingularStratumError, resolution.PeelError,
            manifold.StratumError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
