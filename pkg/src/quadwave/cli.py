"""Command-line frontend.

Every subcommand validates its parameters, runs one library operation,
and writes CSV or JSON to stdout or to ``--out``.  Exit codes: 0 on
success, 1 when a computation reports failure (a refuted certificate, a
diverging iteration), 2 on usage or parameter-validation errors.  All
randomness is seeded and the seeds appear in the outputs, so reruns with
the same flags reproduce files byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import evolution, geometry, profiles, resolvent
from .errors import DomainError, QuadwaveError
from .spectral import certificates, recurrence, scan


def _fmt(x) -> str:
    """Shortest round-trip decimal for floats; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):    # np scalars repr with a wrapper
        return repr(float(x))
    return str(x)


def _write_lines(path: str | None, lines) -> None:
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_csv(path: str | None, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(x) for x in row) for row in rows]
    _write_lines(path, lines)


def _write_json(path: str | None, obj) -> None:
    _write_lines(path, [json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)])


def _scalar(x) -> float:
    if hasattr(x, "re"):            # exact rational complex
        return float(x.re)
    return float(np.real(x))


def _imag(x) -> float:
    if hasattr(x, "im"):
        return float(x.im)
    return float(np.imag(x))


def cmd_coeffs(args) -> int:
    ys = [float(tok) for tok in args.y.split(",") if tok != ""]
    if not ys:
        raise DomainError("at least one y value is required")
    rows = []
    for y in ys:
        c = geometry.eval_coefficients(y, args.d)
        rows.append((y, c.c11, c.c12, c.c20, c.c21, c.V, c.w))
    _write_csv(args.out, ["y", "c11", "c12", "c20", "c21", "V", "w"], rows)
    return 0


def cmd_profiles_verify(args) -> int:
    report = profiles.residual_suite(seed=args.seed, n_samples=args.samples)
    _write_json(args.out, report)
    return 0 if report["pass"] else 1


def cmd_spectral_scan(args) -> int:
    if args.steps < 1:
        raise DomainError(f"need at least one scan step, got {args.steps}")
    lams = np.linspace(args.re_min, args.re_max, args.steps + 1)
    rows = [(float(re), args.im, scan.mismatch(complex(re, args.im)) if args.im
             else scan.mismatch(float(re))) for re in lams]
    _write_csv(args.out, ["lambda_re", "lambda_im", "mismatch"], rows)
    return 0


def cmd_spectral_ratio(args) -> int:
    parts = [float(tok) for tok in args.lam.split(",")]
    if len(parts) not in (1, 2):
        raise DomainError(f"--lambda takes re or re,im, got {args.lam!r}")
    lam = parts[0] if len(parts) == 1 else complex(parts[0], parts[1])
    if args.n_max < 5:
        raise DomainError(f"--n-max must be at least 5, got {args.n_max}")
    run = recurrence.run_recurrence(lam, args.n_max)
    rows = [(t.n, _scalar(t.r), _imag(t.r), _scalar(t.tilde_r),
             abs(complex(_scalar(t.delta), _imag(t.delta))))
            for t in run.triples]
    _write_csv(args.out, ["n", "r_re", "r_im", "tilde_r", "delta_abs"], rows)
    return 0


def cmd_spectral_certify(args) -> int:
    certs = certificates.certify_all(seed=args.seed)
    payload = []
    for c in certs:
        entry = {"claim": c.claim, "method": c.method, "status": c.status,
                 "wall_time_ms": c.wall_time_ms}
        if c.witness is not None:
            entry["witness"] = c.witness
        payload.append(entry)
    _write_json(args.out, payload)
    return 0 if all(c.status == "proved" for c in certs) else 1


def cmd_resolvent_projection(args) -> int:
    spec = resolvent.cutoff_constants(args.t0)
    coeff = resolvent.projection_integral(spec)
    _write_json(args.out, {
        "r0": spec.r0, "s0": spec.s0, "y0": spec.y0, "delta0": spec.delta0,
        "integral": coeff.value, "positive": coeff.positive,
        "quadrature_error": coeff.quadrature_error,
    })
    return 0


def _evolve_spectrum(args) -> int:
    fine = evolution.DiscreteOperator(evolution.make_grid(args.grid_n))
    coarse_n = max(evolution.GRID_MIN, (2 * args.grid_n) // 3)
    coarse = evolution.DiscreteOperator(evolution.make_grid(coarse_n))
    val = evolution.validated_spectrum(coarse, fine)
    rows = [(z.real, z.imag, float(sh))
            for z, sh, ok in zip(val.eigenvalues, val.shift, val.resolved) if ok]
    _write_csv(args.out, ["re", "im", "resolution_shift"], rows)
    return 0


def cmd_evolve(args) -> int:
    if args.mode == "spectrum":
        return _evolve_spectrum(args)
    config = evolution.EvolutionConfig(
        n=args.grid_n, radius=args.radius, ds=args.ds, s_max=args.s_max,
        amp=args.amp, alpha=args.alpha, beta=args.beta,
        filter=evolution.Filter(args.filter), linear=args.linear,
        seed=args.seed)
    config.validate()
    op = evolution.DiscreteOperator(evolution.make_grid(config.n, config.radius))
    result = evolution.evolve(op, config)
    _write_csv(args.out, ["s", "norm", "a1", "a4"],
               zip(result.s, result.norm, result.a1, result.a4))
    summary = {"seed": args.seed, "omega_fit": result.omega_fit}
    if result.blowup_s is not None:
        summary["blowup_s"] = result.blowup_s
    if result.shoot is not None:
        summary["shoot"] = {"alpha": result.shoot.alpha,
                            "beta": result.shoot.beta,
                            "iters": result.shoot.iterations}
    _write_json(args.summary, summary)
    return 0


def cmd_reproduce(args) -> int:
    from . import acceptance

    bundle = acceptance.run_all(args.outdir, seed=args.seed)
    for line in bundle.report_lines():
        print(line)
    return 0 if bundle.all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="quadwave",
        description="Self-similar blowup stability toolkit for the radial "
                    "quadratic wave equation in seven space dimensions.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeffs", help="evolution-system coefficient functions")
    c.add_argument("--y", required=True,
                   help="comma list of similarity radii y > 0 (dimensionless)")
    c.add_argument("--d", type=int, default=7, help="space dimension (default 7)")
    c.add_argument("--out", default=None, help="CSV output path (default stdout)")
    c.set_defaults(fn=cmd_coeffs)

    pr = sub.add_parser("profiles", help="closed-form profile checks")
    prs = pr.add_subparsers(dest="profiles_cmd", required=True)
    v = prs.add_parser("verify", help="residual report for every closed form")
    v.add_argument("--samples", type=int, default=200,
                   help="sample points per identity (default 200)")
    v.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    v.add_argument("--out", default=None, help="JSON output path (default stdout)")
    v.set_defaults(fn=cmd_profiles_verify)

    sp = sub.add_parser("spectral", help="mode-ODE spectral computations")
    sps = sp.add_subparsers(dest="spectral_cmd", required=True)
    sc = sps.add_parser("scan", help="connection-mismatch scan over lambda")
    sc.add_argument("--re-min", type=float, default=0.25, help="scan start (default 0.25)")
    sc.add_argument("--re-max", type=float, default=6.0, help="scan end (default 6)")
    sc.add_argument("--steps", type=int, default=100, help="grid steps (default 100)")
    sc.add_argument("--im", type=float, default=0.0,
                    help="imaginary part of the scan line (default 0)")
    sc.add_argument("--out", default=None, help="CSV output path (default stdout)")
    sc.set_defaults(fn=cmd_spectral_scan)
    sr = sps.add_parser("ratio", help="recurrence ratios against quasisolutions")
    sr.add_argument("--lambda", dest="lam", required=True,
                    help="spectral parameter, re or re,im")
    sr.add_argument("--n-max", type=int, default=200,
                    help="largest recurrence index (default 200)")
    sr.add_argument("--out", default=None, help="CSV output path (default stdout)")
    sr.set_defaults(fn=cmd_spectral_ratio)
    ce = sps.add_parser("certify", help="exact sign certificates")
    ce.add_argument("--seed", type=int, default=7,
                    help="seed for random rational spot checks (default 7)")
    ce.add_argument("--out", default=None, help="JSON output path (default stdout)")
    ce.set_defaults(fn=cmd_spectral_certify)

    rp = sub.add_parser("resolvent", help="cutoff data and projections")
    rps = rp.add_subparsers(dest="resolvent_cmd", required=True)
    pj = rps.add_parser("projection", help="projection coefficient of cutoff mode data")
    pj.add_argument("--t0", type=float, default=0.4,
                    help="cutoff time in (0, 4/9) (default 0.4)")
    pj.add_argument("--out", default=None, help="JSON output path (default stdout)")
    pj.set_defaults(fn=cmd_resolvent_projection)

    e = sub.add_parser("evolve", help="similarity-time evolution")
    e.add_argument("mode", nargs="?", choices=["spectrum"],
                   help="'spectrum': emit the validated discrete spectrum instead")
    e.add_argument("--amp", type=float, default=1e-3,
                   help="Sobolev amplitude of the generic component (default 1e-3)")
    e.add_argument("--alpha", type=float, default=0.0,
                   help="multiple of the j=4 mode pair added to the data (default 0)")
    e.add_argument("--beta", type=float, default=0.0,
                   help="multiple of the j=1 mode pair added to the data (default 0)")
    e.add_argument("--grid-n", type=int, default=96,
                   help="half-grid collocation points, 16..512 (default 96)")
    e.add_argument("--radius", type=float, default=0.5,
                   help="grid radius R >= 1/2 (default 0.5)")
    e.add_argument("--ds", type=float, default=None,
                   help="RK4 step in s (default: stability-based)")
    e.add_argument("--s-max", type=float, default=5.0,
                   help="final similarity time (default 5)")
    e.add_argument("--filter", choices=[f.value for f in evolution.Filter],
                   default="none", help="unstable-mode handling (default none)")
    e.add_argument("--linear", action="store_true",
                   help="drop the quadratic term")
    e.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    e.add_argument("--out", default=None, help="CSV output path (default stdout)")
    e.add_argument("--summary", default=None,
                   help="JSON summary path (default stdout)")
    e.set_defaults(fn=cmd_evolve)

    r = sub.add_parser("reproduce", help="run the full acceptance suite")
    r.add_argument("--outdir", default="reproduce-out",
                   help="artifact directory (default ./reproduce-out)")
    r.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    r.set_defaults(fn=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as err:
        print(f"quadwave: invalid parameter: {err}", file=sys.stderr)
        return 2
    except QuadwaveError as err:
        print(f"quadwave: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
