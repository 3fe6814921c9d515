"""Command-line front end.

Every subcommand reads a domain file (``--input``), writes JSON/CSV/SVG
reports into ``--out-dir`` and prints the JSON report. Exit status is 0 on
success, 2 for bad input and 3 when a numerical method fails to converge.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend, approx, conformal, quaddiff, quadrature, schwarz, serrin
from .geometry import AnalyticCurve, InvalidCurveError, InvalidDomainError, PlanarDomain
from .io import DomainFileError, domain_to_json, dumps, load_domain, load_laurent
from .svg import stokes_svg

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("extremal_domains")


class NonConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    input: Path
    out_dir: Path
    degree: int | None
    samples: int | None
    tol: float
    seed: int

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("--tol must be positive")
        if self.degree is not None and self.degree < 1:
            raise ValueError("--degree must be at least 1")
        if self.samples is not None and self.samples < 8:
            raise ValueError("--samples must be at least 8")

    @classmethod
    def from_args(cls, args):
        return cls(args.command, Path(args.input), Path(args.out_dir), args.degree, args.samples, args.tol, args.seed)


def _emit(cfg, name, report):
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    text = dumps(report)
    (cfg.out_dir / f"{name}.json").write_text(text)
    sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def analyze(domain, degree=None, samples=None, tol=1e-3):
    res = approx.solve_adaptive(domain, degree=degree or approx.DEFAULT_DEGREE, m=samples)
    resid = max(approx.extremality_residual(domain, res))
    extremal = res.gap_lower <= tol and resid <= tol
    if extremal:
        verdict = "disk-like" if domain.connectivity == 1 else "annulus-like"
    else:
        verdict = "non-extremal"
    return res, {
        "bounds": list(res.bounds),
        "lambda_hat": res.lambda_hat,
        "gap_lower": res.gap_lower,
        "gap_upper": res.gap_upper,
        "extremality_residual": resid,
        "certified": res.certified,
        "iterations": res.iterations,
        "degree": res.basis.degree,
        "connectivity": domain.connectivity,
        "verdict": verdict,
        "phi": res.phi.to_json(),
    }


def cmd_analyze(cfg, args):
    res, report = analyze(load_domain(cfg.input), cfg.degree, cfg.samples, cfg.tol)
    _emit(cfg, "analyze", report)
    if not res.certified:
        raise NonConvergence("minimax iteration did not reach its tolerance")


def cmd_quadrature(cfg, args):
    domain = load_domain(cfg.input)
    rep = quadrature.quadrature_residual(domain, args.max_degree)
    res = approx.solve_adaptive(domain, degree=cfg.degree or approx.DEFAULT_DEGREE, m=cfg.samples)
    flow = quadrature.flow_identities(domain, res)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    (cfg.out_dir / "quadrature.csv").write_text(rep.to_csv())
    _emit(cfg, "quadrature", {
        "max_degree": args.max_degree,
        "residual": rep.residual,
        "lambda_hat": res.lambda_hat,
        "boundary_speed_dev": flow.boundary_speed_dev,
        "vorticity_flux_gap": flow.vorticity_flux_gap,
        "circulation_gap": flow.circulation_gap,
    })


def cmd_serrin(cfg, args):
    domain = load_domain(cfg.input)
    _emit(cfg, "serrin", serrin.serrin_report(domain, cfg.degree or serrin.DEFAULT_DEGREE))


def cmd_stokes(cfg, args):
    domain = load_domain(cfg.input)
    if args.qd:
        qd = quaddiff.QuadraticDifferential(load_laurent(args.qd))
    else:
        res = approx.solve_adaptive(domain, degree=cfg.degree or approx.DEFAULT_DEGREE, m=cfg.samples)
        qd = quaddiff.QuadraticDifferential.from_phi(res.phi)
    graph = quaddiff.build_stokes_graph(domain, qd)
    arcs = [{
        "family": a.family,
        "termination": a.termination,
        "length": a.length,
        "start": a.start,
        "end": a.end,
        "start_zero": a.start_zero,
        "end_zero": a.end_zero,
    } for a in graph.arcs]
    loops = [{"termination": lp.termination, "length": lp.length, "closure_error": lp.closure_error}
             for lp in graph.loops]
    angles = {str(i): {"+": graph.arc_angles(i, "+"), "-": graph.arc_angles(i, "-")}
              for i, z in enumerate(graph.zeros) if not z.on_boundary}
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    (cfg.out_dir / "stokes.svg").write_text(stokes_svg(domain, graph))
    _emit(cfg, "stokes", {
        "zeros": [{"z": z.z, "order": z.order, "on_boundary": z.on_boundary} for z in graph.zeros],
        "arcs": arcs,
        "loops": loops,
        "arc_angles": angles,
    })


def cmd_conformal(cfg, args):
    domain = load_domain(cfg.input)
    if domain.connectivity != 2:
        raise InvalidDomainError("conformal needs a doubly-connected domain")
    amap = conformal.map_to_annulus(domain, cfg.degree or conformal.DEFAULT_DEGREE)
    res = approx.solve_adaptive(domain, m=cfg.samples)
    report = conformal.conformal_report(domain, amap, res)
    report["boundary_residual"] = amap.boundary_residual
    report["inverse_form"] = vars(conformal.fit_inverse_form(domain, amap))
    _emit(cfg, "conformal", report)


def cmd_droplet(cfg, args):
    domain = load_domain(cfg.input)
    curve = domain.outer
    report = {}
    if args.lam is not None:
        report["residual"] = schwarz.droplet_residual(curve, args.lam, args.c)
    fit = schwarz.droplet_fit(curve)
    report.update({"best_residual": fit.residual, "best_lambda": fit.lam, "best_c": fit.c,
                   "grid_residual": fit.grid_residual})
    _emit(cfg, "droplet", report)


def perturb(domain, amplitude, mode, seed=0, curve=0):
    """Add amplitude * cos(mode t + phase) radially to one boundary curve.

    For a circle this is r(t) = R + amplitude cos(mode t + phase); the phase
    is drawn from ``seed``. Amplitudes of 0.2 min-radius or more are refused.
    """
    curves = list(domain.curves)
    rmin = min(float(np.abs(c.points - c.coeffs[-c.j_min]).min()) if c.j_min <= 0 <= c.j_max
               else float(np.abs(c.points).min()) for c in curves)
    if amplitude >= 0.2 * rmin:
        raise InvalidDomainError(
            f"amplitude {amplitude} must be below 0.2 * min radius = {0.2 * rmin:.6g}; use a smaller amplitude")
    if mode < 2:
        raise ValueError("mode must be at least 2 (modes 0 and 1 only rescale or translate)")
    if amplitude == 0:
        return domain
    target = curves[curve]
    phase = np.random.default_rng(seed).uniform(0.0, 2 * np.pi)
    s = 1 if target.orientation == "outer" else -1
    lo = min(target.j_min, s - mode)
    hi = max(target.j_max, s + mode)
    coeffs = np.zeros(hi - lo + 1, dtype=complex)
    coeffs[target.j_min - lo: target.j_max - lo + 1] = target.coeffs
    coeffs[s + mode - lo] += 0.5 * amplitude * np.exp(1j * phase)
    coeffs[s - mode - lo] += 0.5 * amplitude * np.exp(-1j * phase)
    try:
        new = AnalyticCurve(coeffs, lo, target.orientation)
        curves[curve] = new
        return PlanarDomain(curves[0], curves[1:], domain.hole_points)
    except (InvalidCurveError, InvalidDomainError) as exc:
        raise InvalidDomainError(f"perturbed domain is invalid ({exc}); use a smaller amplitude") from exc


def cmd_perturb(cfg, args):
    domain = load_domain(cfg.input)
    new = perturb(domain, args.amplitude, args.mode, cfg.seed, args.curve)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    out = Path(args.output) if args.output else cfg.out_dir / "perturbed.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    text = dumps(domain_to_json(new))
    out.write_text(text)
    sys.stdout.write(text)


COMMANDS = {
    "analyze": cmd_analyze,
    "quadrature": cmd_quadrature,
    "serrin": cmd_serrin,
    "stokes": cmd_stokes,
    "conformal": cmd_conformal,
    "droplet": cmd_droplet,
    "perturb": cmd_perturb,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="domain file (JSON)")
    common.add_argument("--out-dir", default=".", help="directory for reports (default: .)")
    common.add_argument("--degree", type=int, default=None, help="basis degree")
    common.add_argument("--samples", type=int, default=None, help="boundary samples per component")
    common.add_argument("--tol", type=float, default=1e-3, help="extremality tolerance (default: 1e-3)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized generators")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="extremal-domains", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="analytic content and extremality verdict")
    q = sub.add_parser("quadrature", parents=[common], help="area vs boundary means, flow identities")
    q.add_argument("--max-degree", type=int, default=8)
    sub.add_parser("serrin", parents=[common], help="overdetermined Poisson problem")
    s = sub.add_parser("stokes", parents=[common], help="trajectory graph of phi' dz^2 (JSON + SVG)")
    s.add_argument("--qd", help="Laurent JSON for phi' (default: derivative of the minimax phi)")
    sub.add_parser("conformal", parents=[common], help="map a ring domain to an annulus")
    d = sub.add_parser("droplet", parents=[common], help="droplet equilibrium residuals")
    d.add_argument("--lam", type=float, default=None)
    d.add_argument("--c", type=float, default=0.0)
    pt = sub.add_parser("perturb", parents=[common], help="write a Fourier-perturbed domain file")
    pt.add_argument("--amplitude", type=float, required=True)
    pt.add_argument("--mode", type=int, default=3)
    pt.add_argument("--curve", type=int, default=0, help="0 = outer, k = k-th inner curve")
    pt.add_argument("--output", help="output file (default: OUT_DIR/perturbed.json)")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    threads = os.environ.get("EXTREMAL_DOMAINS_THREADS")
    if threads:
        _backend.set_threads(int(threads))
    try:
        cfg = RunConfig.from_args(args)
        COMMANDS[cfg.subcommand](cfg, args)
    # LinAlgError subclasses ValueError, so numerical failures are caught first
    except (NonConvergence, serrin.NeumannSolveError, conformal.ConformalMapError, quaddiff.TracingError,
            np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainFileError, InvalidDomainError, InvalidCurveError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
