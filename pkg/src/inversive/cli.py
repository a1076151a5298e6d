"""Command-line front end: ``inversive <command> ...``.

Every command prints a JSON report on stdout.  Exit status is 0 when all
requested certifications pass, 1 when one fails (the report names it), and
2 on usage errors.  Random choices use ``numpy.random.default_rng(--seed)``
(PCG64).
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

import numpy as np

from . import descartes as desc
from . import designs as dz
from . import gasket as gk
from . import noneuclid as ne
from . import steiner as st
from .core import (
    DEFAULT_TOL,
    GeometryError,
    OrientedSphere,
    Similarity,
    random_rotation,
    sphere_from_center_radius,
    tangent,
)
from .svg import write_svg

_NUMBER_LIST = re.compile(r"^-[0-9.]")
_VALUE_OPTIONS = {"--root", "--bends", "--check", "--alphas", "--outer", "--inner",
                  "--lift", "--center"}


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _join_negative_values(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            if nxt is not None and _NUMBER_LIST.match(nxt):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="certification tolerance")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed (PCG64)")
    p.add_argument("--json", dest="json_path", help="also write the report to this file")
    p.add_argument("--svg", dest="svg_path", help="write a figure to this SVG file")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="inversive", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("descartes", parents=[common], help="Descartes quadruple from three bends")
    p.add_argument("--bends", type=_floats, help="three bends b1,b2,b3")
    p.add_argument("--check", type=_floats, help="four bends a,b1,b2,b3 to test")

    p = sub.add_parser("steiner", parents=[common], help="certify Steiner chain moment invariants")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--turns", type=int, default=1)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--outer", type=_floats, default=[0.0, 0.0, 1.0], help="cx,cy,R")
    p.add_argument("--inner", type=_floats, help="cx,cy,r (must close the chain)")
    p.add_argument("--inner-auto", action="store_true",
                   help="synthesize an inner parent that closes (default without --inner)")
    p.add_argument("--pole", type=float, default=2.5,
                   help="eccentricity control for --inner-auto (inversion pole > 1)")

    p = sub.add_parser("design", help="spherical designs")
    dsub = p.add_subparsers(dest="design_command", required=True)
    q = dsub.add_parser("verify", parents=[common], help="per-degree strength table")
    q.add_argument("--name", required=True)
    q.add_argument("--max-degree", type=int)
    dsub.add_parser("catalog", parents=[common], help="export the catalog as JSON")
    q = dsub.add_parser("compare", parents=[common], help="compare conformal moment averages of two designs")
    q.add_argument("--names", default="icosahedron,dodecahedron")
    q.add_argument("--bend", type=float, default=3.0)
    q.add_argument("--inversions", type=int, default=20)

    p = sub.add_parser("gasket", parents=[common], help="Apollonian gasket enumeration")
    p.add_argument("--root", type=_floats, default=[-1, 2, 2, 3])
    p.add_argument("--max-bend", type=int, default=1000)
    p.add_argument("--max-depth", type=int, default=64)

    p = sub.add_parser("spherical", help="spherical analogs")
    ssub = p.add_subparsers(dest="spherical_command", required=True)
    q = ssub.add_parser("steiner", parents=[common], help="spherical chain curvature moments")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--turns", type=int, default=1)
    q.add_argument("--samples", type=int, default=100)
    q.add_argument("--pole", type=float, default=2.0)
    q = ssub.add_parser("design", parents=[common], help="lifted design curvature moments")
    q.add_argument("--names", default="roots8,roots12")
    q.add_argument("--bend", type=float, default=4.0)
    q.add_argument("--center", type=_floats, default=None)
    q.add_argument("--scale", type=float, default=0.7)

    p = sub.add_parser("mauldon", parents=[common], help="spherical/hyperbolic Descartes residual")
    p.add_argument("--geometry", choices=("spherical", "hyperbolic"), required=True)
    p.add_argument("--alphas", type=_floats, help="four radii in the chosen metric")
    p.add_argument("--lift", type=_floats, help="three planar bends to build and lift")

    p = sub.add_parser("render", parents=[common], help="render a JSON circle list to SVG")
    p.add_argument("--input", required=True)
    return parser


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=False)
    print(text)
    if getattr(args, "json_path", None):
        with open(args.json_path, "w") as fh:
            fh.write(text + "\n")


def _base(args, command: str) -> dict:
    return {"command": command, "tolerance": args.tol, "seed": args.seed}


def cmd_descartes(args) -> int:
    rep = _base(args, "descartes")
    ok = True
    if args.check:
        if len(args.check) != 4:
            raise SystemExit("--check needs four bends")
        res = desc.descartes_residual(*args.check)
        scale = max(1.0, sum(b * b for b in args.check))
        rep["residual"] = res
        rep["valid"] = abs(res) <= args.tol * scale
        ok = rep["valid"]
    if args.bends:
        if len(args.bends) != 3:
            raise SystemExit("--bends needs three bends")
        roots = desc.soddy_solutions(*args.bends)
        rep["soddy_roots"] = list(roots)
        rep["root_residuals"] = [desc.descartes_residual(a, *args.bends) for a in roots]
        q = desc.construct_quadruple(*args.bends)
        rep["quadruple"] = q.to_dict()
        cres = desc.complex_residual(q)
        rep["complex_residual"] = [cres.real, cres.imag]
        pairs = [tangent(q.circles[i], q.circles[j], args.tol)
                 for i in range(4) for j in range(i + 1, 4)]
        rep["pairwise_tangent"] = pairs
        ok = ok and all(pairs) and abs(cres) <= args.tol * desc._complex_scale(q)
        if args.svg_path:
            write_svg(args.svg_path, q.circles)
    if not (args.check or args.bends):
        raise SystemExit("descartes needs --bends and/or --check")
    rep["pass"] = bool(ok)
    _emit(rep, args)
    return 0 if ok else 1


def _steiner_annulus(args) -> st.Annulus:
    cx, cy, R = args.outer
    if args.inner and not args.inner_auto:
        ix, iy, r = args.inner
        return st.Annulus(sphere_from_center_radius((cx, cy), R, inward=False),
                          sphere_from_center_radius((ix, iy), r))
    return st.annulus_for(args.k, args.turns, pole=args.pole, outer_radius=R, center=(cx, cy))


def cmd_steiner(args) -> int:
    rep = _base(args, "steiner")
    ann = _steiner_annulus(args)
    fam = st.family(ann, args.k, args.turns, tol=max(args.tol, 1e-9))
    cert = st.certify(fam, args.samples)
    k = args.k
    rep.update({
        "k": k, "turns": args.turns, "samples": args.samples,
        "parents": {"outer": ann.outer.to_dict(), "inner": ann.inner.to_dict()},
        "I": cert.I,
        "I_variation": cert.I_variation,
        "J": [[m, n, v.real, v.imag, cert.J_variation[(m, n)]]
              for (m, n), v in cert.J.items()],
    })
    conserved = cert.I_variation[:k - 1] + [v for (m, n), v in cert.J_variation.items() if m < k]
    conserved += cert.polynomial_variation[:k]
    rep["max_rel_variation"] = max(conserved)
    verdicts = {f"I_{m}": cert.I_variation[m - 1] <= args.tol for m in range(1, k)}
    verdicts.update({f"J_{m},{n}": v <= args.tol
                     for (m, n), v in cert.J_variation.items() if m < k})
    verdicts.update({f"sigma_{i}": cert.polynomial_variation[i] <= args.tol for i in range(1, k)})
    controls = {
        f"I_{k}": cert.I_variation[k - 1] > 1e-6,
        f"J_{k},{k}": cert.J_variation[(k, k)] > 1e-6,
        f"sigma_{k}": cert.polynomial_variation[k] > 1e-6,
    }
    rep["verdicts"] = verdicts
    rep["controls_varied"] = controls
    failed = [name for name, ok in verdicts.items() if not ok]
    failed += [f"control {name} did not vary" for name, ok in controls.items() if not ok]
    rep["failed"] = failed
    rep["pass"] = not failed
    if args.svg_path:
        circles = [ann.outer, ann.inner]
        for t in np.linspace(0, fam.period, 3, endpoint=False):
            circles.extend(st.chain_at(fam, t).circles)
        write_svg(args.svg_path, circles, frame=ann.outer)
    _emit(rep, args)
    return 0 if not failed else 1


def cmd_design(args) -> int:
    rep = _base(args, f"design {args.design_command}")
    if args.design_command == "catalog":
        rep["designs"] = [d.to_dict() for d in dz.catalog()]
        rep["pass"] = True
        _emit(rep, args)
        return 0
    if args.design_command == "verify":
        d = dz.get_design(args.name)
        top = args.max_degree if args.max_degree is not None else d.control_degree
        devs = dz.degree_deviations(d.points, top)
        # Beyond the control degree symmetry can make odd degrees pass again,
        # so those rows are reported but not judged.
        table = [{"degree": deg, "max_deviation": dev, "passes": dev <= args.tol,
                  "expected": deg <= d.strength if deg <= d.control_degree else None}
                 for deg, dev in enumerate(devs)]
        rep.update({"name": d.name, "points": d.size, "strength": d.strength,
                    "control_degree": d.control_degree, "table": table})
        failed = [row["degree"] for row in table
                  if row["expected"] is not None and row["passes"] != row["expected"]]
        rep["mismatched_degrees"] = failed
        rep["pass"] = not failed
        _emit(rep, args)
        return 0 if not failed else 1
    names = args.names.split(",")
    cfgs = [dz.configuration_from_design(dz.get_design(n), args.bend) for n in names]
    strength = min(c.source_design.strength for c in cfgs)
    rng = np.random.default_rng(args.seed)
    dim = cfgs[0].source_design.dim + 1
    worst, control = 0.0, []
    basis = list(dz.monomials_upto(dim, strength))
    for _ in range(args.inversions):
        m = dz.random_inversion(dim, rng)
        for e in basis:
            F = dz.Polynomial.monomial(e)
            worst = max(worst, _pair_gap(cfgs, m, F))
        control.append(max(_pair_gap(cfgs, m, dz.Polynomial.monomial(e), False)
                           for e in dz.monomials(dim, strength + 1)))
    rep.update({"names": names, "strength": strength, "max_rel_gap": worst,
                "control_min_gap": min(control)})
    ok = worst <= args.tol and min(control) > 1e-6
    rep["pass"] = bool(ok)
    _emit(rep, args)
    return 0 if ok else 1


def _pair_gap(cfgs, m, F, check=True) -> float:
    a = dz.conformal_moment_average(cfgs[0], m, F, check)
    b = dz.conformal_moment_average(cfgs[1], m, F, check)
    scale = max(dz.conformal_moment_scale(cfgs[0], m, F), dz.conformal_moment_scale(cfgs[1], m, F))
    return abs(a - b) / scale


def cmd_gasket(args) -> int:
    rep = _base(args, "gasket")
    root = gk.parse_bends(args.root)
    g = gk.generate(root, max_depth=args.max_depth, max_bend=args.max_bend)
    circles = gk.to_json(g)
    oracle = gk.enumerate_bends(root, args.max_bend, args.max_depth)
    integral = all(isinstance(b, int) for b in g.bends) if all(
        isinstance(b, int) for b in root) else None
    rep.update({"root": [int(b) if isinstance(b, int) else str(b) for b in root],
                "max_bend": args.max_bend, "count": len(circles),
                "oracle_count": len(oracle),
                "all_integral": integral,
                "max_depth_reached": g.max_depth_reached,
                "circles": circles})
    ok = sorted(g.bends) == oracle and integral is not False
    rep["pass"] = bool(ok)
    if args.svg_path:
        frame = gk.bounding_circle(g)
        write_svg(args.svg_path, [s for _, s, _ in g.circles], frame=frame,
                  groups=[f"gen{d}" for _, _, d in g.circles])
    _emit(rep, args)
    return 0 if ok else 1


def cmd_spherical(args) -> int:
    rep = _base(args, f"spherical {args.spherical_command}")
    rng = np.random.default_rng(args.seed)
    if args.spherical_command == "steiner":
        ann = st.annulus_for(args.k, args.turns, pole=args.pole)
        rot = random_rotation(3, rng)
        a = ne.plane_to_cap(ann.outer).rotated(rot)
        c = ne.plane_to_cap(ann.inner).rotated(rot)
        r = ne.spherical_chain_moments(a, c, args.k, args.turns, args.samples)
        rep.update({"k": r.k, "turns": r.turns, "samples": r.samples,
                    "caps": [{"pole": x.pole.tolist(), "alpha": x.radius} for x in (a, c)],
                    "moments": r.moments, "variation": r.variation,
                    "design_route": r.design_route_moments})
        verdicts = {f"m={m}": r.variation[m - 1] <= args.tol for m in range(1, args.k)}
        control = r.variation[args.k - 1] > 1e-6
        route_gap = max(abs(x - y) / max(1.0, abs(x))
                        for x, y in zip(r.moments[:-1], r.design_route_moments[:-1]))
        rep.update({"verdicts": verdicts, "control_varied": control, "route_gap": route_gap})
        ok = all(verdicts.values()) and control and route_gap <= args.tol
    else:
        names = args.names.split(",")
        designs = [dz.get_design(n) for n in names]
        dim = designs[0].dim + 1
        center = np.zeros(dim) if args.center is None else np.asarray(args.center)
        cfgs = [dz.configuration_from_design(d, args.bend, center, args.scale) for d in designs]
        strength = min(d.strength for d in designs)
        moms = [ne.lifted_design_moments(cfg, strength + 1) for cfg in cfgs]
        gaps = [abs(x - y) / max(1.0, abs(x)) for x, y in zip(*moms)]
        rep.update({"names": names, "strength": strength, "moments": moms, "gaps": gaps})
        ok = max(gaps[:strength + 1]) <= args.tol
    rep["pass"] = bool(ok)
    _emit(rep, args)
    return 0 if ok else 1


def cmd_mauldon(args) -> int:
    rep = _base(args, "mauldon")
    rep["geometry"] = args.geometry
    spherical = args.geometry == "spherical"
    if args.alphas:
        if len(args.alphas) != 4:
            raise SystemExit("--alphas needs four values")
        alphas = args.alphas
    elif args.lift:
        q = desc.construct_quadruple(*args.lift)
        if spherical:
            alphas = [math.atan2(1.0, ne.spherical_curvature(s)) for s in q.circles]
        else:
            q = desc.swap(q, 0)
            circles = _fit_in_disk(q.circles)
            alphas = [ne.hyperbolic_sphere(s).radius for s in circles]
    else:
        raise SystemExit("mauldon needs --alphas or --lift")
    res = (ne.spherical_descartes_residual(alphas) if spherical
           else ne.hyperbolic_descartes_residual(alphas))
    rep.update({"alphas": list(alphas), "residual": res})
    ok = abs(res) <= args.tol
    rep["pass"] = bool(ok)
    _emit(rep, args)
    return 0 if ok else 1


def _fit_in_disk(circles, margin: float = 0.9):
    """Similarity placing a bounded configuration inside the unit disk."""
    lo = np.min([s.center - s.radius for s in circles], axis=0)
    hi = np.max([s.center + s.radius for s in circles], axis=0)
    mid = (lo + hi) / 2
    half = float(np.linalg.norm(hi - lo)) / 2
    sim = Similarity(scale=margin / half, translation=-margin / half * mid)
    return [sim.apply_sphere(s) for s in circles]


def _load_circles(path) -> list[OrientedSphere]:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data.get("circles", data.get("spheres", []))
    out = []
    for item in data:
        if "cobend" in item:
            out.append(OrientedSphere.from_dict(item))
        elif item.get("center") is not None:
            b = float(item["bend"])
            out.append(sphere_from_center_radius(item["center"], 1.0 / abs(b), inward=b > 0))
        else:
            from .core import plane_from_normal_offset
            out.append(plane_from_normal_offset(item["normal"], item["offset"]))
    return out


def cmd_render(args) -> int:
    circles = _load_circles(args.input)
    if not args.svg_path:
        raise SystemExit("render needs --svg")
    frames = [s for s in circles if not s.is_plane and s.bend < 0]
    write_svg(args.svg_path, circles, frame=frames[0] if frames else None)
    rep = _base(args, "render")
    rep.update({"input": args.input, "svg": args.svg_path, "count": len(circles), "pass": True})
    _emit(rep, args)
    return 0


_COMMANDS = {
    "descartes": cmd_descartes,
    "steiner": cmd_steiner,
    "design": cmd_design,
    "gasket": cmd_gasket,
    "spherical": cmd_spherical,
    "mauldon": cmd_mauldon,
    "render": cmd_render,
}


def run(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except GeometryError as exc:
        print(json.dumps({"command": args.command, "error": str(exc), "pass": False}))
        return 1
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        raise


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
