"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

from fractions import Fraction

import numpy as np
import pytest

from inversive.core import (
    Similarity,
    invert_sphere,
    random_conformal,
    random_rotation,
    sphere_from_center_radius,
    tangent,
)
from inversive.descartes import (
    construct_quadruple,
    descartes_residual,
    soddy_replace,
    soddy_solutions,
    swap,
)
from inversive.designs import (
    Polynomial,
    catalog,
    configuration_from_design,
    conformal_moment_average,
    conformal_moment_scale,
    curvature_moment_average,
    design_strength_check,
    get_design,
    monomials,
    monomials_upto,
    random_inversion,
    roots_of_unity_design,
)
from inversive.gasket import bounding_circle, contained_in, enumerate_bends, generate
from inversive.noneuclid import (
    hyperbolic_curvature,
    hyperbolic_mauldon_residual,
    lifted_design_moments,
    plane_to_cap,
    printed_mauldon_residual,
    spherical_chain_moments,
    spherical_curvature,
    spherical_mauldon_residual,
)
from inversive.steiner import annulus_for, certify, family
from inversive.svg import render_svg


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
        return ok
    return emit


def test_criterion_1_descartes(report):
    rng = np.random.default_rng(1)
    worst_res, worst_vieta, involution, n = 0.0, 0.0, True, 0
    while n < 1000:
        b = rng.uniform(-1.0, 3.0, size=3)
        disc = b[0] * b[1] + b[1] * b[2] + b[2] * b[0]
        if disc <= 0:
            continue
        n += 1
        a1, a2 = soddy_solutions(*b)
        worst_res = max(worst_res, abs(descartes_residual(a1, *b)), abs(descartes_residual(a2, *b)))
        prod = b @ b - 2 * disc
        worst_vieta = max(worst_vieta, abs(a1 * a2 - prod) / max(abs(prod), 1e-300))
        exact = [Fraction(float(x)) for x in b]
        once = soddy_replace(Fraction(a1), *exact)
        involution &= soddy_replace(once, *exact) == Fraction(a1)
    ok = worst_res < 1e-12 and worst_vieta < 1e-9 and involution
    assert report(1, "Descartes/Soddy", ok,
                  f"max residual {worst_res:.2e}, max Vieta rel {worst_vieta:.2e}, involution exact {involution}")


def _generic(k, turns=1):
    return family(annulus_for(k, turns, pole=2.5, outer_radius=1.3, center=(0.4, -0.2)), k, turns)


def test_criterion_2_steiner_bend_moments(report):
    worst, control, details = 0.0, float("inf"), []
    for k in range(3, 8):
        rep = certify(_generic(k), samples=100)
        worst = max(worst, max(rep.I_variation[: k - 1]))
        control = min(control, rep.I_variation[k - 1])
    f = _generic(3)
    a1, a2 = f.parents.outer.bend, f.parents.inner.bend
    rep = certify(f, samples=100)
    first = abs(rep.I[0] - (a1 + a2) / 2) / abs(rep.I[0])
    printed = (6 * a1 * a2 - a1 ** 2 - a2 ** 2) / 4
    second = abs(rep.I[1] - printed) / abs(rep.I[1])
    vieta = abs(rep.I[1] - (a1 ** 2 + 6 * a1 * a2 + a2 ** 2) / 8) / abs(rep.I[1])
    details.append(f"max I_1..I_(k-1) variation {worst:.2e}, min I_k variation {control:.2e}")
    details.append(f"k=3 I_1 closed form rel err {first:.2e}")
    details.append(f"k=3 I_2 vs printed closed form rel err {second:.2e} "
                   f"(Vieta-derived form rel err {vieta:.2e})")
    ok = worst < 1e-9 and control > 1e-6 and first < 1e-9 and second < 1e-9
    assert report(2, "Steiner bend moments", ok, "; ".join(details))


def test_criterion_3_complex_moments(report):
    worst, poly_worst, const_min, shift_same = 0.0, 0.0, float("inf"), True
    for k in range(3, 8):
        f = _generic(k)
        verdicts = []
        for origin in (0j, 2.5 - 1.5j):
            rep = certify(f, samples=100, origin=origin)
            vals = [v for (m, n), v in rep.J_variation.items() if m <= k - 1]
            worst = max(worst, max(vals))
            verdicts.append(tuple(v < 1e-9 for v in vals))
        shift_same &= verdicts[0] == verdicts[1]
        poly_worst = max(poly_worst, max(rep.polynomial_variation[:k]))
        const_min = min(const_min, rep.polynomial_variation[k])
    ok = worst < 1e-9 and shift_same and poly_worst < 1e-9 and const_min > 1e-6
    assert report(3, "Complex moments and chain polynomial", ok,
                  f"max J variation {worst:.2e}, shifted origin same verdicts {shift_same}, "
                  f"max coefficient variation {poly_worst:.2e}, min constant-term variation {const_min:.2e}")


def test_criterion_4_design_catalog(report):
    rows, ok = [], True
    for d in catalog():
        passes = bool(design_strength_check(d.points, d.strength, 1e-9))
        fails_next = not design_strength_check(d.points, d.control_degree, 1e-9)
        ok &= passes and fails_next
        rows.append(f"{d.name}(M={d.strength},fail@{d.control_degree}:{'ok' if passes and fails_next else 'BAD'})")
    assert report(4, "Design catalog", ok, " ".join(rows))


def _gap(c1, c2, m, F):
    a, b = conformal_moment_average(c1, m, F, False), conformal_moment_average(c2, m, F, False)
    return abs(a - b) / max(conformal_moment_scale(c1, m, F), conformal_moment_scale(c2, m, F))


def test_criterion_5_conformal_moments(report):
    rng = np.random.default_rng(5)
    c1 = configuration_from_design(get_design("icosahedron"), 3.0)
    c2 = configuration_from_design(get_design("dodecahedron"), 3.0)
    basis = [Polynomial.monomial(e) for e in monomials_upto(3, 5)]
    deg6 = [Polynomial.monomial(e) for e in monomials(3, 6)]
    worst, control, curv = 0.0, float("inf"), 0.0
    for _ in range(20):
        m = random_inversion(3, rng)
        worst = max(worst, max(_gap(c1, c2, m, F) for F in basis))
        control = min(control, max(_gap(c1, c2, m, F) for F in deg6))
        for p in range(1, 6):
            a, b = curvature_moment_average(c1, m, p), curvature_moment_average(c2, m, p)
            curv = max(curv, abs(a - b) / abs(a))
    ok = worst < 1e-9 and curv < 1e-9 and control > 1e-6
    assert report(5, "Conformal moment averages", ok,
                  f"max degree<=5 gap {worst:.2e}, max curvature-moment gap {curv:.2e}, "
                  f"min degree-6 control gap {control:.2e}")


def test_criterion_6_gasket(report, tmp_path):
    g, nodes = generate((-1, 2, 2, 3), max_bend=1000, keep_nodes=True)
    integral = all(isinstance(b, int) for b in g.bends)
    residual = all(node.residual() == 0 for node in nodes)
    worst_tangent = True
    for node in nodes:
        c = node.geometry
        worst_tangent &= all(tangent(c[i], c[j], 1e-9) for i in range(4) for j in range(i + 1, 4))
    oracle = enumerate_bends((-1, 2, 2, 3), 1000)
    outer = bounding_circle(g)
    inside = all(contained_in(outer, s) for b, s, _ in g.circles if b > 0)
    svg = render_svg([s for _, s, _ in g.circles], frame=outer,
                     groups=[f"gen{d}" for _, _, d in g.circles])
    (tmp_path / "gasket.svg").write_text(svg)
    svg_count = svg.count("<circle")
    gens = {d for _, _, d in g.circles}
    ok = (integral and residual and worst_tangent and sorted(g.bends) == oracle
          and svg_count == len(oracle) and inside and {0, 1, 2, 3} <= gens)
    assert report(6, "Apollonian gasket", ok,
                  f"{len(g.circles)} circles (oracle {len(oracle)}, svg {svg_count}), "
                  f"{len(nodes)} nodes, integral {integral}, residual 0 {residual}, "
                  f"tangent {worst_tangent}, contained {inside}, depth {g.max_depth_reached}")


def _disk_config(q):
    lo = np.min([s.center - s.radius for s in q.circles], axis=0)
    hi = np.max([s.center + s.radius for s in q.circles], axis=0)
    half = float(np.linalg.norm(hi - lo)) / 2
    sim = Similarity(scale=0.9 / half, translation=-0.9 / half * (lo + hi) / 2)
    return [sim.apply_sphere(s) for s in q.circles]


def test_criterion_7_spherical_and_hyperbolic(report):
    rng = np.random.default_rng(7)
    sph, hyp, printed = 0.0, 0.0, float("inf")
    for _ in range(50):
        q = construct_quadruple(*rng.uniform(0.3, 5.0, size=3)).translated(complex(*rng.normal(size=2)))
        k = [spherical_curvature(s) for s in q.circles]
        sph = max(sph, abs(spherical_mauldon_residual(k)))
        printed = min(printed, abs(printed_mauldon_residual(k, -2.0)), abs(printed_mauldon_residual(k, 2.0)))
        circles = _disk_config(swap(q, 0) if q.bends[0] < 0 else q)
        h = [hyperbolic_curvature(s) for s in circles]
        hyp = max(hyp, abs(hyperbolic_mauldon_residual(h)))
    chain_worst, chain_control, route = 0.0, float("inf"), 0.0
    for k in (4, 5, 6):
        ann = annulus_for(k, pole=2.2, outer_radius=1.5, center=(0.2, 0.1))
        rot = random_rotation(3, rng)
        a, c = plane_to_cap(ann.outer).rotated(rot), plane_to_cap(ann.inner).rotated(rot)
        rep = spherical_chain_moments(a, c, k, samples=100)
        chain_worst = max(chain_worst, max(rep.variation[: k - 1]))
        chain_control = min(chain_control, rep.variation[k - 1])
        route = max(route, max(abs(x - y) / abs(x) for x, y in
                               zip(rep.moments[: k - 1], rep.design_route_moments[: k - 1])))
    thm4, thm4_control = 0.0, float("inf")
    pairs = [((roots_of_unity_design(5), roots_of_unity_design(7)), (0.7, -0.3), 4),
             ((get_design("icosahedron"), get_design("dodecahedron")), (0.4, 0.2, -0.5), 5)]
    for (d1, d2), center, M in pairs:
        m1 = lifted_design_moments(configuration_from_design(d1, 1.6, center, 0.9), M + 1)
        m2 = lifted_design_moments(configuration_from_design(d2, 1.6, center, 0.9), M + 1)
        thm4 = max(thm4, max(abs(x - y) / abs(x) for x, y in zip(m1[: M + 1], m2[: M + 1])))
        thm4_control = min(thm4_control, abs(m1[M + 1] - m2[M + 1]) / abs(m2[M + 1]))
    ok = (sph < 1e-9 and hyp < 1e-9 and chain_worst < 1e-9 and chain_control > 1e-6
          and route < 1e-9 and thm4 < 1e-9 and thm4_control > 1e-6)
    assert report(7, "Spherical/hyperbolic analogs", ok,
                  f"Mauldon residual sph {sph:.2e} hyp {hyp:.2e} (printed linear form min |residual| {printed:.2e}); "
                  f"chain moments max variation {chain_worst:.2e}, m=k control {chain_control:.2e}, "
                  f"design route gap {route:.2e}; two-design gap {thm4:.2e}, M+1 control {thm4_control:.2e}")


def test_criterion_8_core_randomized(report):
    rng = np.random.default_rng(8)
    inv_fail = norm_fail = tan_fail = 0
    worst_norm = 0.0
    for _ in range(10_000):
        dim = int(rng.integers(2, 4))
        center = rng.uniform(-3, 3, size=dim)
        s = sphere_from_center_radius(center, rng.uniform(0.1, 3.0), bool(rng.integers(2)))
        c = rng.uniform(-3, 3, size=dim)
        img = invert_sphere(s, c)
        scale = max(1.0, float(np.abs(img.as_vector()).max())) ** 2
        err = abs(img.lorentz_norm() - 1.0) / scale
        worst_norm = max(worst_norm, err)
        norm_fail += err > 1e-9
        inv_fail += not invert_sphere(img, c).isclose(s, 1e-9)
    for _ in range(10_000 // 6 + 1):
        q = construct_quadruple(*rng.uniform(0.3, 5.0, size=3)).translated(complex(*rng.uniform(-2, 2, size=2)))
        m = random_conformal(2, rng)
        imgs = [m.apply_sphere(x) for x in q.circles]
        tan_fail += sum(not tangent(imgs[i], imgs[j], 1e-9) for i in range(4) for j in range(i + 1, 4))
    ok = inv_fail == 0 and norm_fail == 0 and tan_fail == 0
    assert report(8, "Core geometry randomized", ok,
                  f"involution failures {inv_fail}/10000, normalization failures {norm_fail}/10000 "
                  f"(worst {worst_norm:.2e}), tangency failures {tan_fail}/{6 * (10_000 // 6 + 1)}")
