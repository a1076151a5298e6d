import math

import numpy as np
import pytest

from inversive.core import sphere_from_center_radius, tangent
from inversive.descartes import (
    DescartesError,
    Quadruple,
    complex_residual,
    construct_quadruple,
    descartes_residual,
    extra_conserved,
    fourth_circles,
    soddy_replace,
    soddy_solutions,
    swap,
)
from inversive.steiner import annulus_for, chain_at, family


def test_residual_examples():
    assert descartes_residual(-1, 2, 2, 3) == 0
    assert descartes_residual(0, 0, 1, 1) == 0
    assert descartes_residual(1, 1, 1, 1) == 8


def test_soddy_examples():
    a1, a2 = soddy_solutions(1, 1, 1)
    assert a1 == pytest.approx(3 + 2 * math.sqrt(3))
    assert a2 == pytest.approx(3 - 2 * math.sqrt(3))
    assert soddy_solutions(2, 2, 3) == (15, -1)
    assert soddy_solutions(0, 0, 1) == (1, 1)


def test_soddy_negative_discriminant():
    with pytest.raises(DescartesError, match="no real tangent"):
        soddy_solutions(-1, 0.1, 0.1)


def test_soddy_replace_examples():
    assert soddy_replace(-1, 2, 2, 3) == 15
    assert soddy_replace(15, 2, 2, 3) == -1
    assert (-1) * 15 == 2 ** 2 + 2 ** 2 + 3 ** 2 - 2 * (4 + 6 + 6)
    with pytest.raises(DescartesError):
        soddy_replace(1, 1, 1, 1)


def test_random_roots_residual_and_vieta():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        b = rng.uniform(-1, 3, size=3)
        disc = b[0] * b[1] + b[1] * b[2] + b[2] * b[0]
        if disc <= 0:
            continue
        a1, a2 = soddy_solutions(*b)
        assert a1 >= a2
        for a in (a1, a2):
            assert abs(descartes_residual(a, *b)) < 1e-12
        prod = b @ b - 2 * disc
        assert a1 * a2 == pytest.approx(prod, rel=1e-9, abs=1e-12)
        assert a1 + a2 == pytest.approx(2 * b.sum(), rel=1e-12, abs=1e-12)


def _oracle_fourth(c1, c2, c3, bend):
    """Center of a circle of the given bend tangent to three circles, by intersecting
    distance constraints (independent of the bend-center algebra)."""
    r = 1.0 / abs(bend)

    def dist(c):
        return c.radius + r if bend > 0 else r - c.radius

    p1, p2 = c1.center, c2.center
    d1, d2 = dist(c1), dist(c2)
    base = p2 - p1
    L = np.linalg.norm(base)
    x = (d1 ** 2 - d2 ** 2 + L ** 2) / (2 * L)
    h = math.sqrt(max(d1 ** 2 - x ** 2, 0.0))
    u = base / L
    v = np.array([-u[1], u[0]])
    cands = [p1 + x * u + s * h * v for s in (1, -1)]
    return min(cands, key=lambda z: abs(np.linalg.norm(z - c3.center) - dist(c3)))


@pytest.mark.parametrize("bends", [(2, 2, 3), (1, 1, 1), (1.3, 2.7, 0.9), (5, 1, 2)])
def test_complex_vieta_against_geometric_oracle(bends):
    c1, c2, c3 = construct_quadruple(*bends).circles[1:]
    big, small = fourth_circles(c1, c2, c3)
    for s in (big, small):
        oracle = _oracle_fourth(c1, c2, c3, s.bend)
        np.testing.assert_allclose(s.center, oracle, atol=1e-9)
    zsum = sum(c.bend_center for c in (c1, c2, c3))
    np.testing.assert_allclose(big.bend_center + small.bend_center, 2 * zsum, atol=1e-9)


def test_construct_quadruple_2_2_3():
    q = construct_quadruple(2, 2, 3)
    assert q.bends[0] == pytest.approx(-1)
    assert all(tangent(q.circles[i], q.circles[j]) for i in range(4) for j in range(i + 1, 4))
    assert abs(descartes_residual(*q.bends)) < 1e-9
    assert abs(complex_residual(q)) < 1e-9
    assert q.is_valid()


def test_construct_quadruple_symmetric_center_at_centroid():
    q = construct_quadruple(1, 1, 1)
    centroid = np.mean([c.center for c in q.circles[1:]], axis=0)
    np.testing.assert_allclose(q.circles[0].center, centroid, atol=1e-12)


def test_construct_rejects_nonpositive():
    with pytest.raises(DescartesError):
        construct_quadruple(1, 0, 1)


def test_construct_with_line_fourth():
    q = construct_quadruple(1, 1, 4)
    assert q.circles[0].is_plane
    assert all(tangent(q.circles[0], c) for c in q.circles[1:])
    assert abs(complex_residual(q)) < 1e-9


def test_complex_residual_translation_and_degenerate():
    q = construct_quadruple(1.5, 2.5, 4.0)
    for u in (1 + 2j, -3.5 + 0.25j):
        assert abs(complex_residual(q.translated(u))) < 1e-9 * max(1, abs(u)) ** 2 * 100
    zero = Quadruple((1, 2, 3, 4), tuple(sphere_from_center_radius((0, 0), 1 / b) for b in (1, 2, 3, 4)))
    assert complex_residual(zero) == 0


def test_complex_residual_requires_centers():
    with pytest.raises(DescartesError):
        complex_residual(Quadruple((-1, 2, 2, 3)))


def test_swap_keeps_configuration_valid():
    q = construct_quadruple(2, 2, 3)
    for i in range(4):
        r = swap(q, i)
        assert r.is_valid()
        assert all(tangent(r.circles[i], r.circles[j]) for j in range(4) if j != i)
        back = swap(r, i)
        assert back.bends == q.bends
        assert back.circles[i].isclose(q.circles[i])


def test_quadruple_json_round_trip():
    q = construct_quadruple(2, 2, 3)
    r = Quadruple.from_dict(q.to_dict())
    for a, b in zip(q.circles, r.circles):
        assert a.isclose(b, 1e-12)


def _k3_chains():
    f = family(annulus_for(3, 1, pole=2.2), 3, 1)
    return f, [chain_at(f, t) for t in np.linspace(0, f.period, 7, endpoint=False)]


def _as_quadruple(f, chain):
    return Quadruple((f.parents.outer.bend,) + tuple(chain.bends), (f.parents.outer,) + chain.circles)


def test_extra_conserved_constant_across_family():
    f, chains = _k3_chains()
    vals = [extra_conserved(_as_quadruple(f, c)) for c in chains]
    scale = max(sum(abs(b) * abs(z) for b, z in zip(c.bends, c.bends * c.centers)) for c in chains)
    assert max(abs(v - vals[0]) for v in vals) <= 1e-9 * scale


def test_extra_conserved_symmetric_configuration():
    q = construct_quadruple(1, 1, 1)
    q = q.translated(-complex(*q.circles[0].center))
    assert abs(extra_conserved(q)) < 1e-12


def test_k3_moment_formulas_and_third_moment_control():
    f, chains = _k3_chains()
    a1, a2 = f.parents.outer.bend, f.parents.inner.bend
    third = []
    for c in chains:
        b = c.bends
        assert b.sum() == pytest.approx((a1 + a2) / 2, rel=1e-9)
        # second moment from the Vieta sum and product
        assert (b ** 2).sum() == pytest.approx((a1 ** 2 + 6 * a1 * a2 + a2 ** 2) / 8, rel=1e-9)
        third.append((b ** 3).sum())
    assert (max(third) - min(third)) / max(third) > 1e-6


def test_printed_second_moment_form_is_inconsistent():
    # (6 a1 a2 - a1^2 - a2^2)/4 equals the Vieta value only when a1 == a2
    a1, a2 = -1, 15
    assert 2 ** 2 + 2 ** 2 + 3 ** 2 == (a1 ** 2 + 6 * a1 * a2 + a2 ** 2) // 8
    assert (6 * a1 * a2 - a1 ** 2 - a2 ** 2) / 4 == -79
