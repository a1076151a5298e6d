"""Descartes quadruples: residuals, Soddy roots and explicit tangent configurations."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import DEFAULT_TOL, GeometryError, OrientedSphere, sphere_from_center_radius, tangent


class DescartesError(GeometryError):
    pass


def descartes_residual(a, b1, b2, b3):
    """``(a+b1+b2+b3)^2 - 2(a^2+b1^2+b2^2+b3^2)``.

    Exact for int/Fraction input; float input is evaluated as given.
    """
    s = a + b1 + b2 + b3
    return s * s - 2 * (a * a + b1 * b1 + b2 * b2 + b3 * b3)


def soddy_solutions(b1: float, b2: float, b3: float) -> tuple[float, float]:
    """Both bends tangent to three mutually tangent circles, larger first."""
    disc = b1 * b2 + b2 * b3 + b3 * b1
    if disc < 0:
        raise DescartesError("no real tangent fourth circle (negative discriminant)")
    s = b1 + b2 + b3
    root = 2.0 * math.sqrt(disc)
    big = s + root if s >= 0 else s - root
    product_ = b1 * b1 + b2 * b2 + b3 * b3 - 2.0 * disc
    other = product_ / big if big != 0 else s - root
    return (big, other) if big >= other else (other, big)


def soddy_replace(a1, b1, b2, b3, tol: float = DEFAULT_TOL):
    """Swap ``a1`` for the other root: ``a2 = 2(b1+b2+b3) - a1``."""
    res = descartes_residual(a1, b1, b2, b3)
    scale = max(1.0, float(a1 * a1 + b1 * b1 + b2 * b2 + b3 * b3))
    if abs(float(res)) > tol * scale:
        raise DescartesError(f"input is not a Descartes quadruple (residual {float(res):.3g})")
    return 2 * (b1 + b2 + b3) - a1


@dataclass(frozen=True, eq=False)
class Quadruple:
    """Four bends ``(a, b1, b2, b3)`` and, optionally, the four circles."""

    bends: tuple
    circles: tuple[OrientedSphere, ...] | None = None

    def __post_init__(self):
        if len(self.bends) != 4:
            raise DescartesError("a quadruple has exactly four bends")
        object.__setattr__(self, "bends", tuple(self.bends))
        if self.circles is not None:
            if len(self.circles) != 4:
                raise DescartesError("a quadruple has exactly four circles")
            object.__setattr__(self, "circles", tuple(self.circles))

    @property
    def bend_centers(self) -> list[complex]:
        if self.circles is None:
            raise DescartesError("quadruple has no centers")
        return [complex(*c.bend_center) for c in self.circles]

    @property
    def centers(self) -> list[complex | None]:
        if self.circles is None:
            raise DescartesError("quadruple has no centers")
        return [None if c.is_plane else complex(*c.center) for c in self.circles]

    def residual(self):
        return descartes_residual(*self.bends)

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        scale = max(1.0, sum(float(b) ** 2 for b in self.bends))
        if abs(float(self.residual())) > tol * scale:
            return False
        if self.circles is not None:
            return abs(complex_residual(self)) <= tol * _complex_scale(self)
        return True

    def translated(self, u: complex) -> "Quadruple":
        from .core import translate_sphere
        if self.circles is None:
            return self
        t = np.array([u.real, u.imag])
        return Quadruple(self.bends, tuple(translate_sphere(c, t) for c in self.circles))

    def to_dict(self) -> dict:
        out = {"bends": [float(b) for b in self.bends]}
        if self.circles is not None:
            out["centers"] = [None if z is None else [z.real, z.imag] for z in self.centers]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Quadruple":
        bends = data["bends"]
        centers = data.get("centers")
        if centers is None:
            return cls(tuple(bends))
        if any(c is None for c in centers):
            raise DescartesError("cannot rebuild a line from a null center")
        circles = tuple(
            sphere_from_center_radius(c, 1.0 / abs(b), inward=b > 0)
            for b, c in zip(bends, centers))
        return cls(tuple(bends), circles)


def _complex_scale(q: Quadruple) -> float:
    zs = q.bend_centers
    return max(1.0, sum(abs(z) for z in zs) ** 2)


def complex_residual(q: Quadruple) -> complex:
    """``(sum b_i z_i)^2 - 2 sum (b_i z_i)^2`` over the four circles."""
    zs = q.bend_centers
    s = sum(zs)
    return s * s - 2 * sum(z * z for z in zs)


def extra_conserved(q: Quadruple) -> complex:
    """``b1^2 z1 + b2^2 z2 + b3^2 z3`` over the three circles after ``a``."""
    if q.circles is None:
        raise DescartesError("quadruple has no centers")
    return sum(float(b) * z for b, z in zip(q.bends[1:], q.bend_centers[1:]))


def _third_center(r1: float, r2: float, r3: float) -> np.ndarray:
    d12 = r1 + r2
    d13 = r1 + r3
    d23 = r2 + r3
    x = (d13 ** 2 - d23 ** 2 + d12 ** 2) / (2.0 * d12)
    y2 = d13 ** 2 - x ** 2
    if y2 < 0:
        raise DescartesError("radii do not admit three mutually tangent circles")
    return np.array([x, math.sqrt(y2)])


def fourth_circles(c1: OrientedSphere, c2: OrientedSphere, c3: OrientedSphere,
                   tol: float = 1e-7) -> tuple[OrientedSphere, OrientedSphere]:
    """Both circles tangent to three mutually tangent circles.

    Ordered like :func:`soddy_solutions` (larger bend first).  Each candidate
    comes from the complex Descartes quadratic on bend-centers; the sign is
    fixed by checking tangency.
    """
    circles = (c1, c2, c3)
    bends = [c.bend for c in circles]
    cobends = [c.cobend for c in circles]
    zs = [complex(*c.bend_center) for c in circles]
    big, small = soddy_solutions(*bends)
    zsum = sum(zs)
    zroot = 2.0 * cmath.sqrt(zs[0] * zs[1] + zs[1] * zs[2] + zs[2] * zs[0])
    csum = sum(cobends)
    cdisc = cobends[0] * cobends[1] + cobends[1] * cobends[2] + cobends[2] * cobends[0]
    croot = 2.0 * math.sqrt(max(cdisc, 0.0))

    def candidates(a):
        for zsign, csign in product((1, -1), (1, -1)):
            z = zsum + zsign * zroot
            w = np.array([z.real, z.imag])
            if abs(a) > 1e-12 * max(1.0, abs(big)):
                cob = (w @ w - 1.0) / a
            else:
                a_ = 0.0
                cob = csum + csign * croot
                yield OrientedSphere(a_, cob, w)
                continue
            yield OrientedSphere(a, cob, w)

    def best(a, exclude=None):
        scored = []
        for cand in candidates(a):
            if exclude is not None and cand.isclose(exclude, 1e-9):
                continue
            err = max(abs(_ip_plus_one(cand, c)) for c in circles)
            scored.append((err, cand))
        if not scored:
            raise DescartesError("no tangent fourth circle found")
        err, cand = min(scored, key=lambda t: t[0])
        if not all(tangent(cand, c, tol) for c in circles):
            raise DescartesError(f"fourth circle failed tangency check (error {err:.3g})")
        return cand

    first = best(big)
    # Vieta on bend-centers gives the partner from the first solution.
    partner_w = 2.0 * (c1.bend_center + c2.bend_center + c3.bend_center) - first.bend_center
    partner_cob = 2.0 * sum(cobends) - first.cobend
    second = OrientedSphere(2.0 * sum(bends) - first.bend, partner_cob, partner_w)
    if not all(tangent(second, c, tol) for c in circles):
        second = best(small, exclude=first)
    return first, second


def _ip_plus_one(s1, s2):
    from .core import inner_product
    return inner_product(s1, s2) + 1.0


def construct_quadruple(b1: float, b2: float, b3: float) -> Quadruple:
    """Three externally tangent circles plus the smaller Soddy root.

    Circle 1 sits at the origin, circle 2 on the positive x-axis, circle 3 in
    the upper half-plane.  The returned ``a`` is ``soddy_solutions(...)[1]``,
    which is the enclosing circle whenever it is negative.
    """
    if min(b1, b2, b3) <= 0:
        raise DescartesError("construct_quadruple needs three positive bends")
    r1, r2, r3 = 1.0 / b1, 1.0 / b2, 1.0 / b3
    c1 = sphere_from_center_radius((0.0, 0.0), r1)
    c2 = sphere_from_center_radius((r1 + r2, 0.0), r2)
    c3 = sphere_from_center_radius(_third_center(r1, r2, r3), r3)
    _, outer = fourth_circles(c1, c2, c3)
    return Quadruple((outer.bend, b1, b2, b3), (outer, c1, c2, c3))


def swap(q: Quadruple, index: int) -> Quadruple:
    """Soddy-replace one circle (bend and geometry) of a quadruple."""
    others = [i for i in range(4) if i != index]
    bends = list(q.bends)
    bends[index] = soddy_replace(bends[index], *(bends[i] for i in others))
    circles = None
    if q.circles is not None:
        vec = 2.0 * sum(q.circles[i].as_vector() for i in others) - q.circles[index].as_vector()
        circles = list(q.circles)
        circles[index] = OrientedSphere.from_vector(vec)
    return Quadruple(tuple(bends), None if circles is None else tuple(circles))
