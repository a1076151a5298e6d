"""Steiner chains: concentric reduction, 1-parameter families, moment invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    GeometryError,
    OrientedSphere,
    Similarity,
    compose,
    inner_product,
    sphere_from_center_radius,
    tangent,
    unit_inversion,
)


class PorismError(GeometryError):
    """The chain does not close for the requested ``(k, turns)``."""


@dataclass(frozen=True)
class Annulus:
    outer: OrientedSphere
    inner: OrientedSphere

    def __post_init__(self):
        if self.outer.dim != 2 or self.inner.dim != 2:
            raise GeometryError("Steiner chains live in the plane")
        if not self.inner.bend > 0:
            raise GeometryError("inner parent must have positive bend")
        if self.outer.bend > 0:
            raise GeometryError("outer parent must enclose (negative bend) or be a line")
        # Disjoint "interiors" <=> inversive product below -1.
        if not inner_product(self.outer, self.inner) < -1.0:
            raise GeometryError("parents must be disjoint and nested")


def limiting_points(s1: OrientedSphere, s2: OrientedSphere) -> tuple:
    """The two point-circles of the pencil spanned by two disjoint spheres.

    A point at infinity is returned as ``None``.
    """
    delta = inner_product(s1, s2)
    if abs(delta) <= 1.0:
        raise GeometryError("spheres intersect or touch; no limiting points")
    root = math.sqrt(delta * delta - 1.0)
    out = []
    # t^2 + 2 delta t + 1 = 0; stable pair of roots
    t1 = -delta - math.copysign(root, delta)
    for t in (t1, 1.0 / t1):
        v = t * s1.as_vector() + s2.as_vector()
        b, w = v[0], v[2:]
        if abs(b) <= 1e-11 * np.abs(v).max():
            out.append(None)
        else:
            out.append(w / b)
    return tuple(out)


def concentric_reduction(a: Annulus):
    """Conformal map sending the parents to origin-centered circles.

    Returns ``(map, R_out, r_in)``.  The map is normalized so the outer image
    has radius 1 unless the parents are already concentric.
    """
    points = limiting_points(a.outer, a.inner)
    if any(p is None for p in points):
        pole = None
    else:
        # The limiting point on the far side of the outer parent keeps roles.
        pole = min(points, key=lambda p: a.outer.evaluate(p))

    if pole is None:
        # Already concentric: translate the common center to the origin.
        shift = Similarity(translation=-a.inner.center)
        return shift, a.outer.radius, a.inner.radius
    inv = unit_inversion(pole)
    outer_img = inv.apply_sphere(a.outer)
    inner_img = inv.apply_sphere(a.inner)
    center = inner_img.center
    scale = 1.0 / outer_img.radius
    norm = Similarity(scale=scale, translation=-scale * center)
    m = compose(norm, inv)
    out_img, in_img = m.apply_sphere(a.outer), m.apply_sphere(a.inner)
    return m, out_img.radius, in_img.radius


def closure_mismatch(R_out: float, r_in: float, k: int, turns: int) -> float:
    return (R_out - r_in) / (R_out + r_in) - math.sin(math.pi * turns / k)


def _check_counts(k: int, turns: int):
    if k < 3:
        raise GeometryError("a Steiner chain has at least 3 circles")
    if not (1 <= turns and 2 * turns < k and math.gcd(turns, k) == 1):
        raise GeometryError(f"turns must satisfy 1 <= turns < k/2 and gcd(turns, k) = 1; got {turns}")


@dataclass(frozen=True)
class SteinerFamily:
    parents: Annulus
    k: int
    turns: int
    to_concentric: object
    from_concentric: object
    R_out: float
    r_in: float

    @property
    def chain_radius(self) -> float:
        return 0.5 * (self.R_out - self.r_in)

    @property
    def chain_center_distance(self) -> float:
        return 0.5 * (self.R_out + self.r_in)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.k


def family(a: Annulus, k: int, turns: int = 1, tol: float = DEFAULT_TOL) -> SteinerFamily:
    _check_counts(k, turns)
    m, R, r = concentric_reduction(a)
    mismatch = closure_mismatch(R, r, k, turns)
    if abs(mismatch) > tol:
        raise PorismError(
            f"porism does not close for (k={k}, turns={turns}): mismatch {mismatch:.3e}")
    return SteinerFamily(a, k, turns, m, m.inverse(), R, r)


def annulus_for(k: int, turns: int = 1, pole: float | None = 2.5, outer_radius: float = 1.0,
                center=(0.0, 0.0)) -> Annulus:
    """Annulus whose Steiner chains of length ``k`` close after ``turns`` turns.

    The concentric pair is inverted in a unit circle centered at
    ``(pole, 0)`` (``pole > R`` keeps the outer circle outermost), then
    scaled and moved so the outer parent has the requested radius and center.
    ``pole=None`` keeps the pair concentric.
    """
    _check_counts(k, turns)
    s = math.sin(math.pi * turns / k)
    outer = sphere_from_center_radius((0.0, 0.0), 1.0, inward=False)
    inner = sphere_from_center_radius((0.0, 0.0), (1.0 - s) / (1.0 + s))
    if pole is not None:
        if not pole > 1.0:
            raise GeometryError("pole must lie outside the outer circle")
        inv = unit_inversion((pole, 0.0))
        outer, inner = inv.apply_sphere(outer), inv.apply_sphere(inner)
    scale = outer_radius / outer.radius
    place = Similarity(scale=scale, translation=np.asarray(center, float) - scale * outer.center)
    return Annulus(place.apply_sphere(outer), place.apply_sphere(inner))


@dataclass(frozen=True)
class Chain:
    circles: tuple[OrientedSphere, ...]
    parameter: float

    @property
    def bends(self) -> np.ndarray:
        return np.array([c.bend for c in self.circles])

    @property
    def centers(self) -> np.ndarray:
        """Centers as complex numbers."""
        out = []
        for c in self.circles:
            if c.is_plane:
                raise GeometryError("chain contains a line; centers undefined")
            x = c.center
            out.append(complex(x[0], x[1]))
        return np.array(out)


def chain_in_normal_form(f: SteinerFamily, t: float) -> list[OrientedSphere]:
    rho, d = f.chain_radius, f.chain_center_distance
    out = []
    for j in range(f.k):
        theta = t + 2.0 * math.pi * f.turns * j / f.k
        out.append(sphere_from_center_radius((d * math.cos(theta), d * math.sin(theta)), rho))
    return out


def chain_at(f: SteinerFamily, t: float, nudge: float = 1e-6) -> Chain:
    """The chain at rotation parameter ``t``, mapped back to the original parents."""
    t = math.fmod(t, f.period)
    if t < 0:
        t += f.period
    for _ in range(8):
        circles = [f.from_concentric.apply_sphere(c) for c in chain_in_normal_form(f, t)]
        # A circle through the preimage of infinity would come back as a line.
        if all(abs(c.bend) > 1e-12 * max(1.0, abs(c.cobend)) for c in circles):
            return Chain(tuple(circles), t)
        t += nudge
    raise GeometryError("could not avoid a line in the chain")


def chain_is_valid(f: SteinerFamily, c: Chain, tol: float = DEFAULT_TOL) -> bool:
    k = len(c.circles)
    for j, s in enumerate(c.circles):
        if not (tangent(s, c.circles[(j + 1) % k], tol)
                and tangent(s, f.parents.outer, tol)
                and tangent(s, f.parents.inner, tol)):
            return False
    return True


def moments_I(c: Chain, m: int) -> float:
    if m < 1:
        raise ValueError("moment order must be >= 1")
    return float(np.sum(c.bends ** m))


def moments_J(c: Chain, m: int, n: int, origin: complex = 0j) -> complex:
    """``sum_j b_j^m z_j^n`` with centers measured from ``origin``."""
    if not 0 <= n <= m:
        raise ValueError("need 0 <= n <= m")
    z = c.centers - origin
    return complex(np.sum(c.bends ** m * z ** n))


def moment_J_scale(c: Chain, m: int, n: int, origin: complex = 0j) -> float:
    z = c.centers - origin
    return float(np.sum(np.abs(c.bends ** m * z ** n)))


def elementary_from_power_sums(power_sums) -> list[float]:
    """Newton identities: ``e_0 = 1``, ``m e_m = sum_{i=1}^m (-1)^{i-1} e_{m-i} p_i``."""
    e = [1.0]
    for m in range(1, len(power_sums) + 1):
        acc = 0.0
        for i in range(1, m + 1):
            acc += (-1) ** (i - 1) * e[m - i] * power_sums[i - 1]
        e.append(acc / m)
    return e


def chain_polynomial(c: Chain) -> list[float]:
    """Monic coefficients of ``prod (x - b_j)``, highest degree first."""
    b = c.bends
    k = b.size
    e = elementary_from_power_sums([float(np.sum(b ** m)) for m in range(1, k + 1)])
    return [(-1) ** i * e[i] for i in range(k + 1)]


def relative_variation(values, scales) -> float:
    """Spread of ``values`` relative to the largest term-magnitude scale."""
    values = np.asarray(values)
    spread = float(np.max(np.abs(values - values[0])))
    return spread / max(float(np.max(scales)), np.finfo(float).tiny)


def sample_grid(f: SteinerFamily, samples: int) -> np.ndarray:
    return np.arange(samples) * (f.period / samples)


@dataclass
class InvariantReport:
    k: int
    turns: int
    samples: int
    I: list
    I_variation: list
    J: dict
    J_variation: dict
    polynomial_variation: list


def certify(f: SteinerFamily, samples: int = 100, origin: complex = 0j) -> InvariantReport:
    """Sample the family and measure the variation of every moment up to order k."""
    chains = [chain_at(f, t) for t in sample_grid(f, samples)]
    k = f.k
    I_vals, I_var = [], []
    for m in range(1, k + 1):
        vals = [moments_I(c, m) for c in chains]
        scales = [float(np.sum(np.abs(c.bends) ** m)) for c in chains]
        I_vals.append(float(np.mean(vals)))
        I_var.append(relative_variation(vals, scales))
    J_vals, J_var = {}, {}
    for m in range(0, k + 1):
        for n in range(0, m + 1):
            vals = [moments_J(c, m, n, origin) for c in chains]
            scales = [moment_J_scale(c, m, n, origin) for c in chains]
            J_vals[(m, n)] = complex(np.mean(vals))
            J_var[(m, n)] = relative_variation(vals, scales)
    polys = np.array([chain_polynomial(c) for c in chains])
    poly_scales = np.array([np.poly(np.abs(c.bends)) for c in chains])
    poly_var = [relative_variation(polys[:, i], np.abs(poly_scales[:, i]))
                for i in range(k + 1)]
    return InvariantReport(k, f.turns, samples, I_vals, I_var, J_vals, J_var, poly_var)
