"""Spherical and hyperbolic analogs, transported through stereographic projection.

Projection is always from the South Pole ``(-1, 0, ..., 0)`` onto the
hyperplane ``y_0 = 0``.  For a planar sphere with inversive coordinates
``(b, b', w)`` the lifted curvatures are

* spherical:  ``cot(alpha)  = (b + b') / 2``
* hyperbolic (Poincare ball): ``coth(alpha) = (b - b') / 2``
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, GeometryError, OrientedSphere
from .steiner import Annulus, chain_at, family, relative_variation, sample_grid


@dataclass(frozen=True, eq=False)
class SphericalCap:
    """The cap ``{y in S^d : p.y >= cos(alpha)}``, cooriented toward ``p``."""

    pole: np.ndarray
    radius: float

    def __post_init__(self):
        p = np.array(self.pole, dtype=float).reshape(-1)
        n = np.linalg.norm(p)
        if not abs(n - 1.0) < 1e-9:
            raise GeometryError("cap pole must be a unit vector")
        if not 0.0 < self.radius < math.pi:
            raise GeometryError("cap radius must lie in (0, pi)")
        p = p / n
        p.setflags(write=False)
        object.__setattr__(self, "pole", p)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def curvature(self) -> float:
        return math.cos(self.radius) / math.sin(self.radius)

    def rotated(self, rotation) -> "SphericalCap":
        return SphericalCap(np.asarray(rotation) @ self.pole, self.radius)

    def lorentz_vector(self) -> np.ndarray:
        """``(p, cos a) / sin a``; unit-norm in the Minkowski form ``|p|^2 - h^2``."""
        s = math.sin(self.radius)
        return np.concatenate([self.pole, [math.cos(self.radius)]]) / s


def cap_product(a: SphericalCap, c: SphericalCap) -> float:
    """Inversive product of two caps; ``-1`` means tangent with opposite coorientation."""
    u, v = a.lorentz_vector(), c.lorentz_vector()
    return float(u[:-1] @ v[:-1] - u[-1] * v[-1])


def caps_tangent(a: SphericalCap, c: SphericalCap, tol: float = DEFAULT_TOL) -> bool:
    scale = max(1.0, abs(a.curvature * c.curvature), 1.0 / (math.sin(a.radius) * math.sin(c.radius)))
    return abs(cap_product(a, c) + 1.0) <= tol * scale


def stereographic_point(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return y[1:] / (1.0 + y[0])


def inverse_stereographic_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    xx = x @ x
    return np.concatenate([[(1.0 - xx) / (1.0 + xx)], 2.0 * x / (1.0 + xx)])


def cap_to_plane(c: SphericalCap) -> OrientedSphere:
    """Stereographic image of a cap.

    Center ``p_i / (p_0 + cos a)`` and bend ``(p_0 + cos a) / sin a``; a cap
    through the South Pole comes out as a hyperplane.
    """
    p0, rest = c.pole[0], c.pole[1:]
    ca, sa = math.cos(c.radius), math.sin(c.radius)
    bend = (p0 + ca) / sa
    if abs(bend) < 1e-15:
        bend = 0.0
    return OrientedSphere(bend, (ca - p0) / sa, rest / sa)


def plane_to_cap(s: OrientedSphere) -> SphericalCap:
    half_sum = 0.5 * (s.bend + s.cobend)
    half_diff = 0.5 * (s.bend - s.cobend)
    inv_sin = math.sqrt(half_diff ** 2 + float(s.bend_center @ s.bend_center))
    sa = 1.0 / inv_sin
    pole = np.concatenate([[half_diff], s.bend_center]) * sa
    return SphericalCap(pole, math.atan2(sa, half_sum * sa))


def plane_curvature_to_spherical(center, bend: float) -> float:
    """``cot a = (b^2 - 1) / (2b) + (b / 2) |x|^2`` for the lifted cap."""
    if bend == 0:
        raise GeometryError("a line lifts to a cap through the South Pole; use plane_to_cap")
    x = np.asarray(center, dtype=float)
    return (bend * bend - 1.0) / (2.0 * bend) + 0.5 * bend * float(x @ x)


def spherical_curvature(s: OrientedSphere) -> float:
    return 0.5 * (s.bend + s.cobend)


def hyperbolic_curvature(s: OrientedSphere) -> float:
    """``coth`` of the hyperbolic radius of a circle in the Poincare ball."""
    return 0.5 * (s.bend - s.cobend)


def _mauldon(curvatures, constant: float) -> float:
    k = np.asarray(curvatures, dtype=float)
    if k.size != 4:
        raise ValueError("Mauldon relation needs four curvatures")
    total = float(k.sum())
    return float(np.sum(k * k) - 0.5 * total * total - constant)


def spherical_mauldon_residual(curvatures) -> float:
    """``sum k^2 - (sum k)^2 / 2 + 2`` with ``k = cot(alpha)``."""
    return _mauldon(curvatures, -2.0)


def hyperbolic_mauldon_residual(curvatures) -> float:
    """``sum k^2 - (sum k)^2 / 2 - 2`` with ``k = coth(alpha)``."""
    return _mauldon(curvatures, 2.0)


def spherical_descartes_residual(alphas) -> float:
    a = np.asarray(alphas, dtype=float)
    return spherical_mauldon_residual(np.cos(a) / np.sin(a))


def hyperbolic_descartes_residual(alphas) -> float:
    a = np.asarray(alphas, dtype=float)
    return hyperbolic_mauldon_residual(1.0 / np.tanh(a))


def printed_mauldon_residual(curvatures, constant: float) -> float:
    """The relation with a linear left-hand side, ``sum k - (sum k)^2/2 - constant``.

    Kept for comparison only; it does not vanish on tangent configurations.
    """
    k = np.asarray(curvatures, dtype=float)
    total = float(k.sum())
    return total - 0.5 * total * total - constant


# Hyperbolic space: hyperboloid y_0^2 = 1 + |y'|^2 and the Poincare ball.

def hyperboloid_to_disk(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    return y[1:] / (1.0 + y[0])


def disk_to_hyperboloid(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    xx = x @ x
    if not xx < 1.0:
        raise GeometryError("point is not inside the unit ball")
    return np.concatenate([[(1.0 + xx) / (1.0 - xx)], 2.0 * x / (1.0 - xx)])


def disk_distance(x, y) -> float:
    """Hyperbolic distance in the Poincare ball."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    num = 2.0 * float((x - y) @ (x - y))
    den = (1.0 - float(x @ x)) * (1.0 - float(y @ y))
    return math.acosh(1.0 + num / den)


@dataclass(frozen=True, eq=False)
class HyperbolicSphere:
    model: OrientedSphere
    radius: float

    @property
    def curvature(self) -> float:
        return 1.0 / math.tanh(self.radius)


def hyperbolic_sphere(s: OrientedSphere) -> HyperbolicSphere:
    """Read a Euclidean sphere inside the unit ball as a hyperbolic sphere."""
    if s.is_plane or s.bend <= 0:
        raise GeometryError("hyperbolic spheres are bounded, positively cooriented circles")
    if np.linalg.norm(s.center) + s.radius >= 1.0:
        raise GeometryError("sphere is not contained in the open unit ball")
    return HyperbolicSphere(s, math.atanh(1.0 / hyperbolic_curvature(s)))


def hyperbolic_sphere_to_disk(center, alpha: float) -> OrientedSphere:
    """Poincare-ball image of the hyperbolic sphere with hyperboloid center and radius."""
    p = np.asarray(center, dtype=float)
    ch, sh = math.cosh(alpha), math.sinh(alpha)
    return OrientedSphere((p[0] + ch) / sh, (p[0] - ch) / sh, p[1:] / sh)


def rotation_taking(a, b) -> np.ndarray:
    """Rotation (det +1) sending unit vector ``a`` to unit vector ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = a.size
    c = float(a @ b)
    if c < -1.0 + 1e-12:
        # Half-turn in a plane containing a.
        helper = np.eye(n)[np.argmin(np.abs(a))]
        u = helper - (helper @ a) * a
        u /= np.linalg.norm(u)
        return np.eye(n) - 2.0 * np.outer(a, a) - 2.0 * np.outer(u, u)
    s = a + b
    return np.eye(n) - np.outer(s, s) / (1.0 + c) + 2.0 * np.outer(b, a)


def cap_limiting_points(a: SphericalCap, c: SphericalCap) -> tuple[np.ndarray, np.ndarray]:
    delta = cap_product(a, c)
    if abs(delta) <= 1.0:
        raise GeometryError("caps intersect or touch")
    root = math.sqrt(delta * delta - 1.0)
    t1 = -delta - math.copysign(root, delta)
    out = []
    for t in (t1, 1.0 / t1):
        v = t * a.lorentz_vector() + c.lorentz_vector()
        u, h = v[:-1], v[-1]
        out.append(math.copysign(1.0, h) * u / np.linalg.norm(u))
    return out[0], out[1]


def rotate_to_concentric(a: SphericalCap, c: SphericalCap) -> np.ndarray:
    """Rotation after which both caps project to concentric spheres.

    One limiting point of the pair is sent to the South Pole; the common
    center of the projections is the image of the other limiting point.
    """
    p, q = cap_limiting_points(a, c)
    south = np.zeros(a.pole.size)
    south[0] = -1.0
    # Prefer the limiting point closer to the South Pole: smaller rotation.
    chosen = p if p @ south >= q @ south else q
    return rotation_taking(chosen, south)


def projected_annulus(a: SphericalCap, c: SphericalCap) -> tuple[np.ndarray, Annulus]:
    """Rotate, project, and sort the two caps into (outer, inner)."""
    rot = rotate_to_concentric(a, c)
    sa, sc = cap_to_plane(a.rotated(rot)), cap_to_plane(c.rotated(rot))
    outer, inner = (sa, sc) if sa.bend < sc.bend else (sc, sa)
    return rot, Annulus(outer, inner)


@dataclass
class SphericalChainReport:
    k: int
    turns: int
    samples: int
    moments: list
    variation: list
    design_route_moments: list


def spherical_chain(a: SphericalCap, c: SphericalCap, k: int, turns: int, t: float):
    """Spherical Steiner chain (as caps, in the original position) at parameter ``t``."""
    rot, ann = projected_annulus(a, c)
    fam = family(ann, k, turns)
    chain = chain_at(fam, t)
    return [plane_to_cap(s).rotated(rot.T) for s in chain.circles]


def spherical_chain_moments(a: SphericalCap, c: SphericalCap, k: int, turns: int = 1,
                            samples: int = 100) -> SphericalChainReport:
    """Moments of lifted chain curvatures ``sum cot(alpha_j)^m`` for ``m = 1..k``."""
    from .designs import roots_of_unity_design, configuration_from_design

    rot, ann = projected_annulus(a, c)
    fam = family(ann, k, turns)
    grid = sample_grid(fam, samples)
    curv = np.array([[spherical_curvature(s) for s in chain_at(fam, t).circles] for t in grid])
    moments, variation = [], []
    for m in range(1, k + 1):
        vals = np.sum(curv ** m, axis=1)
        moments.append(float(vals.mean()))
        variation.append(relative_variation(vals, np.sum(np.abs(curv) ** m, axis=1)))

    # Second route: the normal-form chain is a k-point circle design, mapped
    # by a similarity onto the projected concentric pair.
    center = ann.inner.center
    scale = ann.outer.radius / fam.R_out
    design = roots_of_unity_design(k)
    cfg = configuration_from_design(design, 1.0 / (fam.chain_radius * scale), center,
                                    fam.chain_center_distance * scale)
    lifted = [plane_curvature_to_spherical(s.center, s.bend) for s in cfg.spheres]
    design_route = [float(np.sum(np.power(lifted, m))) for m in range(1, k + 1)]
    return SphericalChainReport(k, turns, samples, moments, variation, design_route)


def lifted_design_moments(cfg, max_order: int) -> list[float]:
    """Average ``cot(alpha)^m`` of a planar sphere configuration lifted to ``S^d``."""
    cot = np.array([plane_curvature_to_spherical(s.center, s.bend) for s in cfg.spheres])
    return [float(np.mean(cot ** m)) for m in range(0, max_order + 1)]


def disk_automorphism(a: complex, theta: float = 0.0):
    """Hyperbolic isometry of the unit disk: inversion in the geodesic orthogonal
    circle through ``a``'s reflection, followed by a rotation."""
    from .core import Similarity, compose, inversion, rotation_2d

    rot = Similarity(rotation=rotation_2d(theta))
    if a == 0:
        return rot
    # circle orthogonal to the unit circle, centered at a/|a|^2, passing through a
    c = a / abs(a) ** 2
    rad = math.sqrt(abs(c) ** 2 - 1.0)
    return compose(rot, inversion((c.real, c.imag), rad))
