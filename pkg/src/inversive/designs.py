"""Spherical designs and conformal moment averages of sphere configurations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import (
    GeometryError,
    OrientedSphere,
    Similarity,
    SimilarityThenUnitInversion,
    random_rotation,
    sphere_from_center_radius,
)

PHI = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True, eq=False)
class SphericalDesign:
    name: str
    dim: int
    strength: int
    points: np.ndarray
    # degree at which the strength check is expected to fail
    control_degree: int

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.dim + 1:
            raise GeometryError("points must be an (n, d+1) array")
        if not np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12, rtol=0):
            raise GeometryError("design points must be unit vectors")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def rotated(self, rotation) -> "SphericalDesign":
        return SphericalDesign(self.name, self.dim, self.strength,
                               self.points @ np.asarray(rotation).T, self.control_degree)

    def to_dict(self) -> dict:
        return {"name": self.name, "dim": self.dim, "strength": self.strength,
                "control_degree": self.control_degree, "points": self.points.tolist()}


def _normalize(points) -> np.ndarray:
    pts = np.array(points, dtype=float)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _cyclic(vectors) -> list:
    out = []
    for v in vectors:
        for shift in range(3):
            out.append(tuple(v[(i - shift) % 3] for i in range(3)))
    return out


def _sign_patterns(base) -> list:
    nz = [i for i, v in enumerate(base) if v != 0]
    out = []
    for signs in itertools.product((1, -1), repeat=len(nz)):
        v = list(base)
        for i, s in zip(nz, signs):
            v[i] = s * v[i]
        out.append(tuple(v))
    return out


def roots_of_unity_design(n: int) -> SphericalDesign:
    """``n`` evenly spaced points on the circle; strength ``n - 1``."""
    if n < 2:
        raise GeometryError("need at least two points")
    theta = 2.0 * np.pi * np.arange(n) / n
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    return SphericalDesign(f"roots{n}", 1, n - 1, pts, n)


def _tetrahedron():
    pts = [v for v in itertools.product((1, -1), repeat=3) if v[0] * v[1] * v[2] > 0]
    return SphericalDesign("tetrahedron", 2, 2, _normalize(pts), 3)


def _cube():
    pts = list(itertools.product((1, -1), repeat=3))
    return SphericalDesign("cube", 2, 3, _normalize(pts), 4)


def _octahedron():
    pts = [s * e for e in np.eye(3) for s in (1, -1)]
    return SphericalDesign("octahedron", 2, 3, _normalize(pts), 4)


def _icosahedron():
    pts = []
    for v in _cyclic([(0.0, 1.0, PHI)]):
        pts.extend(_sign_patterns(v))
    return SphericalDesign("icosahedron", 2, 5, _normalize(pts), 6)


def _dodecahedron():
    pts = list(itertools.product((1, -1), repeat=3))
    for v in _cyclic([(0.0, 1.0 / PHI, PHI)]):
        pts.extend(_sign_patterns(v))
    return SphericalDesign("dodecahedron", 2, 5, _normalize(pts), 6)


def _cell24():
    pts = set()
    for i, j in itertools.combinations(range(4), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0, 0, 0, 0]
            v[i], v[j] = si, sj
            pts.add(tuple(v))
    return SphericalDesign("cell24", 3, 5, _normalize(sorted(pts)), 6)


_CATALOG = {
    "tetrahedron": _tetrahedron,
    "cube": _cube,
    "octahedron": _octahedron,
    "dodecahedron": _dodecahedron,
    "icosahedron": _icosahedron,
    "cell24": _cell24,
}

POLYTOPES = tuple(_CATALOG)


def polytope_design(name: str) -> SphericalDesign:
    try:
        return _CATALOG[name]()
    except KeyError:
        raise GeometryError(f"unknown design {name!r}; choose from {', '.join(POLYTOPES)}") from None


def get_design(name: str) -> SphericalDesign:
    """Catalog lookup that also accepts ``rootsN``."""
    if name.startswith("roots"):
        return roots_of_unity_design(int(name[len("roots"):]))
    return polytope_design(name)


def catalog() -> list[SphericalDesign]:
    return [roots_of_unity_design(n) for n in (2, 3, 4, 6, 12)] + [
        polytope_design(name) for name in POLYTOPES]


def _double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


@lru_cache(maxsize=None)
def sphere_average_monomial(exponents: tuple) -> Fraction:
    """Exact average of ``prod x_i^{a_i}`` over the unit sphere in R^len(exponents).

    Zero when any exponent is odd; otherwise
    ``prod (a_i - 1)!! / (N (N + 2) ... (N + |a| - 2))``.
    """
    exponents = tuple(int(a) for a in exponents)
    if any(a < 0 for a in exponents):
        raise ValueError("exponents must be nonnegative")
    if any(a % 2 for a in exponents):
        return Fraction(0)
    dim = len(exponents)
    half = sum(exponents) // 2
    num = math.prod(_double_factorial(a - 1) for a in exponents)
    den = math.prod(dim + 2 * j for j in range(half))
    return Fraction(num, den)


def monomials(nvars: int, degree: int):
    """All exponent tuples of total degree exactly ``degree``."""
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        exps = [0] * nvars
        for i in combo:
            exps[i] += 1
        yield tuple(exps)


def monomials_upto(nvars: int, degree: int):
    for deg in range(degree + 1):
        yield from monomials(nvars, deg)


def _check_unit(points: np.ndarray, tol: float = 1e-9):
    norms = np.linalg.norm(points, axis=1)
    if not np.allclose(norms, 1.0, atol=tol, rtol=0):
        raise GeometryError("design points must lie on the unit sphere")


def degree_deviations(points, max_degree: int) -> list[float]:
    """Largest monomial-average deviation for each degree ``0..max_degree``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    _check_unit(pts)
    out = []
    for deg in range(max_degree + 1):
        worst = 0.0
        for exps in monomials(pts.shape[1], deg):
            avg = float(np.mean(np.prod(pts ** np.array(exps), axis=1)))
            worst = max(worst, abs(avg - float(sphere_average_monomial(exps))))
        out.append(worst)
    return out


@dataclass
class StrengthCheck:
    passed: bool
    max_deviation: float
    per_degree: list

    def __bool__(self):
        return self.passed


def design_strength_check(points, M: int, tol: float = 1e-9) -> StrengthCheck:
    per_degree = degree_deviations(points, M)
    worst = max(per_degree)
    return StrengthCheck(worst <= tol, worst, per_degree)


def failure_degree(points, limit: int = 20, tol: float = 1e-9) -> int | None:
    """Smallest degree whose monomial averages disagree with the sphere."""
    devs = degree_deviations(points, limit)
    for deg, dev in enumerate(devs):
        if dev > tol:
            return deg
    return None


class Polynomial:
    """Sparse polynomial: exponent tuple -> coefficient."""

    def __init__(self, terms: dict):
        self.terms = {tuple(int(e) for e in k): float(v) for k, v in terms.items() if v != 0}
        nvars = {len(k) for k in self.terms}
        if len(nvars) > 1:
            raise ValueError("all exponent tuples must have the same length")
        self.nvars = nvars.pop() if nvars else 0

    @classmethod
    def monomial(cls, exponents, coeff: float = 1.0) -> "Polynomial":
        return cls({tuple(exponents): coeff})

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(x.shape[0])
        for exps, coeff in self.terms.items():
            out += coeff * np.prod(x ** np.array(exps), axis=1)
        return out

    def abs_terms(self, x) -> np.ndarray:
        """Sum of absolute term values; a natural scale for cancellation."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(x.shape[0])
        for exps, coeff in self.terms.items():
            out += abs(coeff) * np.abs(np.prod(x ** np.array(exps), axis=1))
        return out

    def __repr__(self):
        return f"Polynomial({self.terms})"


@dataclass(frozen=True, eq=False)
class SphereConfiguration:
    spheres: tuple[OrientedSphere, ...]
    source_design: SphericalDesign
    common_bend: float
    center: np.ndarray
    scale: float

    @property
    def size(self) -> int:
        return len(self.spheres)


def configuration_from_design(design: SphericalDesign, bend: float, center=None,
                              scale: float = 1.0) -> SphereConfiguration:
    """Congruent spheres of the given bend centered at ``center + scale * v_i``."""
    if not bend > 0:
        raise GeometryError("common bend must be positive")
    if not scale > 0:
        raise GeometryError("scale must be positive")
    a = np.zeros(design.dim + 1) if center is None else np.asarray(center, dtype=float)
    spheres = tuple(sphere_from_center_radius(a + scale * v, 1.0 / bend) for v in design.points)
    return SphereConfiguration(spheres, design, float(bend), a, float(scale))


def touching_bend(n: int, scale: float = 1.0) -> float:
    """Bend at which ``n`` congruent circles on a circle of radius ``scale`` touch."""
    return 1.0 / (scale * math.sin(math.pi / n))


def _images(cfg: SphereConfiguration, conformal_map) -> list[OrientedSphere]:
    out = []
    for i, s in enumerate(cfg.spheres):
        img = conformal_map.apply_sphere(s)
        if img.is_plane or abs(img.bend) < 1e-12:
            raise GeometryError(f"image of sphere {i} is a hyperplane")
        out.append(img)
    return out


def bend_centers(cfg: SphereConfiguration, conformal_map) -> tuple[np.ndarray, np.ndarray]:
    imgs = _images(cfg, conformal_map)
    return (np.array([s.bend for s in imgs]), np.array([s.bend_center for s in imgs]))


def conformal_moment_average(cfg: SphereConfiguration, conformal_map, F: Polynomial,
                             check_degree: bool = True, shift=None) -> float:
    """Average of ``F(b_i x_i)`` over the image configuration.

    ``shift`` translates the image configuration before evaluation.
    """
    if check_degree and F.degree > cfg.source_design.strength:
        raise GeometryError(
            f"polynomial degree {F.degree} exceeds design strength {cfg.source_design.strength}")
    bends, bx = bend_centers(cfg, conformal_map)
    if shift is not None:
        bx = bx + bends[:, None] * np.asarray(shift, dtype=float)
    return float(np.mean(F(bx)))


def conformal_moment_scale(cfg: SphereConfiguration, conformal_map, F: Polynomial) -> float:
    bends, bx = bend_centers(cfg, conformal_map)
    return float(np.mean(F.abs_terms(bx)))


def curvature_moment_average(cfg: SphereConfiguration, conformal_map, m: int,
                             check_degree: bool = True) -> float:
    if check_degree and m > cfg.source_design.strength:
        raise GeometryError(f"moment order {m} exceeds design strength")
    bends, _ = bend_centers(cfg, conformal_map)
    return float(np.mean(bends ** m))


def inversion_offset(cfg: SphereConfiguration, c) -> np.ndarray:
    """``|x_i - C|^2 - 1/b^2 - 1`` for every sphere; affine in the design points."""
    c = np.asarray(c, dtype=float)
    centers = np.array([s.center for s in cfg.spheres])
    return np.sum((centers - c) ** 2, axis=1) - 1.0 / cfg.common_bend ** 2 - 1.0


def random_inversion(dim: int, rng: np.random.Generator):
    """Similarity followed by a unit inversion centered near the configuration."""
    inner = Similarity(scale=float(np.exp(rng.uniform(-0.5, 0.5))),
                       rotation=random_rotation(dim, rng),
                       translation=rng.uniform(-0.5, 0.5, size=dim))
    return SimilarityThenUnitInversion(rng.uniform(-2.0, 2.0, size=dim), inner)
