"""Cooriented spheres in R^d and the conformal maps acting on them.

A sphere is stored through its inversive coordinates ``(bend, cobend,
bend_center)``.  The sphere is the zero set of

    Q(y) = bend * |y|^2 - 2 * bend_center . y + cobend

and its coorientation is the region ``Q < 0``.  For a genuine sphere with
center ``x`` and radius ``r`` this gives ``bend = +-1/r``, ``bend_center =
bend * x`` and ``cobend = bend * |x|^2 - 1/bend``.  Hyperplanes have
``bend == 0``; then ``bend_center`` is the unit normal pointing into the
cooriented side and the hyperplane is ``{y : n.y = cobend / 2}``.

Every representation satisfies ``|bend_center|^2 - bend * cobend == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9


class GeometryError(ValueError):
    """Raised for geometrically impossible or degenerate input."""


def _as_vector(values) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.size == 0:
        raise GeometryError("points need at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise GeometryError(f"non-finite coordinates: {arr}")
    return arr


@dataclass(frozen=True, eq=False)
class OrientedSphere:
    bend: float
    cobend: float
    bend_center: np.ndarray

    def __post_init__(self):
        w = _as_vector(self.bend_center)
        w.setflags(write=False)
        object.__setattr__(self, "bend_center", w)
        object.__setattr__(self, "bend", float(self.bend))
        object.__setattr__(self, "cobend", float(self.cobend))

    @property
    def dim(self) -> int:
        return self.bend_center.size

    @property
    def is_plane(self) -> bool:
        return self.bend == 0.0

    @property
    def center(self) -> np.ndarray:
        if self.is_plane:
            raise GeometryError("a hyperplane has no center")
        return self.bend_center / self.bend

    @property
    def radius(self) -> float:
        if self.is_plane:
            return float("inf")
        return 1.0 / abs(self.bend)

    @property
    def normal(self) -> np.ndarray:
        """Unit normal of a hyperplane, pointing into its cooriented side."""
        if not self.is_plane:
            raise GeometryError("only hyperplanes have a constant normal")
        return self.bend_center

    @property
    def offset(self) -> float:
        if not self.is_plane:
            raise GeometryError("only hyperplanes have an offset")
        return self.cobend / 2.0

    def lorentz_norm(self) -> float:
        w = self.bend_center
        return float(w @ w - self.bend * self.cobend)

    def as_vector(self) -> np.ndarray:
        """Return ``(bend, cobend, *bend_center)`` as one array."""
        return np.concatenate([[self.bend, self.cobend], self.bend_center])

    @classmethod
    def from_vector(cls, vec) -> "OrientedSphere":
        vec = np.asarray(vec, dtype=float)
        return cls(vec[0], vec[1], vec[2:])

    def evaluate(self, y) -> float:
        """Value of the defining quadratic at ``y``; negative on the cooriented side."""
        y = _as_vector(y)
        return float(self.bend * (y @ y) - 2.0 * (self.bend_center @ y) + self.cobend)

    def flipped(self) -> "OrientedSphere":
        """Same point set, opposite coorientation."""
        return OrientedSphere(-self.bend, -self.cobend, -self.bend_center)

    def to_dict(self) -> dict:
        return {
            "bend": self.bend,
            "cobend": self.cobend,
            "bend_center": [float(v) for v in self.bend_center],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "OrientedSphere":
        return cls(data["bend"], data["cobend"], data["bend_center"])

    def isclose(self, other: "OrientedSphere", tol: float = DEFAULT_TOL) -> bool:
        a, b = self.as_vector(), other.as_vector()
        if a.shape != b.shape:
            return False
        scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
        return bool(np.max(np.abs(a - b)) <= tol * scale)

    def __repr__(self):
        if self.is_plane:
            return f"OrientedSphere(plane normal={self.normal.tolist()}, offset={self.offset:.6g})"
        return (f"OrientedSphere(bend={self.bend:.6g}, "
                f"center={self.center.tolist()}, radius={self.radius:.6g})")


def sphere_from_center_radius(center, radius: float, inward: bool = True) -> OrientedSphere:
    """Sphere with given center and radius; ``inward`` selects positive bend."""
    if not radius > 0:
        raise GeometryError(f"radius must be positive, got {radius}")
    x = _as_vector(center)
    b = 1.0 / radius if inward else -1.0 / radius
    return OrientedSphere(b, b * (x @ x) - 1.0 / b, b * x)


def plane_from_normal_offset(normal, offset: float) -> OrientedSphere:
    """Hyperplane ``{y : n.y = offset}`` cooriented toward ``n``."""
    n = _as_vector(normal)
    norm = np.linalg.norm(n)
    if norm == 0:
        raise GeometryError("normal vector must be nonzero")
    return OrientedSphere(0.0, 2.0 * offset / norm, n / norm)


def inner_product(s1: OrientedSphere, s2: OrientedSphere) -> float:
    """Inversive (Lorentz) product; equals 1 for ``s1 == s2``."""
    return float(s1.bend_center @ s2.bend_center
                 - 0.5 * (s1.bend * s2.cobend + s1.cobend * s2.bend))


def inversive_distance(s1: OrientedSphere, s2: OrientedSphere) -> float:
    return abs(inner_product(s1, s2))


def tangent(s1: OrientedSphere, s2: OrientedSphere, tol: float = DEFAULT_TOL) -> bool:
    """True iff the spheres touch with opposite coorientations.

    Opposite-coorientation tangency is exactly ``inner_product == -1``; the
    tolerance is relative to the size of the terms in the product.
    """
    terms = np.abs(np.concatenate([
        s1.bend_center * s2.bend_center,
        [0.5 * s1.bend * s2.cobend, 0.5 * s1.cobend * s2.bend],
    ]))
    scale = max(1.0, float(terms.sum()))
    return abs(inner_product(s1, s2) + 1.0) <= tol * scale


def translate_sphere(s: OrientedSphere, t) -> OrientedSphere:
    t = _as_vector(t)
    w = s.bend_center
    return OrientedSphere(s.bend, s.cobend + 2.0 * (w @ t) + s.bend * (t @ t), w + s.bend * t)


def _invert_at_origin(s: OrientedSphere) -> OrientedSphere:
    return OrientedSphere(s.cobend, s.bend, s.bend_center)


def invert_sphere(s: OrientedSphere, c) -> OrientedSphere:
    """Image of ``s`` under inversion in the unit sphere centered at ``c``.

    Spheres through ``c`` come back as hyperplanes (bend 0).
    """
    c = _as_vector(c)
    out = translate_sphere(_invert_at_origin(translate_sphere(s, -c)), c)
    if abs(out.bend) <= 1e-15 * max(1.0, np.abs(out.as_vector()).max()):
        w = out.bend_center
        n = np.linalg.norm(w)
        out = OrientedSphere(0.0, out.cobend / n, w / n)
    return out


def invert_point(y, c) -> np.ndarray | None:
    """Inversion of a point in the unit sphere at ``c``; ``None`` is infinity."""
    c = _as_vector(c)
    if y is None:
        return c.copy()
    y = _as_vector(y)
    u = y - c
    uu = u @ u
    if uu == 0:
        return None
    return c + u / uu


@dataclass(frozen=True, eq=False)
class Similarity:
    """``y -> scale * rotation @ (P y) + translation`` with ``P`` a reflection of
    the first axis when ``reflect`` is set."""

    scale: float = 1.0
    rotation: np.ndarray | None = None
    translation: np.ndarray | None = None
    reflect: bool = False
    dim: int = field(default=2)

    def __post_init__(self):
        if not self.scale > 0:
            raise GeometryError("similarity scale must be positive")
        if self.rotation is None and self.translation is None:
            d = self.dim
        elif self.rotation is not None:
            d = np.asarray(self.rotation).shape[0]
        else:
            d = _as_vector(self.translation).size
        rot = np.eye(d) if self.rotation is None else np.array(self.rotation, dtype=float)
        if rot.shape != (d, d) or not np.allclose(rot.T @ rot, np.eye(d), atol=1e-9):
            raise GeometryError("rotation must be an orthogonal matrix")
        t = np.zeros(d) if self.translation is None else _as_vector(self.translation)
        if t.size != d:
            raise GeometryError("translation has wrong dimension")
        rot.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "scale", float(self.scale))

    @property
    def linear(self) -> np.ndarray:
        m = self.rotation.copy()
        if self.reflect:
            m[:, 0] *= -1.0
        return self.scale * m

    def apply_point(self, y):
        if y is None:
            return None
        return self.linear @ _as_vector(y) + self.translation

    def apply_sphere(self, s: OrientedSphere) -> OrientedSphere:
        orth = self.linear / self.scale
        rotated = OrientedSphere(s.bend / self.scale, s.cobend * self.scale, orth @ s.bend_center)
        return translate_sphere(rotated, self.translation)

    def inverse(self) -> "Similarity":
        a_inv = np.linalg.inv(self.linear)
        return Similarity.from_affine(a_inv, -a_inv @ self.translation)

    @classmethod
    def from_affine(cls, linear, translation) -> "Similarity":
        linear = np.asarray(linear, dtype=float)
        d = linear.shape[0]
        det = np.linalg.det(linear)
        scale = abs(det) ** (1.0 / d)
        orth = linear / scale
        reflect = bool(det < 0)
        if reflect:
            orth = orth.copy()
            orth[:, 0] *= -1.0
        return cls(scale=scale, rotation=orth, translation=translation, reflect=reflect)


@dataclass(frozen=True, eq=False)
class SimilarityThenUnitInversion:
    """``y -> I_center(inner(y))`` with ``I_center`` the unit inversion."""

    center: np.ndarray
    inner: Similarity

    def __post_init__(self):
        c = _as_vector(self.center)
        if c.size != self.inner.dim:
            raise GeometryError("inversion center and similarity dimensions differ")
        c.setflags(write=False)
        object.__setattr__(self, "center", c)

    @property
    def dim(self) -> int:
        return self.inner.dim

    def apply_point(self, y):
        return invert_point(self.inner.apply_point(y), self.center)

    def apply_sphere(self, s: OrientedSphere) -> OrientedSphere:
        return invert_sphere(self.inner.apply_sphere(s), self.center)

    def inverse(self) -> "ConformalMap":
        return compose(self.inner.inverse(), unit_inversion(self.center))


ConformalMap = Similarity | SimilarityThenUnitInversion


def identity(dim: int = 2) -> Similarity:
    return Similarity(dim=dim)


def unit_inversion(center) -> SimilarityThenUnitInversion:
    c = _as_vector(center)
    return SimilarityThenUnitInversion(c, Similarity(dim=c.size))


def inversion(center, radius: float = 1.0) -> ConformalMap:
    """Inversion in the sphere of the given center and radius.

    Written as ``T_c o D_{radius^2} o T_{-c} o I_c`` and normalized.
    """
    c = _as_vector(center)
    if not radius > 0:
        raise GeometryError("inversion radius must be positive")
    d = c.size
    outer = Similarity(scale=radius ** 2, translation=c - radius ** 2 * c, dim=d)
    return compose(outer, unit_inversion(c))


def _as_steps(m: ConformalMap) -> list:
    if isinstance(m, Similarity):
        return [m]
    return [m.inner, ("inv", m.center)]


def _chain_point(steps, y):
    for step in steps:
        if isinstance(step, Similarity):
            y = step.apply_point(y)
        else:
            y = invert_point(y, step[1])
    return y


def compose(*maps: ConformalMap) -> ConformalMap:
    """``compose(f, g, h) = f o g o h`` normalized to one of the two kinds."""
    if not maps:
        raise GeometryError("compose needs at least one map")
    steps = []
    for m in reversed(maps):
        steps.extend(_as_steps(m))
    d = maps[0].dim
    image_inf = _chain_point(steps, None)

    def affine_part(extra):
        full = steps + extra
        origin = _chain_point(full, np.zeros(d))
        cols = [_chain_point(full, e) - origin for e in np.eye(d)]
        return Similarity.from_affine(np.column_stack(cols), origin)

    if image_inf is None:
        return affine_part([])
    return SimilarityThenUnitInversion(image_inf, affine_part([("inv", image_inf)]))


def inverse(m: ConformalMap) -> ConformalMap:
    return m.inverse()


def apply_conformal(m: ConformalMap, s: OrientedSphere) -> OrientedSphere:
    return m.apply_sphere(s)


def apply_point(m: ConformalMap, y):
    return m.apply_point(y)


def rotation_2d(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def random_rotation(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random orthogonal matrix with determinant +1."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1.0
    return q


def random_conformal(dim: int, rng: np.random.Generator, box: float = 3.0) -> ConformalMap:
    """Random similarity followed by a unit inversion, for property tests."""
    inner = Similarity(
        scale=float(np.exp(rng.uniform(-1.0, 1.0))),
        rotation=random_rotation(dim, rng),
        translation=rng.uniform(-box, box, size=dim),
        reflect=bool(rng.integers(2)),
    )
    return SimilarityThenUnitInversion(rng.uniform(-box, box, size=dim), inner)
