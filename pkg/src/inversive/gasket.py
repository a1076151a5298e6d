"""Apollonian gaskets by exact Soddy reflection.

Each node is a Descartes quadruple.  Reflecting slot ``i`` replaces the
full inversive coordinate vector ``s_i`` by ``2(s_j + s_k + s_l) - s_i``;
on bends this is the Vieta relation and on bend-centers its complex
analog.  Coordinates are carried as :class:`fractions.Fraction`, so bends
stay exact and geometry never accumulates rounding beyond the root's.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import GeometryError, OrientedSphere, plane_from_normal_offset, sphere_from_center_radius
from .descartes import construct_quadruple, descartes_residual, soddy_solutions, swap


class GasketError(GeometryError):
    pass


_ExactVec = tuple  # (bend, cobend, w_x, w_y) as Fractions


def _exact(s: OrientedSphere) -> _ExactVec:
    return tuple(Fraction(float(v)) for v in s.as_vector())


def _to_sphere(v: _ExactVec) -> OrientedSphere:
    return OrientedSphere.from_vector([float(x) for x in v])


def _reflect(node_vecs, index):
    others = [node_vecs[i] for i in range(4) if i != index]
    return tuple(2 * (a + b + c) - d for a, b, c, d in zip(*others, node_vecs[index]))


@dataclass(frozen=True, eq=False)
class GasketNode:
    bends: tuple
    exact: tuple
    depth: int
    parent_swap: int | None

    @property
    def geometry(self) -> tuple[OrientedSphere, ...]:
        return tuple(_to_sphere(v) for v in self.exact)

    def residual(self):
        return descartes_residual(*self.bends)


def standard_root() -> tuple[tuple, tuple[OrientedSphere, ...]]:
    """The (-1, 2, 2, 3) configuration with exact rational coordinates."""
    bends = (-1, 2, 2, 3)
    circles = (
        OrientedSphere(-1, 1, [0, 0]),
        OrientedSphere(2, 0, [1, 0]),
        OrientedSphere(2, 0, [-1, 0]),
        OrientedSphere(3, 1, [0, 2]),
    )
    return bends, circles


def strip_root(b: int = 1) -> tuple[tuple, tuple[OrientedSphere, ...]]:
    """Two parallel lines and two circles of bend ``b`` between them."""
    r = 1.0 / b
    circles = (
        plane_from_normal_offset((0.0, 1.0), r),
        plane_from_normal_offset((0.0, -1.0), r),
        sphere_from_center_radius((0.0, 0.0), r),
        sphere_from_center_radius((2.0 * r, 0.0), r),
    )
    return (0, 0, b, b), circles


def root_geometry(bends) -> tuple[OrientedSphere, ...]:
    """Planar circles realizing an exact Descartes quadruple, in the given order."""
    bends = tuple(bends)
    if descartes_residual(*bends) != 0:
        raise GasketError(f"root {bends} is not a Descartes quadruple")
    if sorted(bends) == [-1, 2, 2, 3]:
        std_bends, std = standard_root()
        pool = list(zip(std_bends, std))
    elif sorted(bends)[:2] == [0, 0]:
        b = sorted(bends)[2]
        sb, circles = strip_root(b)
        pool = list(zip(sb, circles))
    else:
        order = sorted(range(4), key=lambda i: bends[i])
        fourth, rest = order[0], order[1:]
        b1, b2, b3 = (float(bends[i]) for i in rest)
        q = construct_quadruple(b1, b2, b3)
        big, small = soddy_solutions(b1, b2, b3)
        if abs(float(bends[fourth]) - small) > 1e-9 * max(1.0, abs(small)):
            q = swap(q, 0)
        pool = [(bends[fourth], q.circles[0])] + [(bends[i], c) for i, c in zip(rest, q.circles[1:])]
    out = []
    for b in bends:
        for j, (pb, c) in enumerate(pool):
            if pb == b:
                out.append(c)
                pool.pop(j)
                break
    return tuple(out)


def parse_bends(values) -> tuple:
    out = []
    for v in values:
        f = Fraction(v)
        out.append(int(f) if f.denominator == 1 else f)
    return tuple(out)


def dedupe_key(s: OrientedSphere, exact_bend=None, grid: float = 1e-7):
    bend = exact_bend if exact_bend is not None else s.bend
    w = tuple(int(round(v / grid)) for v in s.bend_center)
    if s.is_plane:
        return (bend, w, int(round(s.cobend / grid)))
    return (bend, w)


@dataclass
class Gasket:
    root: GasketNode
    circles: list  # (exact bend, OrientedSphere, depth) in canonical order
    nodes: int
    max_depth_reached: int

    @property
    def bends(self) -> list:
        return [b for b, _, _ in self.circles]


def generate(root_bends, max_depth: int = 64, max_bend=1000, geometry=None,
             keep_nodes: bool = False):
    """Breadth-first Apollonian enumeration of all circles with ``|bend| <= max_bend``.

    Returns a :class:`Gasket`; with ``keep_nodes`` also the list of visited
    :class:`GasketNode`.
    """
    bends = parse_bends(root_bends)
    if descartes_residual(*bends) != 0:
        raise GasketError(f"root {bends} has nonzero Descartes residual")
    geometry = root_geometry(bends) if geometry is None else tuple(geometry)
    vecs = tuple(_exact(s) for s in geometry)
    for b, v in zip(bends, vecs):
        if Fraction(b) != v[0]:
            raise GasketError("root geometry bends do not match the exact bends")
    # Exact bends drive the recursion; geometry bends are replaced by them.
    vecs = tuple((Fraction(b),) + v[1:] for b, v in zip(bends, vecs))
    root = GasketNode(bends, vecs, 0, None)

    seen = {}

    def emit(b, vec, depth):
        s = _to_sphere(vec)
        key = dedupe_key(s, b)
        if key not in seen:
            seen[key] = (b, s, depth)

    for b, v in zip(bends, vecs):
        emit(b, v, 0)
    queue = deque([root])
    visited = [root] if keep_nodes else None
    count = 1
    deepest = 0
    while queue:
        node = queue.popleft()
        if node.depth >= max_depth:
            continue
        for i in range(4):
            if i == node.parent_swap:
                continue
            others = [node.bends[j] for j in range(4) if j != i]
            nb = 2 * sum(others) - node.bends[i]
            if abs(nb) > max_bend:
                continue
            nvecs = list(node.exact)
            nvecs[i] = _reflect(node.exact, i)
            nbends = list(node.bends)
            nbends[i] = nb
            child = GasketNode(tuple(nbends), tuple(nvecs), node.depth + 1, i)
            emit(nb, nvecs[i], child.depth)
            queue.append(child)
            count += 1
            deepest = max(deepest, child.depth)
            if keep_nodes:
                visited.append(child)
    circles = sorted(seen.values(), key=lambda t: (t[0], dedupe_key(t[1], t[0])))
    g = Gasket(root, circles, count, deepest)
    return (g, visited) if keep_nodes else g


def enumerate_bends(root_bends, max_bend, max_depth: int = 64) -> list:
    """Bends-only integer recursion: the root's four bends plus one per tree node."""
    bends = parse_bends(root_bends)
    out = list(bends)
    stack = [(bends, None, 0)]
    while stack:
        q, parent, depth = stack.pop()
        if depth >= max_depth:
            continue
        for i in range(4):
            if i == parent:
                continue
            nb = 2 * (sum(q) - q[i]) - q[i]
            if abs(nb) > max_bend:
                continue
            out.append(nb)
            nq = q[:i] + (nb,) + q[i + 1:]
            stack.append((nq, i, depth + 1))
    return sorted(out)


def to_json(g: Gasket) -> list[dict]:
    out = []
    for b, s, depth in g.circles:
        entry = {"bend": int(b) if isinstance(b, int) else str(b), "depth": depth}
        if s.is_plane:
            entry["center"] = None
            entry["normal"] = [float(v) for v in s.normal]
            entry["offset"] = s.offset
        else:
            entry["center"] = [float(v) for v in s.center]
        out.append(entry)
    return out


def bounding_circle(g: Gasket) -> OrientedSphere | None:
    negatives = [s for b, s, _ in g.circles if b < 0]
    return negatives[0] if negatives else None


def contained_in(outer: OrientedSphere, s: OrientedSphere, tol: float = 1e-9) -> bool:
    if s is outer or s.is_plane:
        return False
    gap = outer.radius - (np.linalg.norm(s.center - outer.center) + s.radius)
    return gap >= -tol * outer.radius
