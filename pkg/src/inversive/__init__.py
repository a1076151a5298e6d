"""Inversive geometry of circle packings: Descartes quadruples, Steiner chains,
spherical designs, Apollonian gaskets and their spherical/hyperbolic analogs."""

from .core import (
    DEFAULT_TOL,
    GeometryError,
    OrientedSphere,
    Similarity,
    SimilarityThenUnitInversion,
    apply_conformal,
    compose,
    inner_product,
    invert_sphere,
    sphere_from_center_radius,
    tangent,
)

__version__ = "0.1.0"
