"""Points, polygonal chains and proper rigid motions in R^3."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateTriple, IncompatibleTriple

__all__ = [
    "Point3",
    "Chain3D",
    "RigidMotion",
    "dist",
    "apply_motion",
    "motion_from_triples",
    "triangle_area",
    "ORTHONORMAL_TOL",
    "DEGENERATE_AREA_TOL",
]

# Geometric predicates share one absolute tolerance.
ORTHONORMAL_TOL = 1e-9
DEGENERATE_AREA_TOL = 1e-9

Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class Point3:
    """A point in R^3 with finite coordinates."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not isinstance(c, (int, float)) or not math.isfinite(c):
                raise ValueError(f"non-finite coordinate: {c!r}")

    def as_tuple(self) -> Vec3:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Chain3D:
    """An ordered, non-empty sequence of vertices with a text label."""

    id: str
    points: tuple[Point3, ...]

    def __post_init__(self):
        if not isinstance(self.points, tuple):
            object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) == 0:
            raise ValueError("chain must contain at least one vertex")
        for p in self.points:
            if not isinstance(p, Point3):
                raise ValueError(f"chain vertex is not a Point3: {p!r}")

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        """Vertices as an (n, 3) float array."""
        return np.array([p.as_tuple() for p in self.points], dtype=float)


def chain_from_coords(id: str, coords: Iterable[Sequence[float]]) -> Chain3D:
    """Build a Chain3D from an iterable of (x, y, z) coordinate triples."""
    return Chain3D(id, tuple(Point3(float(x), float(y), float(z)) for x, y, z in coords))


@dataclass(frozen=True)
class RigidMotion:
    """A proper rigid motion x -> R x + t.

    rotation is a 3x3 row-major matrix, orthonormal with determinant +1
    (checked at construction within ORTHONORMAL_TOL).
    """

    rotation: tuple[tuple[float, float, float], ...]
    translation: Vec3

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float)
        if r.shape != (3, 3):
            raise ValueError("rotation must be a 3x3 matrix")
        t = np.asarray(self.translation, dtype=float)
        if t.shape != (3,):
            raise ValueError("translation must be a 3-vector")
        if not np.all(np.isfinite(r)) or not np.all(np.isfinite(t)):
            raise ValueError("rigid motion components must be finite")
        if np.max(np.abs(r @ r.T - np.eye(3))) > ORTHONORMAL_TOL:
            raise ValueError("rotation is not orthonormal")
        if abs(np.linalg.det(r) - 1.0) > ORTHONORMAL_TOL:
            raise ValueError("rotation determinant is not +1 (improper motion)")
        # normalize storage to plain nested tuples so instances hash/compare cleanly
        object.__setattr__(self, "rotation", tuple(tuple(float(v) for v in row) for row in r))
        object.__setattr__(self, "translation", tuple(float(v) for v in t))

    @staticmethod
    def identity() -> "RigidMotion":
        return RigidMotion(((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)), (0.0, 0.0, 0.0))

    def matrix(self) -> np.ndarray:
        return np.asarray(self.rotation, dtype=float)

    def offset(self) -> np.ndarray:
        return np.asarray(self.translation, dtype=float)


def dist(p: Point3, q: Point3) -> float:
    """Euclidean distance between two points.

    Exact (no rounding slack) when the difference vector has a single
    nonzero component, which keeps threshold comparisons on axis-aligned
    offsets honest.
    """
    return math.dist(p.as_tuple(), q.as_tuple())


def apply_motion(motion: RigidMotion, chain: Chain3D) -> Chain3D:
    """Return a copy of the chain moved by ``motion`` (same id, same order)."""
    moved = chain.as_array() @ motion.matrix().T + motion.offset()
    return Chain3D(chain.id, tuple(Point3(float(x), float(y), float(z)) for x, y, z in moved))


def triangle_area(a: Point3, b: Point3, c: Point3) -> float:
    """Area of the triangle spanned by three points."""
    u = np.array(b.as_tuple()) - np.array(a.as_tuple())
    v = np.array(c.as_tuple()) - np.array(a.as_tuple())
    return 0.5 * float(np.linalg.norm(np.cross(u, v)))


def motion_from_triples(
    src: Sequence[Point3],
    dst: Sequence[Point3],
    tolerance: float = 1e-6,
) -> RigidMotion:
    """Proper rigid motion that best superposes ``src`` onto ``dst``.

    Uses the SVD solution of the least-squares superposition problem with a
    determinant correction so the result is always a proper rotation.  When
    the two triples are exactly congruent the returned motion maps src onto
    dst to within 1e-9 per vertex.

    Raises DegenerateTriple when src is collinear (triangle area <=
    DEGENERATE_AREA_TOL) and IncompatibleTriple when corresponding pairwise
    distances of src and dst disagree by more than ``tolerance``.
    """
    if len(src) != 3 or len(dst) != 3:
        raise ValueError("motion_from_triples expects exactly three points per side")
    if triangle_area(*src) <= DEGENERATE_AREA_TOL:
        raise DegenerateTriple(f"source triple is collinear: {[p.as_tuple() for p in src]}")
    for i in range(3):
        for j in range(i + 1, 3):
            ds = dist(src[i], src[j])
            dd = dist(dst[i], dst[j])
            if abs(ds - dd) > tolerance:
                raise IncompatibleTriple(
                    f"pairwise distance mismatch at ({i}, {j}): |{ds} - {dd}| > {tolerance}"
                )

    a = np.array([p.as_tuple() for p in src], dtype=float)
    b = np.array([p.as_tuple() for p in dst], dtype=float)
    ca = a.mean(axis=0)
    cb = b.mean(axis=0)
    h = (a - ca).T @ (b - cb)
    u, _, vt = np.linalg.svd(h)
    d = np.sign(np.linalg.det(vt.T @ u.T))
    r = vt.T @ np.diag([1.0, 1.0, d]) @ u.T
    t = cb - r @ ca
    return RigidMotion(tuple(map(tuple, r)), tuple(t))
