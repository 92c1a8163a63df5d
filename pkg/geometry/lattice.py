"""Hexagonal cluster lattice and hexagon geometry.

Cluster regions are the nearest-centre cells of a hexagonal lattice, so a
cluster region is the hexagon C(T, rho) with apothem rho. All membership
questions reduce to the depth function m(p) = max_u <p - T, u> over the six
neighbour directions u: p lies in C(T, a) iff m(p) <= a.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike
from scipy.spatial import cKDTree

from common.errors import ParameterError

NEIGHBOR_ANGLES = np.deg2rad(np.arange(0.0, 360.0, 60.0))
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ParameterError(f"point coordinates must be finite, got ({self.x}, {self.y})")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    @classmethod
    def from_array(cls, xy: ArrayLike) -> Point:
        x, y = np.asarray(xy, dtype=float).reshape(2)
        return cls(float(x), float(y))


def as_xy(p: Point | ArrayLike) -> np.ndarray:
    if isinstance(p, Point):
        return p.as_array()
    return np.asarray(p, dtype=float)


@dataclass(frozen=True, eq=False)
class HexLattice:
    eta: float
    rho: float
    rings: int
    centers: np.ndarray
    neighbor_dirs: np.ndarray
    tree: cKDTree = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.centers.setflags(write=False)
        self.neighbor_dirs.setflags(write=False)
        object.__setattr__(self, "tree", cKDTree(self.centers))

    @property
    def spacing(self) -> float:
        return 2.0 * self.rho

    @property
    def circumradius(self) -> float:
        return 2.0 * self.rho / math.sqrt(3.0)

    @property
    def cluster_area(self) -> float:
        return 2.0 * math.sqrt(3.0) * self.rho**2

    def __len__(self) -> int:
        return len(self.centers)

    def center(self, index: int) -> Point:
        return Point.from_array(self.centers[index])


def apothem_for_density(eta: float) -> float:
    return math.sqrt(1.0 / (2.0 * math.sqrt(3.0) * eta))


def build_lattice(eta: float, rings: int = 0) -> HexLattice:
    if not (math.isfinite(eta) and eta > 0):
        raise ParameterError(f"cluster density eta must be positive, got {eta}")
    if rings < 0:
        raise ParameterError(f"rings must be non-negative, got {rings}")

    rho = apothem_for_density(eta)
    dirs = np.column_stack((np.cos(NEIGHBOR_ANGLES), np.sin(NEIGHBOR_ANGLES)))

    # axial coordinates over the basis (dirs[0], dirs[1]); hex distance is the ring
    entries: list[tuple[int, float, np.ndarray]] = []
    for q in range(-rings, rings + 1):
        for s in range(max(-rings, -q - rings), min(rings, -q + rings) + 1):
            ring = max(abs(q), abs(s), abs(q + s))
            xy = 2.0 * rho * (q * dirs[0] + s * dirs[1])
            angle = math.atan2(xy[1], xy[0]) % (2.0 * math.pi)
            entries.append((ring, round(angle, 9), xy))
    entries.sort(key=lambda entry: (entry[0], entry[1]))
    centers = np.array([xy for _, _, xy in entries], dtype=float)
    return HexLattice(eta=float(eta), rho=rho, rings=rings, centers=centers, neighbor_dirs=dirs)


def nearest_lowest_index(tree: cKDTree, points: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """Nearest neighbour per query row, exact ties resolved to the lowest index."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = tree.n
    if len(pts) == 0:
        return np.empty(0, dtype=np.intp), np.empty(0, dtype=float)
    k = min(3, n)
    dist, idx = tree.query(pts, k=list(range(1, k + 1)))
    tied = dist <= dist[:, :1] * (1.0 + TIE_TOLERANCE) + TIE_TOLERANCE
    ranked = np.where(tied, idx, np.iinfo(np.intp).max)
    col = ranked.argmin(axis=1)
    rows = np.arange(len(pts))
    return idx[rows, col].astype(np.intp), dist[rows, col]


def nearest_center(p: Point | ArrayLike, lattice: HexLattice) -> int:
    idx, _ = nearest_lowest_index(lattice.tree, as_xy(p))
    return int(idx[0])


def nearest_centers(points: ArrayLike, lattice: HexLattice) -> np.ndarray:
    idx, _ = nearest_lowest_index(lattice.tree, points)
    return idx


def hex_depth(p: Point | ArrayLike, center: Point | ArrayLike, lattice: HexLattice) -> float | np.ndarray:
    offset = as_xy(p) - as_xy(center)
    depth = (offset @ lattice.neighbor_dirs.T).max(axis=-1)
    if np.ndim(depth) == 0:
        return float(depth)
    return depth


def rejection_sample_hexagon(
    center: Point | ArrayLike,
    apothem: float,
    lattice: HexLattice,
    rng: np.random.Generator,
    n: int,
) -> tuple[np.ndarray, int]:
    """Return ``n`` points uniform in C(center, apothem) and the number of disk candidates used."""
    if not apothem > 0:
        raise ParameterError(f"hexagon apothem must be positive, got {apothem}")
    origin = as_xy(center)
    radius = 2.0 * apothem / math.sqrt(3.0)
    chunks: list[np.ndarray] = []
    have = 0
    drawn = 0
    while have < n:
        needed = n - have
        batch = int(1.25 * needed) + 8
        r = radius * np.sqrt(rng.random(batch))
        phi = 2.0 * math.pi * rng.random(batch)
        candidates = origin + np.column_stack((r * np.cos(phi), r * np.sin(phi)))
        inside = hex_depth(candidates, origin, lattice) <= apothem
        hits = np.flatnonzero(inside)
        if len(hits) >= needed:
            drawn += int(hits[needed - 1]) + 1
            chunks.append(candidates[hits[:needed]])
            have = n
        else:
            drawn += batch
            chunks.append(candidates[hits])
            have += len(hits)
    points = np.concatenate(chunks) if chunks else np.empty((0, 2))
    return points, drawn


def sample_uniform_hexagon(
    center: Point | ArrayLike,
    apothem: float,
    lattice: HexLattice,
    rng: np.random.Generator,
    size: int | None = None,
) -> Point | np.ndarray:
    points, _ = rejection_sample_hexagon(center, apothem, lattice, rng, 1 if size is None else size)
    if size is None:
        return Point.from_array(points[0])
    return points


@lru_cache(maxsize=64)
def cached_lattice(eta: float, rings: int) -> HexLattice:
    return build_lattice(eta, rings)
