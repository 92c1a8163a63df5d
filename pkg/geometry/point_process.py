from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from common.errors import DegenerateRealizationError, ParameterError
from geometry.lattice import TIE_TOLERANCE, HexLattice, Point, as_xy, nearest_lowest_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StudyRegion:
    """Finite simulation window: a union of cluster regions of ``lattice``."""

    lattice: HexLattice
    members: tuple[int, ...] = field(default=())

    @classmethod
    def full(cls, lattice: HexLattice) -> StudyRegion:
        return cls(lattice=lattice, members=tuple(range(len(lattice))))

    @property
    def area(self) -> float:
        return len(self.members) * self.lattice.cluster_area

    def bounding_box(self) -> tuple[float, float, float, float]:
        pts = self.lattice.centers[list(self.members)]
        pad = self.lattice.circumradius
        return (
            float(pts[:, 0].min() - pad),
            float(pts[:, 0].max() + pad),
            float(pts[:, 1].min() - pad),
            float(pts[:, 1].max() + pad),
        )

    def contains(self, points: ArrayLike) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        if not self.members or len(pts) == 0:
            return np.zeros(len(pts), dtype=bool)
        idx, _ = nearest_lowest_index(self.lattice.tree, pts)
        offsets = pts - self.lattice.centers[idx]
        depth = (offsets @ self.lattice.neighbor_dirs.T).max(axis=1)
        inside = depth <= self.lattice.rho * (1.0 + TIE_TOLERANCE)
        if len(self.members) < len(self.lattice):
            inside &= np.isin(idx, np.asarray(self.members))
        return inside


def sample_ppp(lam: float, region: StudyRegion, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous PPP of intensity ``lam`` on ``region`` as an (n, 2) array."""
    if not lam > 0:
        raise ParameterError(f"point density must be positive, got {lam}")
    if not region.members:
        return np.empty((0, 2))
    xmin, xmax, ymin, ymax = region.bounding_box()
    count = rng.poisson(lam * (xmax - xmin) * (ymax - ymin))
    pts = np.column_stack((rng.uniform(xmin, xmax, count), rng.uniform(ymin, ymax, count)))
    kept = pts[region.contains(pts)]
    logger.debug("ppp: %d candidates, %d kept", count, len(kept))
    return kept


def nearest_bs(u: Point | ArrayLike, bss: ArrayLike) -> tuple[int, float]:
    stations = np.asarray(bss, dtype=float).reshape(-1, 2)
    if len(stations) == 0:
        raise DegenerateRealizationError("no base station in the realization")
    offsets = stations - as_xy(u)
    dist = np.hypot(offsets[:, 0], offsets[:, 1])
    index = int(np.argmin(dist))
    return index, float(dist[index])
