from __future__ import annotations

import math
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike

from common.errors import ParameterError
from geometry.lattice import TIE_TOLERANCE, HexLattice, Point, as_xy, nearest_lowest_index


class Zone(str, Enum):
    INTERIOR = "interior"
    EDGE = "edge"


def _check_nu(nu: float) -> None:
    if not 0 < nu <= 1:
        raise ParameterError(f"interior fraction nu must lie in (0, 1], got {nu}")


def classify_zones(positions: ArrayLike, lattice: HexLattice, nu: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cluster index, interior mask and hexagon depth for every position."""
    _check_nu(nu)
    pts = np.asarray(positions, dtype=float).reshape(-1, 2)
    cluster, _ = nearest_lowest_index(lattice.tree, pts)
    offsets = pts - lattice.centers[cluster]
    depth = (offsets @ lattice.neighbor_dirs.T).max(axis=1) if len(pts) else np.empty(0)
    bound = math.sqrt(nu) * lattice.rho
    interior = depth <= bound * (1.0 + TIE_TOLERANCE)
    return cluster, interior, depth


def classify_zone(bs_position: Point | ArrayLike, lattice: HexLattice, nu: float) -> Zone:
    _, interior, _ = classify_zones(as_xy(bs_position), lattice, nu)
    return Zone.INTERIOR if interior[0] else Zone.EDGE
