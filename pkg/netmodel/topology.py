"""One network realization around the central cluster.

BSs are a PPP over the lattice window. The target mobile sits at the
central cluster centre (CENTER) or uniform in the central interior hexagon
(TYPICAL) and is served by its nearest BS; the realization counts only when
that BS is a central-cluster interior BS.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from common.errors import DegenerateRealizationError, RealizationRejectedError
from geometry.lattice import HexLattice, Point, cached_lattice, nearest_lowest_index, sample_uniform_hexagon
from geometry.point_process import StudyRegion, nearest_bs, sample_ppp
from netmodel.antennas import draw_mainlobe_gain, rayleigh_link_distance, sidelobe_gain, tx_power
from netmodel.params import LinkMode, Mode, SimParams
from netmodel.zones import Zone, classify_zones

logger = logging.getLogger(__name__)

CELL_BATCH = 32
CELL_RING_POINTS = 64
_RING_ANGLES = np.linspace(0.0, 2.0 * math.pi, CELL_RING_POINTS, endpoint=False)
_UNIT_RING = np.column_stack((np.cos(_RING_ANGLES), np.sin(_RING_ANGLES)))


@dataclass(frozen=True)
class BsRecord:
    position: Point
    cluster: int
    zone: Zone
    mainlobe_gain: float
    mobile: Point
    link_distance: float
    tx_power: float


@dataclass(eq=False)
class Topology:
    params: SimParams
    lattice: HexLattice
    positions: np.ndarray
    cluster: np.ndarray
    interior: np.ndarray
    depth: np.ndarray
    target_mobile: np.ndarray
    serving_bs: int
    accepted: bool
    reject_reason: str | None = None
    mainlobe_gain: np.ndarray = field(default_factory=lambda: np.empty(0))
    mobiles: np.ndarray = field(default_factory=lambda: np.empty((0, 2)))
    link_distance: np.ndarray = field(default_factory=lambda: np.empty(0))
    tx_power: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def n_bs(self) -> int:
        return len(self.positions)

    @property
    def region(self) -> StudyRegion:
        return StudyRegion.full(self.lattice)

    def central_interior(self) -> np.ndarray:
        return np.flatnonzero(self.interior & (self.cluster == 0))

    def serving_margin(self) -> float:
        return self.params.interior_apothem - float(self.depth[self.serving_bs])

    def record(self, index: int) -> BsRecord:
        return BsRecord(
            position=Point.from_array(self.positions[index]),
            cluster=int(self.cluster[index]),
            zone=Zone.INTERIOR if self.interior[index] else Zone.EDGE,
            mainlobe_gain=float(self.mainlobe_gain[index]),
            mobile=Point.from_array(self.mobiles[index]),
            link_distance=float(self.link_distance[index]),
            tx_power=float(self.tx_power[index]),
        )

    def records(self) -> list[BsRecord]:
        return [self.record(i) for i in range(self.n_bs)]


@dataclass(frozen=True, eq=False)
class Interferers:
    indices: np.ndarray
    gains: np.ndarray

    def __len__(self) -> int:
        return len(self.indices)

    def pairs(self) -> list[tuple[int, float]]:
        return [(int(i), float(g)) for i, g in zip(self.indices, self.gains)]


def _disk_points(center: np.ndarray, radius: float, rng: np.random.Generator, n: int) -> np.ndarray:
    r = radius * np.sqrt(rng.random(n))
    phi = 2.0 * math.pi * rng.random(n)
    return center + np.column_stack((r * np.cos(phi), r * np.sin(phi)))


def _owned(index: int, points: np.ndarray, positions_tree: cKDTree, region: StudyRegion) -> np.ndarray:
    owner, _ = nearest_lowest_index(positions_tree, points)
    return (owner == index) & region.contains(points)


def _sample_cell_point(
    index: int,
    positions: np.ndarray,
    positions_tree: cKDTree,
    region: StudyRegion,
    params: SimParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """Uniform point of the Voronoi cell of ``index`` inside ``region``.

    Candidates are drawn from a disk of radius r_cap around the BS. r_cap
    doubles while any of the ring points on its circle is still in the cell, and again
    whenever a whole batch misses the cell. It never exceeds the farthest
    corner of the window, where the disk covers the cell exactly.
    """
    y = positions[index]
    x_lo, x_hi, y_lo, y_hi = region.bounding_box()
    r_max = max(math.hypot(cx - y[0], cy - y[1]) for cx in (x_lo, x_hi) for cy in (y_lo, y_hi))
    r_cap = min(2.0 / math.sqrt(math.pi * params.lam), r_max)
    drawn = 0
    while drawn < params.cell_attempts:
        if r_cap < r_max and _owned(index, y + r_cap * _UNIT_RING, positions_tree, region).any():
            r_cap = min(2.0 * r_cap, r_max)
            logger.debug("bs %d: cell extends past r_cap, growing to %.4g", index, r_cap)
            continue
        batch = min(CELL_BATCH, params.cell_attempts - drawn)
        candidates = _disk_points(y, r_cap, rng, batch)
        drawn += batch
        hits = np.flatnonzero(_owned(index, candidates, positions_tree, region))
        if hits.size:
            return candidates[hits[0]]
        if r_cap < r_max:
            r_cap = min(2.0 * r_cap, r_max)
            logger.debug("bs %d: batch missed the cell, growing r_cap to %.4g", index, r_cap)
    raise RealizationRejectedError(
        f"bs {index}: no point of its cell found within {params.cell_attempts} attempts"
    )


def place_served_mobile(
    bs_index: int,
    topology: Topology,
    params: SimParams,
    rng: np.random.Generator,
) -> tuple[np.ndarray, float]:
    y = topology.positions[bs_index]
    if params.link_mode is LinkMode.RAYLEIGH:
        distance = float(rayleigh_link_distance(params.lam, rng))
        phi = 2.0 * math.pi * rng.random()
        return y + distance * np.array([math.cos(phi), math.sin(phi)]), distance

    mobile = _sample_cell_point(bs_index, topology.positions, cKDTree(topology.positions), topology.region, params, rng)
    return mobile, float(np.hypot(*(mobile - y)))


def place_served_mobiles(topology: Topology, params: SimParams, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Served mobile and link distance for every BS; the serving BS keeps the target mobile."""
    positions = topology.positions
    n = len(positions)
    if params.link_mode is LinkMode.RAYLEIGH:
        distance = rayleigh_link_distance(params.lam, rng, n)
        phi = 2.0 * math.pi * rng.random(n)
        mobiles = positions + distance[:, None] * np.column_stack((np.cos(phi), np.sin(phi)))
    else:
        tree = cKDTree(positions)
        region = topology.region
        mobiles = np.empty_like(positions)
        for i in range(n):
            if i == topology.serving_bs:
                mobiles[i] = topology.target_mobile
                continue
            mobiles[i] = _sample_cell_point(i, positions, tree, region, params, rng)
        offsets = mobiles - positions
        distance = np.hypot(offsets[:, 0], offsets[:, 1])
    mobiles[topology.serving_bs] = topology.target_mobile
    offset = topology.target_mobile - positions[topology.serving_bs]
    distance[topology.serving_bs] = math.hypot(offset[0], offset[1])
    return mobiles, distance


def build_topology(
    params: SimParams,
    mode: Mode,
    rng: np.random.Generator,
    lattice: HexLattice | None = None,
) -> Topology:
    if lattice is None:
        lattice = cached_lattice(params.eta, params.rings)
    positions = sample_ppp(params.lam, StudyRegion.full(lattice), rng)
    if len(positions) == 0:
        raise DegenerateRealizationError("no base station in the window")
    cluster, interior, depth = classify_zones(positions, lattice, params.nu)

    if mode is Mode.CENTER:
        target = np.zeros(2)
    else:
        target = sample_uniform_hexagon(np.zeros(2), params.interior_apothem, lattice, rng, size=1)[0]
    serving, _ = nearest_bs(target, positions)

    topology = Topology(
        params=params,
        lattice=lattice,
        positions=positions,
        cluster=cluster,
        interior=interior,
        depth=depth,
        target_mobile=target,
        serving_bs=serving,
        accepted=bool(cluster[serving] == 0 and interior[serving]),
    )
    if not topology.accepted:
        topology.reject_reason = "serving bs outside the central cluster interior"
        return topology

    topology.mainlobe_gain = np.asarray(draw_mainlobe_gain(params, rng, len(positions)), dtype=float)
    topology.mobiles, topology.link_distance = place_served_mobiles(topology, params, rng)
    topology.tx_power = tx_power(topology.link_distance, params.alpha, topology.mainlobe_gain)
    return topology


def _target_nulled(topology: Topology, co_cluster: np.ndarray, m_antennas: int | None) -> np.ndarray:
    """For each non-serving co-cluster BS, whether its beam nulls the target mobile."""
    others = co_cluster[co_cluster != topology.serving_bs]
    if m_antennas is None or len(co_cluster) - 1 <= m_antennas - 1:
        return np.ones(len(others), dtype=bool)
    budget = m_antennas - 1
    nulled = np.zeros(len(others), dtype=bool)
    if budget == 0:
        return nulled
    for k, j in enumerate(others):
        served = co_cluster[co_cluster != j]
        offsets = topology.mobiles[served] - topology.positions[j]
        dist = np.hypot(offsets[:, 0], offsets[:, 1])
        order = np.lexsort((served, dist))
        nulled[k] = topology.serving_bs in served[order[:budget]]
    return nulled


def co_channel_interferers(topology: Topology, rng: np.random.Generator) -> Interferers:
    params = topology.params
    co_cluster = topology.central_interior()
    others = co_cluster[co_cluster != topology.serving_bs]
    nulled = _target_nulled(topology, co_cluster, params.m_antennas)
    outside = np.flatnonzero(topology.interior & (topology.cluster != 0))

    indices = np.concatenate((others, outside)).astype(np.intp)
    silent = np.concatenate((nulled, np.zeros(len(outside), dtype=bool)))
    order = np.argsort(indices, kind="stable")
    indices, silent = indices[order], silent[order]

    gains = np.zeros(len(indices))
    active = ~silent
    if active.any():
        gains[active] = sidelobe_gain(params, rng, int(active.sum()))
    return Interferers(indices=indices, gains=gains)
