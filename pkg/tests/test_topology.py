from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from geometry.lattice import build_lattice, cached_lattice, hex_depth
from geometry.point_process import StudyRegion, nearest_bs
from montecarlo.seeding import rng_for
from netmodel import topology as topology_module
from netmodel.params import LinkMode, Mode, SimParams
from netmodel.topology import Topology, build_topology, co_channel_interferers, place_served_mobile
from netmodel.zones import Zone, classify_zones


def hand_built(params: SimParams, positions, mobiles, serving: int = 0) -> Topology:
    lattice = build_lattice(params.eta, params.rings)
    positions = np.asarray(positions, dtype=float)
    mobiles = np.asarray(mobiles, dtype=float)
    cluster, interior, depth = classify_zones(positions, lattice, params.nu)
    offsets = mobiles - positions
    distance = np.hypot(offsets[:, 0], offsets[:, 1])
    gain = np.ones(len(positions))
    return Topology(
        params=params,
        lattice=lattice,
        positions=positions,
        cluster=cluster,
        interior=interior,
        depth=depth,
        target_mobile=mobiles[serving],
        serving_bs=serving,
        accepted=True,
        mainlobe_gain=gain,
        mobiles=mobiles,
        link_distance=distance,
        tx_power=distance**params.alpha / gain,
    )


class TestNulling:
    def setup_method(self):
        # rho = 10, a single cluster holding all three BSs
        self.params = SimParams(
            lam=1.0,
            eta=1.0 / (200.0 * math.sqrt(3.0)),
            nu=1.0,
            alpha=4.0,
            delta1=1.0,
            delta2=1.0,
            delta=0.1,
            theta=1.0,
            rings=0,
            m_antennas=2,
        )
        self.positions = [[0.0, 0.0], [3.0, 0.0], [-3.0, 0.0]]
        self.mobiles = [[0.1, 0.0], [-2.5, 1.0], [-3.5, 0.0]]

    def test_nearest_mobile_rule_with_two_antennas(self):
        topology = hand_built(self.params, self.positions, self.mobiles)
        interferers = co_channel_interferers(topology, np.random.default_rng(0))
        # bs 1 spends its null on the target, bs 2 on the mobile of bs 1
        assert interferers.pairs() == [(1, 0.0), (2, 0.1)]

    def test_unlimited_antennas_null_every_cluster_member(self):
        params = self.params.model_copy(update={"m_antennas": None})
        topology = hand_built(params, self.positions, self.mobiles)
        interferers = co_channel_interferers(topology, np.random.default_rng(0))
        assert interferers.pairs() == [(1, 0.0), (2, 0.0)]

    def test_enough_antennas_null_every_cluster_member(self):
        params = self.params.model_copy(update={"m_antennas": 3})
        topology = hand_built(params, self.positions, self.mobiles)
        assert [g for _, g in co_channel_interferers(topology, np.random.default_rng(0)).pairs()] == [0.0, 0.0]

    def test_single_antenna_nulls_nothing(self):
        params = self.params.model_copy(update={"m_antennas": 1})
        topology = hand_built(params, self.positions, self.mobiles)
        assert [g for _, g in co_channel_interferers(topology, np.random.default_rng(0)).pairs()] == [0.1, 0.1]


def test_no_other_clusters_means_no_interferers(minimal_params):
    params = minimal_params.model_copy(update={"rings": 0})
    for trial in range(20):
        rng = rng_for(params.seed, 0, trial)
        topology = build_topology(params, Mode.CENTER, rng)
        if topology.accepted:
            assert all(g == 0.0 for _, g in co_channel_interferers(topology, rng).pairs())


@pytest.mark.parametrize("mode", [Mode.CENTER, Mode.TYPICAL])
def test_accepted_topologies_respect_invariants(spread_params, mode):
    params = spread_params.model_copy(update={"delta2": 3.0})
    accepted = 0
    for trial in range(60):
        rng = rng_for(params.seed, 1, trial)
        topology = build_topology(params, mode, rng)
        if not topology.accepted:
            assert topology.reject_reason
            continue
        accepted += 1
        serving, _ = nearest_bs(topology.target_mobile, topology.positions)
        assert serving == topology.serving_bs
        record = topology.record(serving)
        assert record.cluster == 0 and record.zone is Zone.INTERIOR
        assert topology.serving_margin() >= -1e-12
        if mode is Mode.TYPICAL:
            assert hex_depth(topology.target_mobile, (0.0, 0.0), topology.lattice) <= params.interior_apothem + 1e-12
        for rec in topology.records():
            assert params.delta1 <= rec.mainlobe_gain <= params.delta2
            assert rec.tx_power * rec.mainlobe_gain == pytest.approx(rec.link_distance**params.alpha, rel=1e-9)
        assert record.link_distance == pytest.approx(float(np.hypot(*(topology.target_mobile - topology.positions[serving]))))

        interferers = co_channel_interferers(topology, rng)
        assert list(interferers.indices) == sorted(interferers.indices)
        assert serving not in interferers.indices
        for index, gain in interferers.pairs():
            assert topology.interior[index]
            if topology.cluster[index] == 0:
                assert gain == 0.0
            else:
                assert 0.0 < gain <= params.delta
                assert topology.mainlobe_gain[index] / gain >= params.delta1 / params.delta
            if mode is Mode.CENTER and gain > 0:
                distance = float(np.hypot(*topology.positions[index]))
                assert distance >= (2.0 - math.sqrt(params.nu)) * params.rho - 1e-9
    assert accepted > 0


def test_exact_cell_mobiles_are_served_by_their_bs(spread_params):
    params = spread_params.model_copy(update={"link_mode": LinkMode.EXACT_CELL, "lam": 3.0})
    checked = 0
    for trial in range(10):
        topology = build_topology(params, Mode.CENTER, rng_for(params.seed, 2, trial))
        if not topology.accepted:
            continue
        for i in range(topology.n_bs):
            if i == topology.serving_bs:
                continue
            owner, _ = nearest_bs(topology.mobiles[i], topology.positions)
            assert owner == i
            checked += 1
    assert checked > 0


def test_single_bs_cell_covers_the_window(minimal_params):
    params = minimal_params.model_copy(update={"link_mode": LinkMode.EXACT_CELL, "rings": 0})
    topology = hand_built(params, [[0.3, 0.2]], [[0.3, 0.2]])
    region = StudyRegion.full(cached_lattice(params.eta, 0))
    rng = np.random.default_rng(8)
    mobiles = np.array([place_served_mobile(0, topology, params, rng)[0] for _ in range(300)])
    assert region.contains(mobiles).all()
    # cell is the whole window, so mobiles reach well past the initial cap
    reach = np.hypot(mobiles[:, 0] - 0.3, mobiles[:, 1] - 0.2)
    assert reach.max() > 2.0 / math.sqrt(math.pi * params.lam)


def test_missed_batch_grows_the_cap(minimal_params, monkeypatch):
    params = minimal_params.model_copy(update={"link_mode": LinkMode.EXACT_CELL, "rings": 0})
    positions = np.array([[0.0, 0.0], [1.0, 0.0]])
    region = StudyRegion.full(cached_lattice(params.eta, 0))
    radii = []
    draw = topology_module._disk_points

    def first_batch_misses(center, radius, rng, n):
        radii.append(radius)
        if len(radii) == 1:
            return np.full((n, 2), 1e6)
        return draw(center, radius, rng, n)

    monkeypatch.setattr(topology_module, "_disk_points", first_batch_misses)
    point = topology_module._sample_cell_point(
        0, positions, cKDTree(positions), region, params, np.random.default_rng(4)
    )
    assert radii[1] > radii[0]
    owner, _ = nearest_bs(point, positions)
    assert owner == 0
    assert region.contains(point).all()
