import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiered_deploy.analytic import theorem1_distortion
from tiered_deploy.lloyd import (
    TTL_STEPS,
    LloydConfig,
    Solution,
    otl,
    random_deployment,
    regular_lloyd,
    ttl,
)
from tiered_deploy.partition import best_index_map, fixed_point_residual
from tiered_deploy.spatial import (
    GaussianComponent,
    GaussianMixture,
    GridTable,
    Region,
    Uniform,
    build_grid,
    region_centroid,
)


def non_increasing(values, slack):
    return bool(np.all(np.diff(values) <= slack))


class TestRegularLloyd:
    def test_two_levels_from_skewed_start(self, unit_interval_grid):
        res = regular_lloyd(unit_interval_grid, 2, [0.1, 0.2], LloydConfig(max_iterations=500))
        np.testing.assert_allclose(np.sort(res.points[:, 0]), [0.25, 0.75], atol=1e-3)
        assert res.trace[-1] == pytest.approx(1 / 48, rel=5e-3)
        assert non_increasing(res.trace, 1e-9 * res.trace[0])

    def test_single_point_goes_to_centroid(self, wsn_grid_coarse):
        res = regular_lloyd(wsn_grid_coarse, 1, [[1.0, 1.0]])
        np.testing.assert_allclose(res.points[0], region_centroid(wsn_grid_coarse), rtol=1e-12)
        assert res.trace[1] == res.trace[-1]
        assert res.converged

    def test_four_levels(self, unit_interval_grid):
        init = (np.arange(4) + 0.5) / 4 + np.array([0.03, -0.02, 0.01, -0.04])
        res = regular_lloyd(unit_interval_grid, 4, init, LloydConfig(max_iterations=500))
        assert res.trace[-1] == pytest.approx(1 / 192, rel=5e-3)

    def test_substeps_recorded_and_monotone(self, wsn_grid_coarse, rng):
        res = regular_lloyd(wsn_grid_coarse, 6, rng.uniform(0, 10, (6, 2)),
                            LloydConfig(record_substeps=True))
        values = [res.trace[0]] + [d for _, _, d in res.substeps]
        assert len(res.substeps) == 2 * res.iterations
        assert non_increasing(values, 1e-9 * values[0])


class TestOTL:
    def test_single_bs_reaches_closed_form(self, centered_interval_grid):
        init = np.array([-0.3, -0.2, 0.1, 0.4])
        sol = otl(centered_interval_grid, 4, 1, 1.0, init, [0.2], LloydConfig(max_iterations=500))
        assert sol.report.total == pytest.approx(17 / 384, rel=1e-2)
        assert sol.deployment.bss[0, 0] == pytest.approx(0.0, abs=1e-9)

    def test_beta_zero_keeps_quantizer_points(self, wsn_grid_coarse, rng):
        P, Q = rng.uniform(0, 10, (7, 2)), rng.uniform(0, 10, (2, 2))
        sol = otl(wsn_grid_coarse, 7, 2, 0.0, P, Q)
        q = regular_lloyd(wsn_grid_coarse, 7, P)
        np.testing.assert_array_equal(sol.deployment.aps, q.points)
        np.testing.assert_array_equal(sol.reproduction_points, q.points)

    def test_index_map_from_quantizer_points(self, wsn_grid_coarse, rng):
        P, Q = rng.uniform(0, 10, (9, 2)), rng.uniform(0, 10, (3, 2))
        sol = otl(wsn_grid_coarse, 9, 3, 1.5, P, Q)
        np.testing.assert_array_equal(sol.deployment.index_map,
                                      best_index_map(sol.reproduction_points, sol.deployment.bss))
        assert len(sol.trace) == 2 and sol.trace[-1] == sol.report.total

    def test_requires_n_at_least_m(self, wsn_grid_coarse):
        with pytest.raises(ValueError):
            otl(wsn_grid_coarse, 1, 2, 1.0, [[1, 1]], [[2, 2], [3, 3]])


class TestTTL:
    def test_two_bs_closed_form(self, unit_interval_grid):
        P = np.array([0.1, 0.3, 0.6, 0.8])
        Q = np.array([0.2, 0.7])
        sol = ttl(unit_interval_grid, 4, 2, 1.0, P, Q, LloydConfig(max_iterations=500))
        assert sol.report.total == pytest.approx(5 / 384, rel=1e-2)
        assert sol.report.total == pytest.approx(theorem1_distortion(0, 1, 4, 2, 1.0), rel=1e-2)

    def test_colocated_start_is_monotone(self, wsn_grid_coarse, rng):
        P = rng.uniform(0, 10, (3, 2))
        sol = ttl(wsn_grid_coarse, 3, 3, 1.0, P, P.copy(), LloydConfig(record_substeps=True))
        values = [sol.trace[0]] + [d for _, _, d in sol.substeps]
        assert non_increasing(values, 1e-9 * sol.trace[0])

    def test_trace_shape_and_report(self, wsn_grid_coarse, rng):
        P, Q = rng.uniform(0, 10, (8, 2)), rng.uniform(0, 10, (2, 2))
        sol = ttl(wsn_grid_coarse, 8, 2, 1.0, P, Q, LloydConfig(max_iterations=7, rel_tolerance=0))
        assert sol.iterations == 7 and len(sol.trace) == 8 and len(sol.trace_terms) == 8
        assert sol.trace[-1] == sol.report.total
        for total, (s, a) in zip(sol.trace, sol.trace_terms):
            assert s + a == pytest.approx(total, rel=1e-12)

    def test_stationary_at_convergence(self, wsn_grid_coarse, rng):
        P, Q = rng.uniform(0, 10, (10, 2)), rng.uniform(0, 10, (3, 2))
        sol = ttl(wsn_grid_coarse, 10, 3, 0.8, P, Q, LloydConfig(max_iterations=2000))
        assert sol.converged
        ap, bs = fixed_point_residual(wsn_grid_coarse, sol.deployment, sol.partition, 0.8)
        assert max(ap, bs) <= 2 * wsn_grid_coarse.cell_width

    def test_empty_cell_ap_never_moves(self):
        # Density vanishes on (0.5, 1], so an AP parked there serves no mass.
        values = np.r_[np.ones(500), np.zeros(500)]
        g = build_grid(Region.interval(0, 1), GridTable(values), 1000)
        P = np.array([[0.1], [0.3], [0.95]])
        sol = ttl(g, 3, 1, 1.0, P, [[0.4]], LloydConfig(record_substeps=True))
        assert sol.partition.volumes[2] == 0
        assert sol.deployment.aps[2, 0] == 0.95

    def test_bs_without_aps_never_moves(self, unit_interval_grid):
        sol = ttl(unit_interval_grid, 2, 2, 1.0, [[0.2], [0.4]], [[0.3], [5.0]])
        assert sol.deployment.bss[1, 0] == 5.0
        assert np.all(sol.deployment.index_map == 0)

    def test_label_equivariance(self, wsn_grid_coarse, rng):
        P, Q = rng.uniform(0, 10, (6, 2)), rng.uniform(0, 10, (2, 2))
        perm = rng.permutation(6)
        a = ttl(wsn_grid_coarse, 6, 2, 1.0, P, Q)
        b = ttl(wsn_grid_coarse, 6, 2, 1.0, P[perm], Q)
        np.testing.assert_allclose(b.deployment.aps, a.deployment.aps[perm], rtol=1e-10)
        np.testing.assert_array_equal(b.deployment.index_map, a.deployment.index_map[perm])
        assert b.report.total == pytest.approx(a.report.total, rel=1e-10)

    def test_solution_json_round_trip(self, wsn_grid_coarse, rng):
        P, Q = rng.uniform(0, 10, (5, 2)), rng.uniform(0, 10, (2, 2))
        sol = ttl(wsn_grid_coarse, 5, 2, 1.0, P, Q, LloydConfig(record_substeps=True))
        back = Solution.from_dict(json.loads(json.dumps(sol.to_dict())))
        assert back.to_dict() == sol.to_dict()
        assert back.deployment == sol.deployment and back.partition == sol.partition


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 12), st.integers(1, 4), st.floats(0, 4), st.integers(0, 2 ** 32 - 1))
def test_every_ttl_substep_is_non_increasing(N, M, beta, seed):
    r = np.random.default_rng(seed)
    dens = GaussianMixture(tuple(GaussianComponent(float(r.uniform(0.5, 5)), tuple(r.uniform(0, 10, 2)),
                                                   float(r.uniform(0.05, 1))) for _ in range(3)))
    region = Region.rect(0, 10, 0, 10)
    g = build_grid(region, dens, 24)
    P, Q = random_deployment(region, N, M, r)
    sol = ttl(g, N, M, beta, P, Q, LloydConfig(max_iterations=30, record_substeps=True))
    values = [sol.trace[0]] + [d for _, _, d in sol.substeps]
    assert [s for _, s, _ in sol.substeps[:4]] == list(TTL_STEPS)
    assert non_increasing(values, 1e-9 * sol.trace[0])


class TestRandomDeployment:
    def test_deterministic(self):
        region = Region.rect(0, 10, 0, 10)
        a = random_deployment(region, 20, 4, 123)
        b = random_deployment(region, 20, 4, 123)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)

    def test_inside_region(self):
        region = Region.rect(0, 10, 0, 10)
        P, Q = random_deployment(region, 20, 4, 7)
        assert P.shape == (20, 2) and Q.shape == (4, 2)
        assert region.contains(P).all() and region.contains(Q).all()

    def test_mean_within_clt_bound(self):
        region = Region.rect(0, 10, 0, 10)
        P, _ = random_deployment(region, 10_000, 1, 2024)
        sigma = 10 / np.sqrt(12 * 10_000)
        assert np.all(np.abs(P.mean(axis=0) - 5) <= 3 * sigma)


def test_config_validation():
    with pytest.raises(ValueError):
        LloydConfig(max_iterations=0)
    with pytest.raises(ValueError):
        LloydConfig(rel_tolerance=-1)


def test_uniform_density_lloyd_on_square():
    g = build_grid(Region.rect(0, 1, 0, 1), Uniform(), 32)
    res = regular_lloyd(g, 4, [[0.1, 0.1], [0.2, 0.9], [0.8, 0.3], [0.6, 0.7]],
                        LloydConfig(max_iterations=300))
    # four equal squares of side 1/2: 2 * (1/2)^2 / 12
    assert res.trace[-1] == pytest.approx(1 / 24, rel=2e-2)
