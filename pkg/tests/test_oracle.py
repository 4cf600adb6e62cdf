"""The brute-force validators themselves: hand values, determinism, caps."""

import pytest

from gsrepeater import oracle
from gsrepeater.params import ConfigError, RgsGeometry, TreeGeometry


class TestExhaustive:
    def test_lossless(self):
        assert oracle.exhaustive_tree_success(TreeGeometry((2, 3)), 0.0) == 1.0

    def test_total_loss(self):
        assert oracle.exhaustive_tree_success(TreeGeometry((2, 3)), 1.0) == 0.0

    def test_two_photon_chain_by_hand(self):
        # {1,1} at mu = 1/2: of the four survival patterns only (top
        # survives, child survives) decodes, so 1/4
        got = oracle.exhaustive_tree_success(TreeGeometry((1, 1)), 0.5)
        assert got == pytest.approx(0.25, abs=1e-15)

    def test_reference_point(self):
        got = oracle.exhaustive_tree_success(TreeGeometry((2, 3)), 0.1)
        assert got == pytest.approx(0.7215787800000002, abs=1e-14)

    def test_photon_cap(self):
        with pytest.raises(ConfigError):
            oracle.exhaustive_tree_success(TreeGeometry((4, 16, 5)), 0.1)

    def test_per_level_mu(self):
        geo = TreeGeometry((2, 2))
        uniform = oracle.exhaustive_tree_success(geo, 0.2)
        levels = oracle.exhaustive_tree_success(geo, (0.2, 0.2))
        assert levels == pytest.approx(uniform, abs=1e-15)


class TestMcTreeLogicalError:
    def test_no_error_source(self):
        rep = oracle.mc_tree_logical_error(
            TreeGeometry((2, 3)), 0.1, 0.0, trials=20_000, seed=1
        )
        assert rep.estimate == 0.0

    def test_seed_reproducibility(self):
        a = oracle.mc_tree_logical_error(
            TreeGeometry((2, 3)), 0.1, 1e-2, trials=50_000, seed=42
        )
        b = oracle.mc_tree_logical_error(
            TreeGeometry((2, 3)), 0.1, 1e-2, trials=50_000, seed=42
        )
        assert a == b

    def test_seed_sensitivity_within_sigma(self):
        a = oracle.mc_tree_logical_error(
            TreeGeometry((2, 3)), 0.1, 1e-2, trials=200_000, seed=1
        )
        b = oracle.mc_tree_logical_error(
            TreeGeometry((2, 3)), 0.1, 1e-2, trials=200_000, seed=2
        )
        sigma = (a.std_error**2 + b.std_error**2) ** 0.5
        assert abs(a.estimate - b.estimate) <= 4.0 * sigma

    def test_report_metadata(self):
        rep = oracle.mc_tree_logical_error(
            TreeGeometry((2, 3)), 0.1, 1e-2, trials=20_000, seed=3
        )
        assert rep.algorithm == "philox4x64-10"
        assert rep.seed == 3
        assert 0 < rep.trials <= 20_000  # conditioned on decoding success
        assert rep.std_error > 0.0

    def test_trials_validation(self):
        with pytest.raises(ConfigError):
            oracle.mc_tree_logical_error(TreeGeometry((2, 3)), 0.1, 1e-2, trials=0)


class TestMcRgsLink:
    def test_single_coin(self):
        succ, _ = oracle.mc_rgs_link(
            RgsGeometry(2, TreeGeometry((1, 1))), 0.0, 0.0, trials=100_000, seed=2
        )
        assert abs(succ.estimate - 0.5) <= 3.0 * succ.std_error

    def test_no_error_source(self):
        _, infid = oracle.mc_rgs_link(
            RgsGeometry(6, TreeGeometry((2, 3))), 0.05, 0.0, trials=50_000, seed=4
        )
        assert infid.estimate == 0.0

    def test_seed_reproducibility(self):
        a = oracle.mc_rgs_link(
            RgsGeometry(6, TreeGeometry((2, 3))), 0.05, 1e-3, trials=50_000, seed=6
        )
        b = oracle.mc_rgs_link(
            RgsGeometry(6, TreeGeometry((2, 3))), 0.05, 1e-3, trials=50_000, seed=6
        )
        assert a == b


class TestCrossValidation:
    def test_exhaustive_vs_mc(self):
        # the two oracles must agree with each other, not only with the
        # model; the sampler's conditioning count is its success tally
        geo = TreeGeometry((2, 2))
        mu = 0.3
        trials = 400_000
        exact = oracle.exhaustive_tree_success(geo, mu)
        rep = oracle.mc_tree_logical_error(geo, mu, 1e-3, trials=trials, seed=8)
        p_hat = rep.trials / trials
        sigma = (exact * (1.0 - exact) / trials) ** 0.5
        assert abs(p_hat - exact) <= 4.0 * sigma
