"""Repeater-graph link success and fidelity against the Monte Carlo oracle."""

import pytest
from hypothesis import given, settings, strategies as st

from gsrepeater import oracle, rgs_analytics, tree_analytics
from gsrepeater.params import ConfigError, RgsGeometry, TreeGeometry

# (1 - 1e-4)^34, high-precision power
RGS_F_EX = 0.9966056040206348


def geo(n, b):
    return RgsGeometry(n, TreeGeometry(b))


class TestRgsSuccess:
    def test_lossless_bsm_ceiling(self):
        m = rgs_analytics.rgs_success(geo(6, (2, 3)), 0.0)
        assert m.P_BSM == pytest.approx(0.5)

    def test_minimal_graph(self):
        # one Bell attempt, perfect encoding: the linear-optics coin alone
        m = rgs_analytics.rgs_success(geo(2, (2, 3)), 0.0)
        assert m.P_X == 1.0
        assert m.P_succ == pytest.approx(0.5)

    def test_chain_power_law(self):
        g = geo(6, (2, 3))
        single = rgs_analytics.rgs_success(g, 0.05).P_succ
        chained = rgs_analytics.rgs_success(g, 0.05, m=3).P_succ
        assert chained == pytest.approx(single**4, rel=1e-12)

    def test_against_monte_carlo(self):
        g = geo(6, (2, 3))
        mu = 0.05
        succ, _ = oracle.mc_rgs_link(g, mu, 0.0, trials=200_000, seed=3)
        want = rgs_analytics.rgs_success(g, mu).P_succ
        assert abs(want - succ.estimate) <= 3.0 * succ.std_error

    def test_trivial_encoding_against_monte_carlo(self):
        g = geo(2, (1, 1))
        succ, _ = oracle.mc_rgs_link(g, 0.0, 0.0, trials=100_000, seed=5)
        assert abs(succ.estimate - 0.5) <= 3.0 * succ.std_error

    @given(st.floats(min_value=0.0, max_value=0.5), st.floats(min_value=0.0, max_value=0.5))
    @settings(deadline=None, max_examples=40)
    def test_monotone_in_mu(self, a, b):
        lo, hi = min(a, b), max(a, b)
        g = geo(6, (2, 3))
        assert (
            rgs_analytics.rgs_success(g, hi).P_succ
            <= rgs_analytics.rgs_success(g, lo).P_succ + 1e-12
        )


class TestEncodedErrors:
    def test_no_error_source(self):
        assert rgs_analytics.encoded_errors(TreeGeometry((2, 3)), 0.1, 0.0) == (0.0, 0.0)

    def test_chain_closed_form(self):
        # {1,1}: Z pattern is a single blended top bit, X adds its child
        eps = 1e-3
        e_x, e_z = rgs_analytics.encoded_errors(TreeGeometry((1, 1)), 0.0, eps)
        blend = tree_analytics.blended_z_error(TreeGeometry((1, 1)), 0.0, eps)
        assert e_z == pytest.approx(tree_analytics.parity_error([blend[1]]), rel=1e-9)
        assert e_x == pytest.approx(
            tree_analytics.parity_error([eps, blend[2]]), rel=1e-9
        )

    def test_depth_one_rejected(self):
        with pytest.raises(ConfigError):
            rgs_analytics.encoded_errors(TreeGeometry((3,)), 0.1, 1e-3)

    def test_against_monte_carlo(self):
        g = geo(6, (2, 3))
        mu, eps = 0.05, 1e-3
        _, infid = oracle.mc_rgs_link(g, mu, eps, trials=400_000, seed=9)
        metrics = rgs_analytics.link_metrics(g, mu, eps)
        model_infidelity = 1.0 - metrics.F
        tol = max(0.25 * infid.estimate, 3.0 * infid.std_error)
        assert model_infidelity == pytest.approx(infid.estimate, abs=tol)


class TestRgsFidelity:
    def test_clean(self):
        m = rgs_analytics.RgsLinkMetrics(
            P_BSM=0.5, P_X=1.0, P_Z=1.0, P_succ=0.5, e_X=0.0, e_Z=0.0
        )
        assert rgs_analytics.rgs_fidelity(m, 6, 0, 0.0) == 1.0

    def test_frozen_product(self):
        m = rgs_analytics.RgsLinkMetrics(
            P_BSM=0.5, P_X=1.0, P_Z=1.0, P_succ=0.5, e_X=1e-4, e_Z=1e-4
        )
        got = rgs_analytics.rgs_fidelity(m, 32, 0, 1e-4)
        assert got == pytest.approx(RGS_F_EX, rel=1e-12)

    def test_certain_error_kills_fidelity(self):
        m = rgs_analytics.RgsLinkMetrics(
            P_BSM=0.5, P_X=1.0, P_Z=1.0, P_succ=0.5, e_X=1.0, e_Z=0.0
        )
        assert rgs_analytics.rgs_fidelity(m, 6, 0, 0.0) == 0.0

    def test_missing_errors_rejected(self):
        m = rgs_analytics.RgsLinkMetrics(P_BSM=0.5, P_X=1.0, P_Z=1.0, P_succ=0.5)
        with pytest.raises(ConfigError):
            rgs_analytics.rgs_fidelity(m, 6, 0, 0.0)

    def test_monotone_in_errors_and_m(self):
        def fid(e, m):
            metrics = rgs_analytics.RgsLinkMetrics(
                P_BSM=0.5, P_X=1.0, P_Z=1.0, P_succ=0.5, e_X=e, e_Z=e
            )
            return rgs_analytics.rgs_fidelity(metrics, 8, m, 1e-4)

        assert fid(1e-3, 0) <= fid(1e-4, 0)
        assert fid(1e-4, 5) <= fid(1e-4, 0)


class TestLinkMetrics:
    def test_matches_components(self):
        g = geo(6, (2, 3))
        full = rgs_analytics.link_metrics(g, 0.05, 1e-3, m=2)
        parts = rgs_analytics.rgs_success(g, 0.05, m=2)
        assert full.P_succ == pytest.approx(parts.P_succ, rel=1e-12)
        e_x, e_z = rgs_analytics.encoded_errors(TreeGeometry((2, 3)), 0.05, 1e-3)
        assert full.e_X == pytest.approx(e_x, rel=1e-12)
        assert full.e_Z == pytest.approx(e_z, rel=1e-12)

    def test_arm_override(self):
        g = geo(6, (2, 3))
        clean_arms = rgs_analytics.link_metrics(g, 0.3, 0.0, mu_arm=0.0)
        lossy_arms = rgs_analytics.link_metrics(g, 0.3, 0.0, mu_arm=0.3)
        assert clean_arms.P_succ > lossy_arms.P_succ
        assert clean_arms.P_BSM == pytest.approx(0.5)
