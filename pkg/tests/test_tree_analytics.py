"""Tree loss tolerance and logical-error model against the brute-force oracles."""

import pytest
from hypothesis import given, settings, strategies as st

from gsrepeater import oracle, tree_analytics
from gsrepeater.params import ConfigError, TreeGeometry

# frozen exhaustive-enumeration values (oracle ran first; see test_oracle)
EXH_2_3_MU01 = 0.7215787800000002
EXH_2_3_MU005 = 0.8552213811718747
EXH_2_2_2_MU01 = 0.97482803554062
EXH_1_1_MU05 = 0.25

# 0.999^500, high-precision power
FID_999_500 = 0.606378944861185


class TestIndirectProfile:
    def test_lossless(self):
        prof = tree_analytics.indirect_profile(TreeGeometry((2, 3)), 0.0)
        assert prof[1] == 1.0
        assert prof[2] == 0.0  # boundary: nothing below the bottom level

    def test_bottom_closed_form(self):
        prof = tree_analytics.indirect_profile(TreeGeometry((2, 3)), 0.1)
        assert prof[1] == pytest.approx(1.0 - 0.1**3, abs=1e-15)

    def test_total_loss(self):
        prof = tree_analytics.indirect_profile(TreeGeometry((2, 3)), 1.0)
        assert prof[1] == 0.0

    def test_per_level_matches_uniform(self):
        geo = TreeGeometry((2, 2, 2))
        assert tree_analytics.indirect_profile(geo, (0.1, 0.1, 0.1)).R == pytest.approx(
            tree_analytics.indirect_profile(geo, 0.1).R
        )

    @given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
    def test_monotone_in_mu(self, a, b):
        lo, hi = min(a, b), max(a, b)
        geo = TreeGeometry((2, 3))
        p_lo = tree_analytics.indirect_profile(geo, lo)
        p_hi = tree_analytics.indirect_profile(geo, hi)
        assert p_hi[1] <= p_lo[1] + 1e-12


class TestTreeSuccess:
    def test_lossless(self):
        assert tree_analytics.tree_success(TreeGeometry((2, 3)), 0.0, 5) == 1.0

    def test_total_loss(self):
        assert tree_analytics.tree_success(TreeGeometry((2, 3)), 1.0) == 0.0

    def test_frozen_reference(self):
        got = tree_analytics.tree_success(TreeGeometry((2, 3)), 0.1)
        assert got == pytest.approx(EXH_2_3_MU01, abs=1e-12)

    def test_chain_power_law(self):
        geo = TreeGeometry((2, 3))
        single = tree_analytics.tree_success(geo, 0.1)
        assert tree_analytics.tree_success(geo, 0.1, 4) == pytest.approx(
            single**5, rel=1e-12
        )

    def test_depth_one_rejected(self):
        with pytest.raises(ConfigError):
            tree_analytics.tree_success(TreeGeometry((3,)), 0.1)

    def test_oracle_equivalence_spot(self):
        # the full sweep lives in the acceptance suite; pin three points here
        for b, mu, frozen in [
            ((2, 3), 0.1, EXH_2_3_MU01),
            ((2, 3), 0.05, EXH_2_3_MU005),
            ((2, 2, 2), 0.1, EXH_2_2_2_MU01),
        ]:
            geo = TreeGeometry(b)
            assert oracle.exhaustive_tree_success(geo, mu) == pytest.approx(
                frozen, abs=1e-14
            )
            assert tree_analytics.tree_success(geo, mu) == pytest.approx(
                frozen, abs=1e-12
            )

    @settings(deadline=None, max_examples=30)
    @given(
        st.lists(st.integers(1, 3), min_size=2, max_size=3),
        st.sampled_from([0.0, 0.05, 0.1, 0.3, 0.7, 1.0]),
    )
    def test_oracle_equivalence_random(self, b, mu):
        geo = TreeGeometry(tuple(b))
        if geo.photon_count > 18:
            return
        want = oracle.exhaustive_tree_success(geo, mu)
        got = tree_analytics.tree_success(geo, mu)
        assert got == pytest.approx(want, abs=1e-12)


class TestParityError:
    def test_empty_is_clean(self):
        assert tree_analytics.parity_error([]) == 0.0

    def test_single_bit(self):
        assert tree_analytics.parity_error([0.3]) == pytest.approx(0.3)

    def test_bounded_and_monotone_in_length(self):
        prev = 0.0
        for n in range(1, 8):
            cur = tree_analytics.parity_error([0.1] * n)
            assert prev - 1e-15 <= cur <= 0.5
            prev = cur


class TestIndirectError:
    def test_no_error_source(self):
        e = tree_analytics.indirect_error(TreeGeometry((2, 3)), 0.1, 0.0)
        assert all(x == 0.0 for x in e)

    def test_single_branch_no_vote(self):
        # with b_k = 1 the vote degenerates to the single branch error
        geo = TreeGeometry((1, 1))
        eps = 1e-3
        e = tree_analytics.indirect_error(geo, 0.0, eps)
        # level-1 branch = the lone child's X measurement, no grandchildren
        assert e[1] == pytest.approx(tree_analytics.parity_error([eps]), rel=1e-9)
        # root level adds the level-1 Z outcome to the parity
        want = tree_analytics.parity_error([eps, eps])
        assert e[0] == pytest.approx(want, rel=1e-9)


class TestDecodingError:
    def test_no_error_source(self):
        e_inc, e_dec = tree_analytics.decoding_error(TreeGeometry((2, 3)), 0.1, 0.0)
        assert e_inc == 0.0
        assert e_dec == 0.0

    def test_dead_tree_undefined(self):
        e_inc, e_dec = tree_analytics.decoding_error(TreeGeometry((2, 3)), 1.0, 1e-3)
        assert e_inc == 0.0
        assert e_dec is None

    def test_against_monte_carlo(self):
        # acceptance runs 1e7; a 4e5-sample gate keeps this module fast
        geo = TreeGeometry((2, 3))
        mu, eps = 0.1, 1e-3
        report = oracle.mc_tree_logical_error(geo, mu, eps, trials=400_000, seed=11)
        _, e_dec = tree_analytics.decoding_error(geo, mu, eps)
        tol = max(0.20 * report.estimate, 3.0 * report.std_error)
        assert e_dec == pytest.approx(report.estimate, abs=tol)

    def test_lossless_against_monte_carlo(self):
        geo = TreeGeometry((2, 3))
        report = oracle.mc_tree_logical_error(geo, 0.0, 1e-2, trials=400_000, seed=7)
        _, e_dec = tree_analytics.decoding_error(geo, 0.0, 1e-2)
        tol = max(0.20 * report.estimate, 3.0 * report.std_error)
        assert e_dec == pytest.approx(report.estimate, abs=tol)

    def test_conditional_unconditional_relation(self):
        geo = TreeGeometry((2, 3))
        e_inc, e_dec = tree_analytics.decoding_error(geo, 0.1, 1e-3)
        p_node = tree_analytics.tree_node_success(geo, 0.1)
        assert e_inc == pytest.approx(e_dec * p_node, rel=1e-9)


class TestTreeFidelity:
    def test_clean(self):
        assert tree_analytics.tree_fidelity(0.0, 499) == 1.0

    def test_frozen_power(self):
        assert tree_analytics.tree_fidelity(1e-3, 499) == pytest.approx(
            FID_999_500, rel=1e-12
        )

    def test_certain_error(self):
        assert tree_analytics.tree_fidelity(1.0, 0) == 0.0

    def test_large_chain_log_space(self):
        # 10^5 stations exercises the log-space branch without underflow to 0
        got = tree_analytics.tree_fidelity(1e-6, 10**5)
        assert got == pytest.approx(0.9048364679566868, rel=1e-12)


class TestClampCounter:
    def test_counts_and_restores(self):
        c = tree_analytics.ClampCounter()
        assert c.clamp(-1e-18) == 0.0
        assert c.clamp(1.0 + 1e-15) == 1.0
        assert c.clamp(0.5) == 0.5
        assert c.events == 2
