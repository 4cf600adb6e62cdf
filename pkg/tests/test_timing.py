"""Generation-time closed forms and photon census."""

import pytest
from hypothesis import given, strategies as st

from gsrepeater import timing
from gsrepeater.params import GateTimes, RgsGeometry, TreeGeometry

# reference gate sets with exact decimal values
ANC = GateTimes(t_P=2e-9, t_E=5e-9, t_CZ=1e-7, t_H=1e-10, t_M=2e-8, beta=500.0)
FB = GateTimes(t_P=2e-9, t_E=1.1e-6, t_CZ=1.1e-6, t_H=1e-10, t_M=2e-8, beta=500.0)
ZERO = GateTimes(t_P=0.0, t_E=0.0, t_CZ=0.0, t_H=0.0, t_M=0.0, beta=1.0)

# frozen from exact rational evaluation of the four closed forms
T_TREE_ANC = {
    (2, 3): 5.212e-06,
    (4, 16, 5): 1.776e-05,
    (2, 2, 2): 5.636e-06,
}
T_TREE_FB = {
    (2, 3): 4.412e-06,
    (4, 16, 5): 0.00015024,
    (2, 2, 2): 1.3216e-05,
}
T_RGS_ANC = {
    (6, (2, 3)): 2.804e-06,
    (32, (24, 7)): 9.9156e-05,
}
T_RGS_FB = {
    (6, (2, 3)): 3.97052e-05,
    (32, (24, 7)): 0.0025452424,
}


class TestPhotonCount:
    def test_tree(self):
        assert timing.photon_count(TreeGeometry((2, 3))) == 8
        assert timing.photon_count(TreeGeometry((4, 16, 5))) == 388
        assert timing.photon_count(TreeGeometry((1, 1))) == 2

    def test_rgs_includes_arms(self):
        assert timing.photon_count(RgsGeometry(6, TreeGeometry((2, 3)))) == 54
        assert timing.photon_count(RgsGeometry(32, TreeGeometry((24, 7)))) == 6176


class TestTreeAncilla:
    def test_symbolic_structure(self):
        # depth 2 expands to  Prod(b) t_P + b0 beta t_E + b0 t_CZ
        g = ANC
        got = timing.generation_time("tree", "ancilla", TreeGeometry((2, 3)), g)
        want = 6 * g.t_P + 2 * g.beta * g.t_E + 2 * g.t_CZ
        assert got.T_graph == pytest.approx(want, rel=1e-15)
        assert got.N_ph == 8

    @pytest.mark.parametrize("b,expected", sorted(T_TREE_ANC.items()))
    def test_frozen(self, b, expected):
        got = timing.generation_time("tree", "ancilla", TreeGeometry(b), ANC)
        assert got.T_graph == pytest.approx(expected, rel=1e-12)


class TestTreeFeedback:
    @pytest.mark.parametrize("b,expected", sorted(T_TREE_FB.items()))
    def test_frozen(self, b, expected):
        got = timing.generation_time("tree", "feedback", TreeGeometry(b), FB)
        assert got.T_graph == pytest.approx(expected, rel=1e-12)


class TestRgs:
    @pytest.mark.parametrize("nb,expected", sorted(T_RGS_ANC.items()))
    def test_frozen_ancilla(self, nb, expected):
        geo = RgsGeometry(nb[0], TreeGeometry(nb[1]))
        got = timing.generation_time("rgs", "ancilla", geo, ANC)
        assert got.T_graph == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("nb,expected", sorted(T_RGS_FB.items()))
    def test_frozen_feedback(self, nb, expected):
        geo = RgsGeometry(nb[0], TreeGeometry(nb[1]))
        got = timing.generation_time("rgs", "feedback", geo, FB)
        assert got.T_graph == pytest.approx(expected, rel=1e-12)


class TestStructure:
    def test_zero_gates_zero_time(self):
        for protocol, geo in (
            ("tree", TreeGeometry((2, 3))),
            ("rgs", RgsGeometry(6, TreeGeometry((2, 3)))),
        ):
            for scheme in ("ancilla", "feedback"):
                got = timing.generation_time(protocol, scheme, geo, ZERO)
                assert got.T_graph == 0.0

    @given(st.floats(min_value=0.1, max_value=10.0))
    def test_linear_in_gate_times(self, k):
        scaled = GateTimes(
            t_P=ANC.t_P * k,
            t_E=ANC.t_E * k,
            t_CZ=ANC.t_CZ * k,
            t_H=ANC.t_H * k,
            t_M=ANC.t_M * k,
            beta=ANC.beta,
        )
        base = timing.generation_time("tree", "ancilla", TreeGeometry((2, 2, 2)), ANC)
        got = timing.generation_time("tree", "ancilla", TreeGeometry((2, 2, 2)), scaled)
        assert got.T_graph == pytest.approx(base.T_graph * k, rel=1e-12)

    def test_rgs_measure_tail(self):
        # with every gate zero except t_M the RGS formulas keep the tails
        g = GateTimes(t_P=0.0, t_E=0.0, t_CZ=0.0, t_H=0.0, t_M=1e-8, beta=1.0)
        geo = RgsGeometry(6, TreeGeometry((2, 3)))
        anc = timing.generation_time("rgs", "ancilla", geo, g)
        fb = timing.generation_time("rgs", "feedback", geo, g)
        assert anc.T_graph == pytest.approx(6 * 2e-8 + 1e-8, rel=1e-12)
        assert fb.T_graph == pytest.approx(1e-8, rel=1e-12)
