import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compnet import cuts
from compnet.cuts import (COMMUNICATION, COMPUTATION, JOINT, approx_comm_cut, approx_joint_cut,
                          build_cut_program, cut_relaxation_value, is_cut, min_comm_cut_exact,
                          min_comp_cut_exact, min_computation_cut, min_cut_exact,
                          min_joint_cut_exact)
from compnet.flow import max_flow
from compnet.network import ComputingNetwork, Link, NetworkError, Node
from compnet.testkit.corpus import small_network
from compnet.testkit.fixtures import fixture
from compnet.testkit.oracles import cut_oracle

seeds = st.integers(0, 5_000)


@pytest.mark.parametrize("name,comm,comp,joint", [
    ("fig3", 10, 2, 2),
    ("fig4", 1, 20, 1),
    ("fig3_4", 11, 22, 3),
    ("fig5", 2, 2, 2),
    ("fig6", 1.5, 2, 1.5),
])
def test_small_figures(name, comm, comp, joint):
    fx = fixture(name)
    net, s, t = fx.network, fx.source, fx.target
    assert min_comm_cut_exact(net, s, t).value == pytest.approx(comm)
    assert min_comp_cut_exact(net, s, t).value == pytest.approx(comp)
    assert min_joint_cut_exact(net, s, t).value == pytest.approx(joint)


def test_cut_solution_contents():
    fx = fixture("fig3_4")
    sol = min_joint_cut_exact(fx.network, "s", "t")
    assert sol.nodes == {"a1", "a2"}
    assert len(sol.links) == 1 and next(iter(sol.links))[0] in ("s", "b1", "b2")
    assert sol.optimal and sol.method == "exact"
    doc = sol.to_dict(verified=True)
    assert doc["nodes"] == ["a1", "a2"] and doc["verified"] is True
    assert is_cut(fx.network, "s", "t", sol)


def test_modes_respect_resource_types():
    fx = fixture("fig3")
    comm = min_comm_cut_exact(fx.network, "s", "t")
    comp = min_comp_cut_exact(fx.network, "s", "t")
    assert not comm.nodes and comm.links
    assert not comp.links and comp.nodes
    assert min_cut_exact(fx.network, "s", "t", "comm").mode == COMMUNICATION
    with pytest.raises(ValueError):
        min_cut_exact(fx.network, "s", "t", "both")


def test_disconnected_pair_gives_empty_cut():
    net = ComputingNetwork([Node("s", 1.0), Node("t")], [Link("t", "s", 1.0)])
    for mode in (COMMUNICATION, COMPUTATION, JOINT):
        sol = min_cut_exact(net, "s", "t", mode)
        assert sol.value == 0 and not sol.links and not sol.nodes
    assert approx_joint_cut(net, "s", "t").value == 0
    assert cut_relaxation_value(net, "s", "t") == 0


def test_cut_program_shape():
    fx = fixture("fig2")
    lp = build_cut_program(fx.network, "s", "t", COMMUNICATION)
    names = lp.variable_names()
    assert "y[s->u]" in names and "y[u]" not in names
    lp = build_cut_program(fx.network, "s", "t", COMPUTATION)
    assert lp.num_integral == 1
    assert lp.constraint("separate").rhs == 1.0


def test_fast_computation_cut_on_fig4():
    sol = min_computation_cut(fixture("fig4").network, "s", "t")
    assert sol.value == pytest.approx(20.0) and sol.method == "fast"


def test_fast_cut_ignores_off_path_processing():
    net = ComputingNetwork([Node("s"), Node("u", 1.0), Node("x", 9.0), Node("t")],
                           [Link("s", "u", 1.0), Link("u", "t", 1.0), Link("t", "x", 1.0)])
    assert min_computation_cut(net, "s", "t").nodes == {"u"}
    with pytest.raises(NetworkError):
        min_computation_cut(net, "s", "s")


def test_abilene_cuts():
    fx = fixture("abilene_joint")
    assert min_joint_cut_exact(fx.network, "8", "7").value == pytest.approx(2.5)
    approx = approx_comm_cut(fx.network, "8", "7")
    assert 3.0 - 1e-9 <= approx.value <= 6.0 + 1e-9
    assert not approx.nodes


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_exact_cuts_match_enumeration(seed):
    inst = small_network(seed)
    net, s, t = inst.network, inst.source, inst.target
    for mode in (COMMUNICATION, COMPUTATION, JOINT):
        exact = min_cut_exact(net, s, t, mode)
        assert is_cut(net, s, t, exact)
        assert exact.value == pytest.approx(cut_oracle(net, s, t, mode).value, abs=1e-6)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_cut_bounds(seed):
    inst = small_network(seed)
    net, s, t = inst.network, inst.source, inst.target
    flow = max_flow(net, s, t).value
    joint = min_joint_cut_exact(net, s, t).value
    comm = min_comm_cut_exact(net, s, t).value
    comp = min_comp_cut_exact(net, s, t).value
    fast = min_computation_cut(net, s, t)
    assert flow - 1e-6 <= joint <= 2 * flow + 1e-6
    assert joint <= min(comm, comp) + 1e-6
    assert fast.value == pytest.approx(comp, abs=1e-6)
    assert is_cut(net, s, t, fast)
    relaxed = cut_relaxation_value(net, s, t, JOINT)
    assert relaxed == pytest.approx(flow, abs=1e-6)
    for approx, exact in ((approx_comm_cut(net, s, t), comm), (approx_joint_cut(net, s, t), joint)):
        assert is_cut(net, s, t, approx)
        assert exact - 1e-6 <= approx.value <= 2 * exact + 1e-6


@pytest.mark.parametrize("seed,approx_comm,exact_comm", [(1, 3.75, 2.75), (5, 2.0, 1.5)])
def test_approx_can_be_strictly_worse(seed, approx_comm, exact_comm):
    inst = small_network(seed)
    net, s, t = inst.network, inst.source, inst.target
    assert approx_comm_cut(net, s, t).value == pytest.approx(approx_comm)
    assert min_comm_cut_exact(net, s, t).value == pytest.approx(exact_comm)


def test_is_cut_checks():
    fx = fixture("fig1")
    from types import SimpleNamespace
    assert not is_cut(fx.network, "s", "t", SimpleNamespace(links=[("u1", "v1")], nodes=[]))
    assert is_cut(fx.network, "s", "t",
                  SimpleNamespace(links=[("u1", "v1"), ("u2", "v2")], nodes=[]))
    # removing just the processing on one path leaves the other
    assert not is_cut(fx.network, "s", "t", SimpleNamespace(links=[], nodes=["u1", "v1"]))


def test_cut_value_helper():
    fx = fixture("fig3")
    assert cuts.cut_value(fx.network, [("s", "u1")], ["u2"]) == pytest.approx(6.0)
