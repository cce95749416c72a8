import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compnet.flow import (FlowModel, PathLimitExceeded, classical_min_cut, decompose,
                          enumerate_layered_paths, max_flow, max_flow_path_oracle)
from compnet.network import ComputingNetwork, Link, NetworkError, Node, build_layered
from compnet.testkit.corpus import small_network
from compnet.testkit.fixtures import fixture

seeds = st.integers(0, 5_000)


def test_fig1_and_fig5_values():
    assert max_flow(fixture("fig1").network, "s", "t").value == pytest.approx(4.0)
    assert max_flow(fixture("fig5").network, "s", "t").value == pytest.approx(1.0)


def test_no_computation_means_no_flow():
    net = ComputingNetwork([Node("s"), Node("t")], [Link("s", "t", 5.0)])
    sol = max_flow(net, "s", "t")
    assert sol.value == pytest.approx(0.0)
    assert decompose(sol) == []


def test_processing_at_endpoints():
    net = ComputingNetwork([Node("s", 0.5), Node("t", 0.25)], [Link("s", "t", 5.0)])
    assert max_flow(net, "s", "t").value == pytest.approx(0.75)


def test_fig5_decomposition_revisits_source():
    sol = max_flow(fixture("fig5").network, "s", "t")
    paths = decompose(sol)
    assert len(paths) == 1
    p = paths[0]
    assert p.processor == "v"
    assert p.nodes == ("s", "t", "v", "s", "t")
    assert p.amount == pytest.approx(1.0)
    assert p.split == 2
    # link (s,t) carries the flow once per layer
    assert sol.link_usage()[("s", "t")] == pytest.approx(2.0)
    assert "v" in str(p)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_lp_value_matches_path_oracle(seed):
    inst = small_network(seed)
    lp_value = max_flow(inst.network, inst.source, inst.target).value
    assert lp_value == pytest.approx(max_flow_path_oracle(inst.network, inst.source, inst.target),
                                     abs=1e-6)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_decomposition_reassembles_the_flow(seed):
    inst = small_network(seed)
    net = inst.network
    sol = max_flow(net, inst.source, inst.target)
    paths = decompose(sol)
    assert sum(p.amount for p in paths) == pytest.approx(sol.value, abs=1e-6)
    usage = {}
    processed = {}
    for p in paths:
        assert p.amount > 0
        assert net.node(p.processor).is_computation
        assert p.nodes[0] == inst.source and p.nodes[-1] == inst.target
        for a, b in zip(p.links, p.links[1:]):
            assert a[1] == b[0]
        for link in p.links:
            usage[link] = usage.get(link, 0.0) + p.amount
        processed[p.processor] = processed.get(p.processor, 0.0) + p.amount
    for link, used in usage.items():
        assert used <= net.link(link).capacity + 1e-6
    for w, amount in processed.items():
        assert amount <= net.node(w).processing_capacity + 1e-6


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(0.1, 10.0))
def test_flow_is_positively_homogeneous(seed, scale):
    inst = small_network(seed)
    net = inst.network
    model = FlowModel(net, inst.source, inst.target)
    links, nodes = model.capacities()
    scaled = model.value({k: scale * v for k, v in links.items()},
                         {k: scale * v for k, v in nodes.items()})
    assert scaled == pytest.approx(scale * model.value(), rel=1e-6, abs=1e-7)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_flow_bounded_by_processing_and_duals_in_unit_interval(seed):
    inst = small_network(seed)
    sol = max_flow(inst.network, inst.source, inst.target)
    assert 0 <= sol.value <= sum(inst.network.node(w).processing_capacity
                                 for w in inst.network.computation_nodes()) + 1e-9
    for q in list(sol.link_duals.values()) + list(sol.node_duals.values()):
        assert -1e-9 <= q <= 1 + 1e-9


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 2**31))
def test_shadow_prices_are_supergradients(seed, draw):
    inst = small_network(seed)
    model = FlowModel(inst.network, inst.source, inst.target)
    rng = np.random.default_rng(draw)
    links, nodes = model.capacities()
    base = model.solve()
    new_links = {k: float(rng.uniform(0, 2)) for k in links}
    new_nodes = {k: float(rng.uniform(0, 2)) for k in nodes}
    bound = base.value
    bound += sum(base.link_duals[k] * (new_links[k] - links[k]) for k in links)
    bound += sum(base.node_duals[k] * (new_nodes[k] - nodes[k]) for k in nodes)
    assert model.value(new_links, new_nodes) <= bound + 1e-6


def test_model_capacity_overrides():
    fx = fixture("fig1")
    model = FlowModel(fx.network, "s", "t")
    assert model.value({("u1", "v1"): 0.0}) == pytest.approx(2.0)
    assert model.value(node_capacity={"u1": 0.0, "v1": 0.0}) == pytest.approx(2.0)
    # the base network is untouched
    assert model.value() == pytest.approx(4.0)
    with pytest.raises(NetworkError):
        model.solve({("s", "t"): 1.0})
    with pytest.raises(NetworkError):
        model.solve(node_capacity={"s": 1.0})
    with pytest.raises(NetworkError):
        model.solve({("s", "u1"): -1.0})


def test_flow_solution_serializes():
    sol = max_flow(fixture("fig2").network, "s", "t")
    doc = sol.to_dict()
    assert doc["value"] == pytest.approx(1.0)
    assert {d["id"] for d in doc["node_duals"]} == {"u"}
    assert any(e["edge"] == "u->u'" for e in doc["edge_flows"])


def test_decompose_detects_broken_conservation():
    sol = max_flow(fixture("fig2").network, "s", "t")
    g = sol.layered
    sol.edge_flows[g.upper_edges[0]] = 2.0
    sol.edge_flows[g.upper_edges[1]] = 0.0
    with pytest.raises(ValueError):
        decompose(sol)


def test_path_enumeration_limit():
    g = build_layered(fixture("abilene_comm").network, "8", "7")
    with pytest.raises(PathLimitExceeded):
        enumerate_layered_paths(g, limit=5)


def brute_force_cut(costs, s, t):
    nodes = sorted({x for e in costs for x in e} - {s, t})
    best = float("inf")
    for r in range(len(nodes) + 1):
        for side in itertools.combinations(nodes, r):
            S = set(side) | {s}
            best = min(best, sum(c for (u, v), c in costs.items() if u in S and v not in S))
    return best


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda e: e[0] != e[1]),
                       st.integers(0, 6).map(float), min_size=1, max_size=14))
def test_classical_min_cut_matches_brute_force(costs):
    cut, value = classical_min_cut(costs, 0, 5)
    assert value == pytest.approx(brute_force_cut(costs, 0, 5))
    # removing the cut disconnects
    rest = {e: c for e, c in costs.items() if e not in cut and c > 0}
    reach, frontier = {0}, [0]
    while frontier:
        u = frontier.pop()
        for (a, b) in rest:
            if a == u and b not in reach:
                reach.add(b)
                frontier.append(b)
    assert 5 not in reach


def test_classical_min_cut_rejects_bad_input():
    with pytest.raises(ValueError):
        classical_min_cut({("a", "b"): -1.0}, "a", "b")
    with pytest.raises(ValueError):
        classical_min_cut({("a", "b"): 1.0}, "a", "a")
