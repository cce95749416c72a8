import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compnet.network import (LOWER, UPPER, ComputingNetwork, Link, NetworkError, Node,
                             RemovalSpec, apply_removal, build_layered, dump_network,
                             gen_random, load_network, network_to_dict, reachable_nodes)
from compnet.testkit.fixtures import ABILENE_EDGES, ABILENE_NODES, fixture


def simple():
    return ComputingNetwork([Node("s"), Node("u", 1.0), Node("t")],
                            [Link("s", "u", 2.0), Link("u", "t", 3.0)])


def test_costs_default_to_capacity():
    n = Node("a", 2.0)
    assert n.cost == 2.0 and n.is_computation
    assert Node("b", 2.0, 0.5).cost == 0.5
    assert Link("a", "b", 3.0).cost == 3.0
    assert Link("a", "b", 3.0, 1.0).cost == 1.0


@pytest.mark.parametrize("nodes,links", [
    ([Node("a"), Node("a")], []),
    ([Node("a")], [Link("a", "b", 1.0)]),
    ([Node("a")], [Link("a", "a", 1.0)]),
    ([Node("a", -1.0)], []),
    ([Node("a"), Node("b")], [Link("a", "b", -0.5)]),
    ([Node("a"), Node("b")], [Link("a", "b", 1.0), Link("a", "b", 2.0)]),
    ([Node("a", float("nan"))], []),
    ([Node("a", 1.0, -2.0)], []),
])
def test_invalid_networks_rejected(nodes, links):
    with pytest.raises(NetworkError):
        ComputingNetwork(nodes, links)


def test_accessors():
    net = simple()
    assert net.node_ids() == ["s", "u", "t"]
    assert net.link_ids() == [("s", "u"), ("u", "t")]
    assert net.computation_nodes() == ["u"]
    assert net.total_capacity() == pytest.approx(6.0)
    with pytest.raises(NetworkError):
        net.node("zz")
    with pytest.raises(NetworkError):
        net.link(("t", "s"))


def test_json_round_trip_preserves_costs():
    net = ComputingNetwork([Node("a", 1.0, 0.25), Node("b")], [Link("a", "b", 2.0, 7.0)])
    again = load_network(dump_network(net))
    assert again == net
    assert again.link(("a", "b")).cost == 7.0
    doc = network_to_dict(net)
    assert "interdiction_cost" not in doc["nodes"][1]


@pytest.mark.parametrize("text", [
    "not json",
    "[1, 2]",
    json.dumps({"nodes": [{"id": "a"}]}),
    json.dumps({"nodes": [{"id": "a", "processing_capacity": 0}],
                "links": [{"from": "a", "to": "b", "capacity": 1}]}),
    json.dumps({"nodes": [{"id": "a", "processing_capacity": 0},
                          {"id": "b", "processing_capacity": 0}],
                "links": [{"from": "a", "to": "b", "capacity": 0}]}),
    json.dumps({"nodes": [{"id": "a", "processing_capacity": "x"}]}),
])
def test_malformed_documents(text):
    with pytest.raises(NetworkError):
        load_network(text)


def test_layered_structure():
    net = simple()
    g = build_layered(net, "s", "t")
    assert g.source == ("s", UPPER) and g.sink == ("t", LOWER)
    assert len(g.upper_edges) == len(g.lower_edges) == 2
    assert g.cross_edges == ((("u", UPPER), ("u", LOWER)),)
    assert g.return_capacity == pytest.approx(net.total_capacity() + 1)
    assert g.edge_resource[(("s", LOWER), ("u", LOWER))] == ("link", ("s", "u"))
    assert g.sink in g.reachable()
    cut = {(("u", UPPER), ("u", LOWER))}
    assert g.sink not in g.reachable(cut)


def test_layered_rejects_bad_pairs():
    with pytest.raises(NetworkError):
        build_layered(simple(), "s", "s")
    with pytest.raises(NetworkError):
        build_layered(simple(), "s", "nowhere")


def test_zero_capacity_links_are_inert():
    net = ComputingNetwork([Node("s"), Node("u", 1.0), Node("t")],
                           [Link("s", "u", 0.0), Link("u", "t", 1.0)])
    g = build_layered(net, "s", "t")
    assert g.sink not in g.reachable()
    assert reachable_nodes(net, "s") == {"s"}


def test_removal_spec_and_apply():
    net = simple()
    spec = RemovalSpec({("s", "u"): 0.5}, {"u": 1.0})
    assert spec.cost(net) == pytest.approx(0.5 * 2 + 1)
    out = apply_removal(net, spec)
    assert out.link(("s", "u")).capacity == pytest.approx(1.0)
    assert out.node("u").processing_capacity == 0.0
    # interdiction cost is a property of the original resource
    assert out.link(("s", "u")).cost == 2.0
    assert out.node("u").cost == 1.0
    with pytest.raises(NetworkError):
        RemovalSpec({("s", "u"): 1.5})
    with pytest.raises(NetworkError):
        RemovalSpec({("s", "u"): 0.5}, binary=True)
    spec2 = RemovalSpec.from_resources({("link", ("u", "t")): 1.0, ("node", "u"): 0.0}, binary=True)
    assert spec2.fractions() == {("link", ("u", "t")): 1.0}


def test_gen_random_is_seeded_and_in_range():
    a = gen_random(ABILENE_EDGES, seed=11, nodes=ABILENE_NODES)
    b = gen_random(ABILENE_EDGES, seed=11, nodes=ABILENE_NODES)
    c = gen_random(ABILENE_EDGES, seed=12, nodes=ABILENE_NODES)
    assert a == b and a != c
    assert len(a.links) == 2 * len(ABILENE_EDGES)
    assert all(0 < l.capacity <= 1 for l in a.links.values())
    assert all(0 < n.processing_capacity <= 0.1 for n in a.nodes.values())
    assert all(l.cost == l.capacity for l in a.links.values())


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.0, 5.0), st.floats(0.1, 5.0))
def test_gen_random_ranges_honoured(seed, lo, width):
    hi = lo + width
    net = gen_random([("a", "b"), ("b", "c")], (lo, hi), (lo, hi), seed=seed,
                     link_cost_range=(lo, hi), node_cost_range=(0.0, 1.0))
    for l in net.links.values():
        assert lo <= l.capacity <= hi and lo <= l.cost <= hi
    for n in net.nodes.values():
        assert lo <= n.processing_capacity <= hi and 0 <= n.cost <= 1.0


def test_gen_random_rejects_bad_ranges():
    with pytest.raises(NetworkError):
        gen_random([("a", "b")], link_range=(1.0, 0.5))
    with pytest.raises(NetworkError):
        gen_random([("a", "b")], node_range=(-1.0, 0.5))


def test_fixture_file_round_trip():
    net = fixture("abilene_joint").network
    assert load_network(dump_network(net)) == net
