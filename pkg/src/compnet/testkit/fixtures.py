"""Reference networks with known flow, cut and interdiction values.

Figure capacities that are only drawn (never printed) are reconstructions
chosen so that every stated number holds at once; :func:`check_fixture`
re-derives each expectation with the exact solvers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..network import ComputingNetwork, Link, Node, dump_network

REPORTED = "reported"
TRIVIAL = "trivial"
DERIVED = "derived"


@dataclass(frozen=True)
class Expectation:
    value: float
    provenance: str
    note: str = ""


@dataclass(frozen=True)
class Fixture:
    name: str
    network: ComputingNetwork
    source: str
    target: str
    expected: dict = field(default_factory=dict)
    description: str = ""


def _net(nodes: dict, links: list) -> ComputingNetwork:
    return ComputingNetwork([Node(k, float(v)) for k, v in nodes.items()],
                            [Link(u, v, float(c)) for u, v, c in links])


def fig1() -> Fixture:
    net = _net({"s": 0, "u1": 1, "v1": 1, "u2": 1, "v2": 1, "t": 0},
               [("s", "u1", 2), ("u1", "v1", 2), ("v1", "t", 2),
                ("s", "u2", 2), ("u2", "v2", 2), ("v2", "t", 2)])
    return Fixture("fig1", net, "s", "t", {
        "max_flow": Expectation(4.0, REPORTED, "max s-t flow is four"),
        "comm_cut": Expectation(4.0, DERIVED, "{(u1,v1),(u2,v2)}"),
        "comp_cut": Expectation(4.0, DERIVED, "all four computation nodes"),
        "joint_cut": Expectation(4.0, DERIVED, "joint cut {(u1,v1)} + {u2,v2} has value 4"),
    }, "two disjoint three-hop paths; links 2, computation nodes 1")


def fig2() -> Fixture:
    net = _net({"s": 0, "u": 1, "v": 0, "t": 0},
               [("s", "u", 1), ("u", "v", 1), ("v", "t", 1)])
    return Fixture("fig2", net, "s", "t", {
        "max_flow": Expectation(1.0, DERIVED, "single path processed at u"),
    }, "path s-u-v-t processed at u")


def _fig3_parts(a="u1", b="u2"):
    nodes = {a: 1, b: 1}
    links = [("s", a, 5), (a, "t", 5), ("s", b, 5), (b, "t", 5)]
    return nodes, links


def _fig4_parts(a="u", b="v"):
    nodes = {a: 10, b: 10}
    links = [("s", a, 1), (a, b, 1), (b, "t", 1)]
    return nodes, links


def fig3() -> Fixture:
    nodes, links = _fig3_parts()
    net = _net({"s": 0, **nodes, "t": 0}, links)
    return Fixture("fig3", net, "s", "t", {
        "max_flow": Expectation(2.0, REPORTED, "max flow = 2"),
        "comm_cut": Expectation(10.0, REPORTED, "min communication cut = 10"),
        "joint_cut": Expectation(2.0, REPORTED, "removing the two units of computation"),
        "comp_cut": Expectation(2.0, DERIVED),
    }, "two parallel two-hop paths; links 5, computation nodes 1")


def fig4() -> Fixture:
    nodes, links = _fig4_parts()
    net = _net({"s": 0, **nodes, "t": 0}, links)
    return Fixture("fig4", net, "s", "t", {
        "max_flow": Expectation(1.0, REPORTED, "max flow = 1"),
        "comp_cut": Expectation(20.0, REPORTED, "min computation cut = 20"),
        "joint_cut": Expectation(1.0, REPORTED, "any one of the three links"),
        "comm_cut": Expectation(1.0, DERIVED),
    }, "path s-u-v-t; links 1, computation nodes 10")


def fig3_4_parallel() -> Fixture:
    n3, l3 = _fig3_parts("a1", "a2")
    n4, l4 = _fig4_parts("b1", "b2")
    net = _net({"s": 0, **n3, **n4, "t": 0}, l3 + l4)
    return Fixture("fig3_4", net, "s", "t", {
        "joint_cut": Expectation(3.0, REPORTED, "minimum joint cut is 3"),
        "comm_cut": Expectation(11.0, REPORTED, "communication cut is 11"),
        "comp_cut": Expectation(22.0, REPORTED, "computation cut is 22"),
        "max_flow": Expectation(3.0, DERIVED),
    }, "the two gap examples in parallel between s and t")


def fig5(v_capacity: float = 2.0) -> Fixture:
    net = _net({"s": 0, "t": 0, "v": v_capacity},
               [("s", "t", 2), ("t", "v", 2), ("v", "s", 2)])
    if v_capacity == 2.0:
        return Fixture("fig5", net, "s", "t", {
            "max_flow": Expectation(1.0, REPORTED, "max flow = 1"),
            "joint_cut": Expectation(2.0, REPORTED, "min joint cut = 2"),
        }, "cycle s->t->v->s, all capacities 2, only v computes")
    return Fixture("fig5_v15", net, "s", "t", {
        "max_flow": Expectation(1.0, REPORTED, "max flow remains 1"),
        "joint_cut": Expectation(v_capacity, REPORTED, "min joint cut is node v"),
    }, "cycle s->t->v->s with processing at v reduced")


def fig6() -> Fixture:
    net = _net({"s": 0, "u": 0, "v": 2, "t": 0},
               [("s", "u", 2), ("u", "v", 2), ("v", "s", 2), ("u", "t", 1.5)])
    return Fixture("fig6", net, "s", "t", {
        "max_flow": Expectation(1.0, REPORTED, "max flow remains 1"),
        "joint_cut": Expectation(1.5, REPORTED, "min cut is link (u,t) of capacity 1.5"),
    }, "flow s-u-v-s-u-t processed at v crosses (s,u) twice; (u,t) is an unsaturated min cut")


def fig6_partial_curve(budget: float) -> float:
    """Residual flow after optimal partial interdiction of :func:`fig6`."""
    if budget <= 1.0:
        return 1.0 - 0.5 * budget
    if budget <= 1.5:
        return 1.5 - budget
    return 0.0


# Abilene backbone, 11 nodes / 14 edges.  Numbering: 1 Seattle, 2 Sunnyvale,
# 3 Los Angeles, 4 Denver, 5 Kansas City, 6 Houston, 7 Indianapolis,
# 8 Atlanta, 9 Washington, 10 Chicago, 11 New York.
ABILENE_EDGES = [
    ("1", "2"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "6"), ("4", "5"), ("5", "6"),
    ("5", "7"), ("6", "8"), ("7", "8"), ("7", "10"), ("8", "9"), ("9", "11"), ("10", "11"),
]
ABILENE_NODES = [str(i) for i in range(1, 12)]


def abilene(node_capacity: dict, link_capacity: float = 1.0) -> ComputingNetwork:
    links = []
    for u, v in ABILENE_EDGES:
        links.append((u, v, link_capacity))
        links.append((v, u, link_capacity))
    return _net({n: node_capacity.get(n, 0.0) for n in ABILENE_NODES}, links)


def abilene_unit() -> Fixture:
    return Fixture("abilene_unit", abilene({"6": 0.5, "11": 0.5}), "8", "7", {
        "max_flow": Expectation(1.0, REPORTED, "max flow between each pair is 1"),
        "comp_cut": Expectation(1.0, REPORTED, "computation cut {6, 11}"),
        "joint_cut": Expectation(1.0, DERIVED, "between max flow 1 and computation cut 1"),
    }, "unit links, nodes 6 and 11 process 0.5 each")


def abilene_comm() -> Fixture:
    return Fixture("abilene_comm", abilene({"6": 5.0, "11": 5.0}), "8", "7", {
        "max_flow": Expectation(2.5, REPORTED, "maximum flow is 2.5"),
        "comm_cut": Expectation(3.0, REPORTED, "minimum communication cut for s=8,t=7 is 3"),
        "comp_cut": Expectation(10.0, DERIVED),
        "joint_cut": Expectation(3.0, REPORTED, "joint cut equals the smaller pure cut"),
    }, "unit links, nodes 6 and 11 process 5 each")


def abilene_joint() -> Fixture:
    return Fixture("abilene_joint", abilene({"6": 5.0, "11": 0.5}), "8", "7", {
        "max_flow": Expectation(2.25, REPORTED, "maximum s-t flow is 2.25"),
        "joint_cut": Expectation(2.5, REPORTED, "minimum joint cut is 2.5"),
        "comm_cut": Expectation(3.0, REPORTED, "minimum communication cut 3"),
        "comp_cut": Expectation(5.5, REPORTED, "minimum computation cut 5.5"),
    }, "unit links, node 6 processes 5 and node 11 processes 0.5")


_BUILDERS = {
    "fig1": fig1,
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig3_4": fig3_4_parallel,
    "fig5": fig5,
    "fig5_v15": lambda: fig5(1.5),
    "fig6": fig6,
    "abilene_unit": abilene_unit,
    "abilene_comm": abilene_comm,
    "abilene_joint": abilene_joint,
}


def fixture_names() -> list[str]:
    return list(_BUILDERS) + ["x3c_example"]


def fixture(name: str) -> Fixture:
    if name == "x3c_example":
        from .x3c import x3c_example_fixture
        return x3c_example_fixture()
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {fixture_names()}") from None


def fixtures() -> list[Fixture]:
    return [fixture(name) for name in fixture_names()]


_METRICS = ("max_flow", "comm_cut", "comp_cut", "joint_cut")


def measure(fx: Fixture, metric: str) -> float:
    from .. import cuts, flow
    net, s, t = fx.network, fx.source, fx.target
    if metric == "max_flow":
        return flow.max_flow(net, s, t).value
    if metric == "comm_cut":
        return cuts.min_comm_cut_exact(net, s, t).value
    if metric == "comp_cut":
        return cuts.min_comp_cut_exact(net, s, t).value
    if metric == "joint_cut":
        return cuts.min_joint_cut_exact(net, s, t).value
    raise KeyError(metric)


def check_fixture(fx: Fixture, tol: float = 1e-6) -> dict:
    """Recompute every expectation; returns ``{metric: (expected, got)}`` for
    the ones that fail (empty when the fixture is consistent)."""
    bad = {}
    for metric, exp in fx.expected.items():
        got = measure(fx, metric)
        if abs(got - exp.value) > tol:
            bad[metric] = (exp.value, got)
    return bad


def export_fixtures(directory) -> Path:
    """Write every fixture as topology JSON plus a ``manifest.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = []
    for fx in fixtures():
        path = directory / f"{fx.name}.json"
        path.write_text(dump_network(fx.network) + "\n")
        manifest.append({
            "name": fx.name,
            "file": path.name,
            "source": fx.source,
            "target": fx.target,
            "description": fx.description,
            "expected": {m: {"value": e.value, "provenance": e.provenance, "note": e.note}
                         for m, e in fx.expected.items()},
        })
    out = directory / "manifest.json"
    out.write_text(json.dumps(manifest, indent=2) + "\n")
    return out
