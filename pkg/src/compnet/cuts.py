"""Minimum communication, computation and joint cuts.

A cut is a set of links and/or processing capacities whose removal leaves no
computation path from ``s`` to ``t``, i.e. disconnects ``s`` from ``t'`` in
the layered graph.  Exact cuts come from a node-potential integer program;
computation cuts also have a linear-time search, and communication / joint
cuts have a 2-approximation through a classical min cut on the layered graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .flow import classical_min_cut
from .lp import LinearProgram, relax, solve_lp, solve_milp
from .network import (LOWER, UPPER, ComputingNetwork, NetworkError, build_layered,
                      map_cut_to_layered, reachable_nodes)

COMMUNICATION = "communication"
COMPUTATION = "computation"
JOINT = "joint"
MODES = (COMMUNICATION, COMPUTATION, JOINT)

_ALIASES = {"comm": COMMUNICATION, "comp": COMPUTATION}


def _mode(mode: str) -> str:
    mode = _ALIASES.get(mode, mode)
    if mode not in MODES:
        raise ValueError(f"unknown cut mode {mode!r}")
    return mode


@dataclass
class CutSolution:
    links: frozenset
    nodes: frozenset
    value: float
    mode: str
    potentials: dict | None = field(default=None, repr=False)
    optimal: bool = True
    method: str = ""

    def to_dict(self, verified: bool | None = None) -> dict:
        out = {
            "mode": self.mode,
            "method": self.method,
            "links": [{"from": u, "to": v} for u, v in sorted(self.links)],
            "nodes": sorted(self.nodes),
            "value": self.value,
            "optimal": self.optimal,
        }
        if verified is not None:
            out["verified"] = verified
        return out


def cut_value(net: ComputingNetwork, links, nodes) -> float:
    return (sum(net.link(l).capacity for l in links)
            + sum(net.node(w).processing_capacity for w in nodes))


def _make_cut(net, links, nodes, mode, **kw) -> CutSolution:
    links = frozenset(tuple(l) for l in links)
    nodes = frozenset(nodes)
    return CutSolution(links, nodes, cut_value(net, links, nodes), mode, **kw)


def is_cut(net: ComputingNetwork, s: str, t: str, cut) -> bool:
    """True iff removing ``cut`` leaves ``t'`` unreachable from ``s``."""
    g = build_layered(net, s, t)
    return g.sink not in g.reachable(map_cut_to_layered(cut))


def _connected(net, s, t) -> bool:
    g = build_layered(net, s, t)
    return g.sink in g.reachable()


# -- exact -------------------------------------------------------------------

def build_cut_program(net: ComputingNetwork, s: str, t: str, mode: str = JOINT) -> LinearProgram:
    """Node-potential integer program for a minimum cut of the given mode.

    ``y[link]`` / ``y[node]`` are removal indicators, ``p[x]`` layered-node
    potentials in [0, 1] (not required to be integral).  Every surviving edge
    must not lower the potential, and ``p[s] - p[t'] >= 1``.  Zero-capacity
    resources are already absent and get no row.
    """
    mode = _mode(mode)
    g = build_layered(net, s, t)
    lp = LinearProgram("min")
    p = {}
    for x in g.nodes + [g.source, g.sink]:
        if x not in p:
            node, layer = x
            p[x] = lp.add_variable(f"p[{node}{chr(39) if layer == LOWER else ''}]", 0.0, 1.0)
    objective = {}
    for link in net.links.values():
        if link.capacity <= 0:
            continue
        u, v = link.id
        y = None
        if mode != COMPUTATION:
            y = lp.add_variable(f"y[{u}->{v}]", 0.0, 1.0, integral=True)
            objective[y] = link.capacity
        for layer in (UPPER, LOWER):
            coeffs = {p[(v, layer)]: 1.0}
            coeffs[p[(u, layer)]] = coeffs.get(p[(u, layer)], 0.0) - 1.0
            if y is not None:
                coeffs[y] = 1.0
            tag = "lower" if layer == LOWER else "upper"
            lp.add_constraint(coeffs, ">=", 0.0, name=f"edge_{tag}[{u}->{v}]")
    for w in net.computation_nodes():
        y = None
        if mode != COMMUNICATION:
            y = lp.add_variable(f"y[{w}]", 0.0, 1.0, integral=True)
            objective[y] = net.node(w).processing_capacity
        coeffs = {p[(w, LOWER)]: 1.0, p[(w, UPPER)]: -1.0}
        if y is not None:
            coeffs[y] = 1.0
        lp.add_constraint(coeffs, ">=", 0.0, name=f"node[{w}]")
    lp.add_constraint({p[g.source]: 1.0, p[g.sink]: -1.0}, ">=", 1.0, name="separate")
    lp.set_objective(objective)
    return lp


def _exact(net, s, t, mode, time_limit=None, node_limit=None) -> CutSolution:
    if not _connected(net, s, t):
        return _make_cut(net, (), (), mode, potentials={}, method="exact")
    lp = build_cut_program(net, s, t, mode)
    if lp.num_integral == 0:
        # computation mode on a network with no computation node cannot be connected
        raise NetworkError("no removable resource for this cut mode")
    res = solve_milp(lp, time_limit=time_limit, node_limit=node_limit)
    if not res.has_solution:
        raise RuntimeError(f"cut program failed: {res.status} {res.message}")
    links = [l for l in net.link_ids() if res.primal.get(f"y[{l[0]}->{l[1]}]", 0.0) > 0.5]
    nodes = [w for w in net.computation_nodes() if res.primal.get(f"y[{w}]", 0.0) > 0.5]
    potentials = {name: val for name, val in res.primal.items() if name.startswith("p[")}
    return _make_cut(net, links, nodes, mode, potentials=potentials, optimal=res.optimal,
                     method="exact")


def min_joint_cut_exact(net, s, t, time_limit=None, node_limit=None) -> CutSolution:
    return _exact(net, s, t, JOINT, time_limit, node_limit)


def min_comm_cut_exact(net, s, t, time_limit=None, node_limit=None) -> CutSolution:
    return _exact(net, s, t, COMMUNICATION, time_limit, node_limit)


def min_comp_cut_exact(net, s, t, time_limit=None, node_limit=None) -> CutSolution:
    return _exact(net, s, t, COMPUTATION, time_limit, node_limit)


def min_cut_exact(net, s, t, mode=JOINT, time_limit=None, node_limit=None) -> CutSolution:
    return _exact(net, s, t, _mode(mode), time_limit, node_limit)


def cut_relaxation_value(net: ComputingNetwork, s: str, t: str, mode: str = JOINT) -> float:
    """Optimum of the cut program with integrality dropped."""
    if not _connected(net, s, t):
        return 0.0
    return solve_lp(relax(build_cut_program(net, s, t, mode))).raise_for_status().objective


# -- polynomial computation cut ----------------------------------------------

def min_computation_cut(net: ComputingNetwork, s: str, t: str) -> CutSolution:
    """Every computation node that lies on some ``s``-``t`` walk.

    Such a node can process a positive amount of flow, so all of them must
    go, and removing all of them leaves nothing to process the flow.
    """
    net.node(s)
    net.node(t)
    if s == t:
        raise NetworkError("source and destination must differ")
    both = reachable_nodes(net, s) & reachable_nodes(net, t, reverse=True)
    nodes = [w for w in net.computation_nodes() if w in both]
    return _make_cut(net, (), nodes, COMPUTATION, method="fast")


# -- approximations ----------------------------------------------------------

def _approx(net: ComputingNetwork, s: str, t: str, mode: str) -> CutSolution:
    g = build_layered(net, s, t)
    if g.sink not in g.reachable():
        return _make_cut(net, (), (), mode, method="approx")
    costs = {}
    for e in list(g.upper_edges) + list(g.lower_edges):
        if g.capacity[e] > 0:
            costs[e] = g.capacity[e]
    # exceeds any cut made only of link copies
    prohibitive = sum(costs.values()) + 1.0
    for e in g.cross_edges:
        costs[e] = prohibitive if mode == COMMUNICATION else g.capacity[e]
    cut, _ = classical_min_cut(costs, g.source, g.sink)
    links, nodes = set(), set()
    for e in cut:
        kind, key = g.edge_resource[e]
        (links if kind == "link" else nodes).add(key)
    if mode == COMMUNICATION and nodes:
        raise RuntimeError("approximate communication cut crossed the layers")
    return _make_cut(net, links, nodes, mode, method="approx")


def approx_comm_cut(net: ComputingNetwork, s: str, t: str) -> CutSolution:
    """Communication cut within twice the minimum."""
    return _approx(net, s, t, COMMUNICATION)


def approx_joint_cut(net: ComputingNetwork, s: str, t: str) -> CutSolution:
    """Joint cut within twice the minimum (cross edges priced at node capacity)."""
    return _approx(net, s, t, JOINT)
