"""Maximum computation flow.

The flow LP lives on the layered graph: conservation at every layered node,
a shared capacity row for the two copies of each link, a capacity row per
cross edge, and a return arc ``(t', s)`` whose flow is maximised.  Duals of
the capacity rows are the shadow prices used by the greedy interdiction
heuristics.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Mapping

from .lp import TOL, LinearProgram, LPError, solve_lp
from .network import LOWER, UPPER, ComputingNetwork, LayeredGraph, NetworkError, build_layered

_STRIP_TOL = 1e-9


def _label(x) -> str:
    node, layer = x
    return f"{node}'" if layer == LOWER else f"{node}"


def _edge_label(edge) -> str:
    return f"{_label(edge[0])}->{_label(edge[1])}"


@dataclass
class FlowSolution:
    value: float
    edge_flows: dict
    link_duals: dict
    node_duals: dict
    layered: LayeredGraph = field(repr=False)
    status: str = "optimal"

    @property
    def source(self):
        return self.layered.source

    @property
    def sink(self):
        return self.layered.sink

    def link_usage(self) -> dict:
        """Total flow per original link, summed over both layers."""
        usage = defaultdict(float)
        for edge, f in self.edge_flows.items():
            kind, key = self.layered.edge_resource.get(edge, (None, None))
            if kind == "link":
                usage[key] += f
        return dict(usage)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "status": self.status,
            "edge_flows": [{"edge": _edge_label(e), "flow": f} for e, f in self.edge_flows.items()],
            "link_duals": [{"from": u, "to": v, "dual": q} for (u, v), q in self.link_duals.items()],
            "node_duals": [{"id": w, "dual": q} for w, q in self.node_duals.items()],
        }


class FlowModel:
    """The layered max-flow LP for one topology and ``(s, t)`` pair.

    The model is assembled once; :meth:`solve` re-solves it with different
    capacities, which is what the interdiction heuristics and oracles need.
    Nodes without processing capacity in ``net`` get no cross edge, so their
    capacity cannot be raised later.
    """

    def __init__(self, net: ComputingNetwork, s: str, t: str):
        self.net = net
        self.layered = build_layered(net, s, t)
        g = self.layered
        lp = LinearProgram("max")
        self.var = {}
        for edge in g.edges(include_return=True):
            self.var[edge] = lp.add_variable(f"f[{_edge_label(edge)}]")
        inflow, outflow = defaultdict(list), defaultdict(list)
        for edge in g.edges(include_return=True):
            outflow[edge[0]].append(self.var[edge])
            inflow[edge[1]].append(self.var[edge])
        for x in sorted(set(inflow) | set(outflow), key=lambda x: (x[1], str(x[0]))):
            coeffs = defaultdict(float)
            for name in inflow[x]:
                coeffs[name] += 1.0
            for name in outflow[x]:
                coeffs[name] -= 1.0
            lp.add_constraint(coeffs, "==", 0.0, name=f"conserve[{_label(x)}]")
        self.link_row = {}
        for link in net.links.values():
            u, v = link.id
            up, low = ((u, UPPER), (v, UPPER)), ((u, LOWER), (v, LOWER))
            self.link_row[link.id] = lp.add_constraint(
                {self.var[up]: 1.0, self.var[low]: 1.0}, "<=", link.capacity,
                name=f"cap_link[{u}->{v}]")
        self.node_row = {}
        for (w, _), _ in g.cross_edges:
            cross = ((w, UPPER), (w, LOWER))
            self.node_row[w] = lp.add_constraint(
                {self.var[cross]: 1.0}, "<=", net.node(w).processing_capacity,
                name=f"cap_node[{w}]")
        self.return_row = lp.add_constraint({self.var[g.return_arc]: 1.0}, "<=",
                                            g.return_capacity, name="cap_return")
        lp.set_objective({self.var[g.return_arc]: 1.0})
        self.lp = lp

    def capacities(self) -> tuple[dict, dict]:
        links = {k: l.capacity for k, l in self.net.links.items()}
        nodes = {w: self.net.node(w).processing_capacity for w in self.node_row}
        return links, nodes

    def solve(self, link_capacity: Mapping | None = None,
              node_capacity: Mapping | None = None) -> FlowSolution:
        """Solve with the given capacity overrides (missing entries keep the
        network's own values)."""
        rhs = {}
        links, nodes = self.capacities()
        for key, cap in (link_capacity or {}).items():
            key = tuple(key)
            if key not in self.link_row:
                raise NetworkError(f"unknown link {key!r}")
            links[key] = cap
            rhs[self.link_row[key]] = cap
        for key, cap in (node_capacity or {}).items():
            if key not in self.node_row:
                if cap > 0:
                    raise NetworkError(f"node {key!r} has no processing in the base network")
                continue
            nodes[key] = cap
            rhs[self.node_row[key]] = cap
        if min(list(links.values()) + list(nodes.values()) + [0.0]) < 0:
            raise NetworkError("capacities must be non-negative")
        rhs[self.return_row] = sum(links.values()) + sum(nodes.values()) + 1.0
        res = solve_lp(self.lp, rhs)
        if not res.optimal:
            raise LPError(res)
        flows = {edge: max(0.0, res.primal[name]) for edge, name in self.var.items()}
        return FlowSolution(
            value=res.objective,
            edge_flows=flows,
            link_duals={k: res.dual[row] for k, row in self.link_row.items()},
            node_duals={w: res.dual[row] for w, row in self.node_row.items()},
            layered=self.layered,
        )

    def value(self, link_capacity: Mapping | None = None,
              node_capacity: Mapping | None = None) -> float:
        return self.solve(link_capacity, node_capacity).value


def max_flow(net: ComputingNetwork, s: str, t: str) -> FlowSolution:
    """Maximum ``s``-``t`` computation flow with per-resource shadow prices.

    >>> from compnet.testkit.fixtures import fixture
    >>> round(max_flow(fixture("fig1").network, "s", "t").value, 6)
    4.0
    """
    return FlowModel(net, s, t).solve()


# -- decomposition -----------------------------------------------------------

@dataclass(frozen=True)
class ComputationPathFlow:
    """Flow along a walk from ``s`` to ``t`` processed at ``processor``.

    ``links`` lists the walk's links in order; the first ``split`` of them are
    traversed before processing.
    """

    links: tuple
    processor: str
    amount: float
    split: int

    @property
    def nodes(self) -> tuple:
        if not self.links:
            return (self.processor,)
        return (self.links[0][0],) + tuple(v for _, v in self.links)

    def __str__(self):
        return f"({'-'.join(self.nodes)}, {self.processor}) x {self.amount:g}"


def decompose(sol: FlowSolution) -> list[ComputationPathFlow]:
    """Split a layered flow into computation paths, discarding cycles."""
    g = sol.layered
    residual = {e: f for e, f in sol.edge_flows.items() if e != g.return_arc and f > _STRIP_TOL}
    out_edges = defaultdict(list)
    for e in residual:
        out_edges[e[0]].append(e)

    def next_edge(x):
        edges = out_edges[x]
        while edges and residual.get(edges[0], 0.0) <= _STRIP_TOL:
            edges.pop(0)
        return edges[0] if edges else None

    paths = []
    while next_edge(g.source) is not None:
        walk, position = [g.source], {g.source: 0}
        edges = []
        while walk[-1] != g.sink:
            e = next_edge(walk[-1])
            if e is None:
                leftover = sum(residual.get(x, 0.0) for x in out_edges[g.source])
                if leftover > TOL:
                    raise ValueError(f"flow conservation violated at {walk[-1]!r}")
                walk = None
                break
            head = e[1]
            if head in position:
                # strip the cycle closed by e, then resume from its start
                cycle = edges[position[head]:] + [e]
                amount = min(residual[c] for c in cycle)
                for c in cycle:
                    residual[c] -= amount
                for x in walk[position[head] + 1:]:
                    del position[x]
                del walk[position[head] + 1:]
                del edges[position[head]:]
                continue
            position[head] = len(walk)
            walk.append(head)
            edges.append(e)
        if walk is None:
            break
        amount = min(residual[e] for e in edges)
        for e in edges:
            residual[e] -= amount
        paths.append(_to_computation_path(g, edges, amount))
    return paths


def _to_computation_path(g: LayeredGraph, edges, amount) -> ComputationPathFlow:
    links, processor, split = [], None, 0
    for e in edges:
        kind, key = g.edge_resource[e]
        if kind == "node":
            processor, split = key, len(links)
        else:
            links.append(key)
    return ComputationPathFlow(tuple(links), processor, amount, split)


# -- path-based oracle -------------------------------------------------------

class PathLimitExceeded(RuntimeError):
    pass


def enumerate_layered_paths(g: LayeredGraph, limit: int = 10_000) -> list[list]:
    """All simple ``s -> t'`` paths of the layered graph (edge lists)."""
    adj = defaultdict(list)
    for e in g.edges():
        if g.capacity[e] > 0:
            adj[e[0]].append(e)
    paths = []
    stack = [(g.source, iter(adj[g.source]))]
    on_path = {g.source}
    edges: list = []
    while stack:
        node, it = stack[-1]
        e = next(it, None)
        if e is None:
            stack.pop()
            on_path.discard(node)
            if edges:
                edges.pop()
            continue
        head = e[1]
        if head in on_path:
            continue
        if head == g.sink:
            paths.append(edges + [e])
            if len(paths) > limit:
                raise PathLimitExceeded(f"more than {limit} layered paths")
            continue
        on_path.add(head)
        edges.append(e)
        stack.append((head, iter(adj[head])))
    return paths


def max_flow_path_oracle(net: ComputingNetwork, s: str, t: str, limit: int = 10_000) -> float:
    """Max flow from the path formulation: one variable per computation path,
    link rows counting both traversals of a link, node rows per processor."""
    g = build_layered(net, s, t)
    paths = enumerate_layered_paths(g, limit)
    if not paths:
        return 0.0
    lp = LinearProgram("max")
    rows: dict = defaultdict(dict)
    for i, p in enumerate(paths):
        name = lp.add_variable(f"x{i}")
        for e in p:
            res = g.edge_resource[e]
            rows[res][name] = rows[res].get(name, 0.0) + 1.0
    for (kind, key), coeffs in rows.items():
        cap = net.link(key).capacity if kind == "link" else net.node(key).processing_capacity
        lp.add_constraint(coeffs, "<=", cap)
    lp.set_objective({f"x{i}": 1.0 for i in range(len(paths))})
    return solve_lp(lp).raise_for_status().objective


# -- classical min cut -------------------------------------------------------

def classical_min_cut(costs: Mapping, s, t, eps: float = 1e-9) -> tuple[set, float]:
    """Minimum ``s``-``t`` edge cut of a plain digraph (Edmonds-Karp).

    ``costs`` maps ``(u, v)`` edges to non-negative costs.  Returns the cut
    edges (tails reachable from ``s`` in the final residual graph) and their
    total cost.

    >>> classical_min_cut({("s", "t"): 5.0}, "s", "t")
    ({('s', 't')}, 5.0)
    """
    if s == t:
        raise ValueError("source and sink must differ")
    residual: dict = defaultdict(lambda: defaultdict(float))
    for (u, v), c in costs.items():
        if c < 0:
            raise ValueError(f"negative cost on {(u, v)!r}")
        residual[u][v] += c
        residual[v][u] += 0.0
    while True:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v, r in residual[u].items():
                if r > eps and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            break
        path, v = [], t
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        delta = min(residual[u][v] for u, v in path)
        if not math.isfinite(delta):
            raise ValueError("unbounded s-t capacity")
        for u, v in path:
            residual[u][v] -= delta
            residual[v][u] += delta
    side = set(parent)
    cut = {(u, v) for (u, v) in costs if u in side and v not in side}
    return cut, float(sum(costs[e] for e in cut))
