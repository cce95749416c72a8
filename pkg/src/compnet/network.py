"""Computing-network data model.

A computing network is a directed graph whose links carry a transmission
capacity and whose nodes carry a processing capacity.  Flow from ``s`` to
``t`` must be processed at exactly one node along its walk; the two-layer
expansion built by :func:`build_layered` turns that requirement into plain
reachability from ``(s, UPPER)`` to ``(t, LOWER)``.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

UPPER = 0
LOWER = 1

LinkId = tuple  # (from, to)


class NetworkError(ValueError):
    """Invalid topology document or network contents."""


@dataclass(frozen=True)
class Node:
    id: str
    processing_capacity: float = 0.0
    interdiction_cost: float | None = None

    @property
    def is_computation(self) -> bool:
        return self.processing_capacity > 0

    @property
    def cost(self) -> float:
        return self.processing_capacity if self.interdiction_cost is None else self.interdiction_cost


@dataclass(frozen=True)
class Link:
    source: str
    target: str
    capacity: float
    interdiction_cost: float | None = None

    @property
    def id(self) -> LinkId:
        return (self.source, self.target)

    @property
    def cost(self) -> float:
        return self.capacity if self.interdiction_cost is None else self.interdiction_cost


def _check_nonneg(value, what):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise NetworkError(f"{what} must be a finite number, got {value!r}")
    if value < 0:
        raise NetworkError(f"{what} must be non-negative, got {value}")


class ComputingNetwork:
    """Immutable directed network with link and node capacities.

    Links are keyed by their ``(from, to)`` pair.  A link whose capacity has
    been driven to zero by :func:`apply_removal` is kept in the network but
    every solver treats it as absent.
    """

    def __init__(self, nodes: Iterable[Node] = (), links: Iterable[Link] = ()):
        node_map: dict[str, Node] = {}
        for node in nodes:
            if node.id in node_map:
                raise NetworkError(f"duplicate node id {node.id!r}")
            _check_nonneg(node.processing_capacity, f"processing_capacity of {node.id!r}")
            if node.interdiction_cost is not None:
                _check_nonneg(node.interdiction_cost, f"interdiction_cost of {node.id!r}")
            node_map[node.id] = node
        link_map: dict[LinkId, Link] = {}
        for link in links:
            for end in link.id:
                if end not in node_map:
                    raise NetworkError(f"link {link.id} references unknown node {end!r}")
            if link.source == link.target:
                raise NetworkError(f"self-loop on {link.source!r}")
            if link.id in link_map:
                raise NetworkError(f"duplicate link {link.id}")
            _check_nonneg(link.capacity, f"capacity of link {link.id}")
            if link.interdiction_cost is not None:
                _check_nonneg(link.interdiction_cost, f"interdiction_cost of link {link.id}")
            link_map[link.id] = link
        self._nodes = node_map
        self._links = link_map

    @property
    def nodes(self) -> Mapping[str, Node]:
        return dict(self._nodes)

    @property
    def links(self) -> Mapping[LinkId, Link]:
        return dict(self._links)

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise NetworkError(f"unknown node {node_id!r}") from None

    def link(self, link_id: LinkId) -> Link:
        try:
            return self._links[tuple(link_id)]
        except KeyError:
            raise NetworkError(f"unknown link {link_id!r}") from None

    def node_ids(self) -> list[str]:
        return list(self._nodes)

    def link_ids(self) -> list[LinkId]:
        return list(self._links)

    def computation_nodes(self) -> list[str]:
        return [n.id for n in self._nodes.values() if n.is_computation]

    def total_capacity(self) -> float:
        return (sum(l.capacity for l in self._links.values())
                + sum(n.processing_capacity for n in self._nodes.values()))

    def with_capacities(self, link_capacity: Mapping[LinkId, float] | None = None,
                        node_capacity: Mapping[str, float] | None = None) -> "ComputingNetwork":
        """Copy with some capacities replaced; interdiction costs are pinned first
        so that a capacity change never silently changes a defaulted cost."""
        link_capacity = link_capacity or {}
        node_capacity = node_capacity or {}
        nodes = [Node(n.id, node_capacity.get(n.id, n.processing_capacity), n.cost)
                 if n.id in node_capacity else n for n in self._nodes.values()]
        links = [Link(l.source, l.target, link_capacity[l.id], l.cost)
                 if l.id in link_capacity else l for l in self._links.values()]
        return ComputingNetwork(nodes, links)

    def __eq__(self, other):
        if not isinstance(other, ComputingNetwork):
            return NotImplemented
        return self._nodes == other._nodes and self._links == other._links

    def __repr__(self):
        return (f"ComputingNetwork({len(self._nodes)} nodes, {len(self._links)} links, "
                f"{len(self.computation_nodes())} computation nodes)")


# -- serialization -----------------------------------------------------------

def network_from_dict(doc: Mapping) -> ComputingNetwork:
    if not isinstance(doc, Mapping):
        raise NetworkError("topology document must be a JSON object")
    try:
        raw_nodes = doc.get("nodes", [])
        raw_links = doc.get("links", [])
        nodes = [Node(str(n["id"]), n["processing_capacity"], n.get("interdiction_cost"))
                 for n in raw_nodes]
        links = []
        for l in raw_links:
            cap = l["capacity"]
            if isinstance(cap, (int, float)) and not isinstance(cap, bool) and cap <= 0:
                raise NetworkError(f"link ({l['from']}, {l['to']}) must have positive capacity")
            links.append(Link(str(l["from"]), str(l["to"]), cap, l.get("interdiction_cost")))
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"malformed topology document: {exc!r}") from exc
    return ComputingNetwork(nodes, links)


def load_network(text: str) -> ComputingNetwork:
    """Parse a topology JSON document.

    Raises :class:`NetworkError` for malformed JSON or invariant violations.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"cannot parse topology: {exc}") from exc
    return network_from_dict(doc)


def network_to_dict(net: ComputingNetwork) -> dict:
    nodes = []
    for n in net.nodes.values():
        entry = {"id": n.id, "processing_capacity": n.processing_capacity}
        if n.interdiction_cost is not None:
            entry["interdiction_cost"] = n.interdiction_cost
        nodes.append(entry)
    links = []
    for l in net.links.values():
        entry = {"from": l.source, "to": l.target, "capacity": l.capacity}
        if l.interdiction_cost is not None:
            entry["interdiction_cost"] = l.interdiction_cost
        links.append(entry)
    return {"nodes": nodes, "links": links}


def dump_network(net: ComputingNetwork, indent: int | None = 2) -> str:
    return json.dumps(network_to_dict(net), indent=indent)


# -- layered graph -----------------------------------------------------------

@dataclass(frozen=True)
class LayeredGraph:
    """Two copies of the network joined at computation nodes.

    Layered nodes are ``(node_id, UPPER)`` for unprocessed traffic and
    ``(node_id, LOWER)`` for processed traffic.  ``edge_resource`` maps each
    layered edge to the original resource whose capacity it consumes:
    ``("link", (u, v))`` or ``("node", w)``.
    """

    source: tuple
    sink: tuple
    upper_edges: tuple
    lower_edges: tuple
    cross_edges: tuple
    return_arc: tuple
    return_capacity: float
    edge_resource: Mapping = field(repr=False)
    capacity: Mapping = field(repr=False)

    @property
    def nodes(self) -> list:
        seen = {}
        for edge in self.edges():
            for x in edge:
                seen.setdefault(x, None)
        return list(seen)

    def edges(self, include_return: bool = False) -> list:
        out = list(self.upper_edges) + list(self.lower_edges) + list(self.cross_edges)
        if include_return:
            out.append(self.return_arc)
        return out

    def successors(self, removed: Iterable = (), include_zero: bool = False) -> dict:
        """Adjacency of the layered graph without the return arc.

        Edges in ``removed`` and (unless ``include_zero``) edges whose resource
        has zero capacity are left out.
        """
        removed = set(removed)
        adj: dict = {}
        for edge in self.edges():
            if edge in removed or (not include_zero and self.capacity[edge] <= 0):
                continue
            adj.setdefault(edge[0], []).append(edge[1])
        return adj

    def reachable(self, removed: Iterable = ()) -> set:
        return _search(self.successors(removed), self.source)


def _search(adj: Mapping, start) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def build_layered(net: ComputingNetwork, s: str, t: str) -> LayeredGraph:
    """Expand ``net`` into its two-layer graph for the pair ``(s, t)``.

    >>> net = ComputingNetwork([Node("s"), Node("u", 1.0), Node("t")],
    ...                        [Link("s", "u", 1.0), Link("u", "t", 1.0)])
    >>> g = build_layered(net, "s", "t")
    >>> g.cross_edges
    ((('u', 0), ('u', 1)),)
    >>> g.return_arc
    (('t', 1), ('s', 0))
    """
    net.node(s)
    net.node(t)
    if s == t:
        raise NetworkError("source and destination must differ")
    upper, lower, cross = [], [], []
    resource, capacity = {}, {}
    for link in net.links.values():
        u, v = link.id
        for layer, bucket in ((UPPER, upper), (LOWER, lower)):
            edge = ((u, layer), (v, layer))
            bucket.append(edge)
            resource[edge] = ("link", link.id)
            capacity[edge] = link.capacity
    for node in net.nodes.values():
        if node.is_computation:
            edge = ((node.id, UPPER), (node.id, LOWER))
            cross.append(edge)
            resource[edge] = ("node", node.id)
            capacity[edge] = node.processing_capacity
    ret_cap = net.total_capacity() + 1.0
    ret = ((t, LOWER), (s, UPPER))
    capacity[ret] = ret_cap
    return LayeredGraph((s, UPPER), (t, LOWER), tuple(upper), tuple(lower), tuple(cross), ret,
                        ret_cap, resource, capacity)


def map_cut_to_layered(cut) -> set:
    """Layered edges removed by a cut: both copies of every cut link plus the
    cross edge of every cut node.  ``cut`` needs ``links`` and ``nodes``."""
    out = set()
    for u, v in cut.links:
        out.add(((u, UPPER), (v, UPPER)))
        out.add(((u, LOWER), (v, LOWER)))
    for w in cut.nodes:
        out.add(((w, UPPER), (w, LOWER)))
    return out


def reachable_nodes(net: ComputingNetwork, start: str, reverse: bool = False) -> set:
    """Nodes reachable from ``start`` (or reaching it, if ``reverse``) over
    links with positive capacity."""
    adj: dict = {}
    for link in net.links.values():
        if link.capacity <= 0:
            continue
        u, v = link.id
        if reverse:
            u, v = v, u
        adj.setdefault(u, []).append(v)
    return _search(adj, start)


# -- removal -----------------------------------------------------------------

@dataclass(frozen=True)
class RemovalSpec:
    """Fractions of link / node capacity removed (1.0 = removed in full)."""

    link_fractions: Mapping = field(default_factory=dict)
    node_fractions: Mapping = field(default_factory=dict)
    binary: bool = False

    def __post_init__(self):
        for key, z in list(self.link_fractions.items()) + list(self.node_fractions.items()):
            if not (0.0 <= z <= 1.0):
                raise NetworkError(f"removal fraction for {key!r} outside [0, 1]: {z}")
            if self.binary and z not in (0.0, 1.0):
                raise NetworkError(f"binary removal with fractional entry {key!r}={z}")

    @classmethod
    def from_resources(cls, fractions: Mapping, binary: bool = False) -> "RemovalSpec":
        links = {key: z for (kind, key), z in fractions.items() if kind == "link" and z > 0}
        nodes = {key: z for (kind, key), z in fractions.items() if kind == "node" and z > 0}
        return cls(links, nodes, binary)

    def fractions(self) -> dict:
        out = {("link", tuple(k)): z for k, z in self.link_fractions.items()}
        out.update({("node", k): z for k, z in self.node_fractions.items()})
        return out

    def cost(self, net: ComputingNetwork) -> float:
        return (sum(net.link(k).cost * z for k, z in self.link_fractions.items())
                + sum(net.node(k).cost * z for k, z in self.node_fractions.items()))

    def to_dict(self) -> dict:
        return {
            "links": [{"from": u, "to": v, "fraction": z} for (u, v), z in self.link_fractions.items()],
            "nodes": [{"id": k, "fraction": z} for k, z in self.node_fractions.items()],
            "binary": self.binary,
        }


def apply_removal(net: ComputingNetwork, removal: RemovalSpec) -> ComputingNetwork:
    """Scale capacities by ``1 - z``; removed links stay in the network at
    capacity 0.  Interdiction costs keep their original values."""
    link_caps = {tuple(k): net.link(k).capacity * (1.0 - z) for k, z in removal.link_fractions.items()}
    node_caps = {k: net.node(k).processing_capacity * (1.0 - z)
                 for k, z in removal.node_fractions.items()}
    return net.with_capacities(link_caps, node_caps)


# -- random instances --------------------------------------------------------

def _check_range(rng_range, what):
    lo, hi = rng_range
    if not (0 <= lo < hi) or not math.isfinite(hi):
        raise NetworkError(f"invalid {what} range {rng_range!r}")


def _draw(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    # 1 - U(0,1] keeps draws strictly above lo, so link capacities stay positive
    return lo + (hi - lo) * (1.0 - rng.random(size))


def gen_random(topology: Sequence[tuple], link_range=(0.0, 1.0), node_range=(0.0, 0.1),
               seed: int = 0, link_cost_range=None, node_cost_range=None,
               bidirectional: bool = True, nodes: Sequence[str] | None = None
               ) -> ComputingNetwork:
    """Random capacities on a fixed topology.

    Every directed link and every node draws its capacity uniformly from its
    range.  Costs equal capacities unless a cost range is given, in which case
    costs are drawn independently.  Each undirected edge becomes two links
    when ``bidirectional``.
    """
    _check_range(link_range, "link capacity")
    _check_range(node_range, "node capacity")
    if link_cost_range is not None:
        _check_range(link_cost_range, "link cost")
    if node_cost_range is not None:
        _check_range(node_cost_range, "node cost")
    rng = np.random.default_rng(seed)
    pairs = []
    for u, v in topology:
        pairs.append((str(u), str(v)))
        if bidirectional:
            pairs.append((str(v), str(u)))
    if nodes is None:
        ids = []
        for pair in pairs:
            for x in pair:
                if x not in ids:
                    ids.append(x)
    else:
        ids = [str(x) for x in nodes]
    link_caps = _draw(rng, *link_range, len(pairs))
    node_caps = _draw(rng, *node_range, len(ids))
    link_costs = _draw(rng, *link_cost_range, len(pairs)) if link_cost_range else [None] * len(pairs)
    node_costs = _draw(rng, *node_cost_range, len(ids)) if node_cost_range else [None] * len(ids)
    node_objs = [Node(i, float(c), None if k is None else float(k))
                 for i, c, k in zip(ids, node_caps, node_costs)]
    link_objs = [Link(u, v, float(c), None if k is None else float(k))
                 for (u, v), c, k in zip(pairs, link_caps, link_costs)]
    return ComputingNetwork(node_objs, link_objs)
