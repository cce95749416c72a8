"""Seeded small random networks for differential testing against the oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..network import ComputingNetwork, Link, Node


@dataclass(frozen=True)
class Instance:
    seed: int
    network: ComputingNetwork
    source: str
    target: str


def small_network(seed: int, max_nodes: int = 6, max_links: int = 10,
                  independent_costs: bool = False) -> Instance:
    """A random network with at most ``max_nodes`` nodes and ``max_links`` links.

    Capacities are multiples of 0.25 so that ties (and degenerate LPs) show
    up often.  At least one node processes.  Source is ``n0``, target ``n1``.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, max_nodes + 1))
    names = [f"n{i}" for i in range(n)]
    pairs = [(u, v) for u in names for v in names if u != v]
    k = int(rng.integers(n - 1, min(max_links, len(pairs)) + 1))
    chosen = rng.choice(len(pairs), size=k, replace=False)

    def draw():
        return float(rng.integers(1, 9)) * 0.25

    links = []
    for i in sorted(chosen):
        u, v = pairs[i]
        cost = draw() if independent_costs else None
        links.append(Link(u, v, draw(), cost))
    processing = [draw() if rng.random() < 0.5 else 0.0 for _ in names]
    if not any(processing):
        processing[int(rng.integers(n))] = draw()
    nodes = []
    for name, cap in zip(names, processing):
        cost = draw() if independent_costs and cap > 0 else None
        nodes.append(Node(name, cap, cost))
    return Instance(seed, ComputingNetwork(nodes, links), "n0", "n1")


def corpus(count: int = 100, base_seed: int = 0, **kw) -> list[Instance]:
    return [small_network(base_seed + i, **kw) for i in range(count)]
