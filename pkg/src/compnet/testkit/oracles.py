"""Brute-force references for the cut and interdiction solvers."""

from __future__ import annotations

import itertools
from types import SimpleNamespace

from ..cuts import COMMUNICATION, COMPUTATION, CutSolution, _mode, cut_value, is_cut
from ..flow import max_flow_path_oracle
from ..interdiction import OracleSizeError, interdict_oracle
from ..network import ComputingNetwork

__all__ = ["cut_oracle", "interdict_oracle", "max_flow_path_oracle", "OracleSizeError"]


def cut_oracle(net: ComputingNetwork, s: str, t: str, mode: str = "joint",
               max_resources: int = 18) -> CutSolution:
    """Minimum cut of the given mode by checking every resource subset.

    Subsets are tried in order of size so the first cut found among equally
    valued ones is a smallest one.
    """
    mode = _mode(mode)
    resources = []
    if mode != COMPUTATION:
        resources += [("link", l.id) for l in net.links.values() if l.capacity > 0]
    if mode != COMMUNICATION:
        resources += [("node", w) for w in net.computation_nodes()]
    if len(resources) > max_resources:
        raise OracleSizeError(f"{len(resources)} resources exceed the oracle limit {max_resources}")
    best = None
    for size in range(len(resources) + 1):
        for combo in itertools.combinations(resources, size):
            cut = SimpleNamespace(links=[k for kind, k in combo if kind == "link"],
                                  nodes=[k for kind, k in combo if kind == "node"])
            value = cut_value(net, cut.links, cut.nodes)
            if best is not None and value >= best.value - 1e-12:
                continue
            if is_cut(net, s, t, cut):
                best = CutSolution(frozenset(cut.links), frozenset(cut.nodes), value, mode,
                                   method="oracle")
    if best is None:
        raise ValueError(f"no {mode} cut separates {s!r} from {t!r}")
    return best
