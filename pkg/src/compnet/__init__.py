"""Computation flow in networks with link and processing capacities.

Flow must be processed at some node with processing capacity on its way from
source to destination.  The package computes maximum flows, minimum
communication / computation / joint cuts and budgeted interdictions.
"""

from .cuts import (CutSolution, approx_comm_cut, approx_joint_cut, is_cut,
                   min_comm_cut_exact, min_comp_cut_exact, min_computation_cut,
                   min_cut_exact, min_joint_cut_exact)
from .flow import (ComputationPathFlow, FlowModel, FlowSolution, classical_min_cut, decompose,
                   max_flow)
from .interdiction import (InterdictionProblem, InterdictionSolution, budget_sweep, interdict,
                           interdict_binary_exact, interdict_binary_greedy,
                           interdict_binary_greedy_cost, interdict_binary_greedy_cost_aware,
                           interdict_oracle, interdict_partial_exact, interdict_partial_greedy)
from .network import (ComputingNetwork, LayeredGraph, Link, NetworkError, Node, RemovalSpec,
                      apply_removal, build_layered, dump_network, gen_random, load_network)

__version__ = "0.1.0"

__all__ = [
    "ComputationPathFlow", "ComputingNetwork", "CutSolution", "FlowModel", "FlowSolution",
    "InterdictionProblem", "InterdictionSolution", "LayeredGraph", "Link", "NetworkError",
    "Node", "RemovalSpec", "apply_removal", "approx_comm_cut", "approx_joint_cut",
    "budget_sweep", "build_layered", "classical_min_cut", "decompose", "dump_network",
    "gen_random", "interdict", "interdict_binary_exact", "interdict_binary_greedy",
    "interdict_binary_greedy_cost", "interdict_binary_greedy_cost_aware", "interdict_oracle",
    "interdict_partial_exact", "interdict_partial_greedy", "is_cut", "load_network",
    "max_flow", "min_comm_cut_exact", "min_comp_cut_exact", "min_computation_cut",
    "min_cut_exact", "min_joint_cut_exact",
]
