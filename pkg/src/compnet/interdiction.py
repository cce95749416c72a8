"""Flow interdiction under a removal budget.

Resources are links and processing capacities, identified as
``("link", (u, v))`` and ``("node", w)``.  Binary interdiction removes a
resource in full for its cost; partial interdiction removes a fraction ``z``
for ``z`` times its cost.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .flow import FlowModel
from .lp import TOL, LinearProgram, solve_milp
from .network import LOWER, UPPER, ComputingNetwork, RemovalSpec, apply_removal, build_layered

BINARY = "binary"
PARTIAL = "partial"

Resource = tuple


def resource_label(r: Resource) -> str:
    kind, key = r
    return f"link:{key[0]}->{key[1]}" if kind == "link" else f"node:{key}"


class CostModeError(ValueError):
    """The algorithm requires interdiction costs equal to capacities."""


@dataclass(frozen=True)
class InterdictionProblem:
    network: ComputingNetwork
    source: str
    target: str
    budget: float
    mode: str = BINARY

    def __post_init__(self):
        if self.mode not in (BINARY, PARTIAL):
            raise ValueError(f"unknown interdiction mode {self.mode!r}")
        if not (self.budget >= 0) or not math.isfinite(self.budget):
            raise ValueError(f"budget must be a finite non-negative number, got {self.budget}")

    def resources(self) -> list[Resource]:
        """Resources with positive capacity, links first."""
        net = self.network
        out = [("link", l.id) for l in net.links.values() if l.capacity > 0]
        out += [("node", w) for w in net.computation_nodes()]
        return out

    def capacity(self, r: Resource) -> float:
        kind, key = r
        return (self.network.link(key).capacity if kind == "link"
                else self.network.node(key).processing_capacity)

    def cost(self, r: Resource) -> float:
        kind, key = r
        return self.network.link(key).cost if kind == "link" else self.network.node(key).cost

    def costs_equal_capacities(self, rel_tol: float = 1e-9) -> bool:
        return all(math.isclose(self.cost(r), self.capacity(r), rel_tol=rel_tol, abs_tol=1e-12)
                   for r in self.resources())

    def with_budget(self, budget: float) -> "InterdictionProblem":
        return InterdictionProblem(self.network, self.source, self.target, budget, self.mode)


@dataclass(frozen=True)
class GreedyStep:
    resource: Resource
    score: float
    amount: float
    cost: float
    flow_before: float


@dataclass
class InterdictionSolution:
    removal: RemovalSpec
    spent: float
    residual_flow: float
    optimal: bool
    method: str = ""
    trace: list = field(default_factory=list)
    objective: float | None = None

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "residual_flow": self.residual_flow,
            "spent": self.spent,
            "optimal": self.optimal,
            "removal": self.removal.to_dict(),
            "trace": [{"resource": resource_label(s.resource), "score": _json_num(s.score),
                       "amount": s.amount, "cost": s.cost, "flow_before": s.flow_before}
                      for s in self.trace],
        }
        if self.objective is not None:
            out["objective"] = self.objective
        return out


def _json_num(x):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _residual_caps(problem: InterdictionProblem, fractions: dict, use_costs: bool = False):
    links, nodes = {}, {}
    for r in problem.resources():
        base = problem.cost(r) if use_costs else problem.capacity(r)
        value = base * (1.0 - fractions.get(r, 0.0))
        (links if r[0] == "link" else nodes)[r[1]] = value
    return links, nodes


def _finish(problem, model, fractions, method, optimal, trace=(), objective=None):
    fractions = {r: z for r, z in fractions.items() if z > 0}
    binary = all(z == 1.0 for z in fractions.values())
    removal = RemovalSpec.from_resources(fractions, binary=binary)
    links, nodes = _residual_caps(problem, fractions)
    residual = max(0.0, model.value(links, nodes)) + 0.0
    spent = float(sum(problem.cost(r) * z for r, z in fractions.items()))
    return InterdictionSolution(removal, spent, residual, optimal, method, list(trace), objective)


# -- exact binary program ----------------------------------------------------

def build_interdiction_program(problem: InterdictionProblem) -> LinearProgram:
    """Integer program whose optimum is the smallest residual max flow.

    For fixed removals ``z`` the inner minimisation over potentials ``p`` and
    ``beta`` is the dual of the max-flow LP on the surviving network;
    ``beta`` carries the cut indicator of every resource that is not removed.
    """
    net = problem.network
    g = build_layered(net, problem.source, problem.target)
    lp = LinearProgram("min")
    p = {}
    for x in g.nodes + [g.source, g.sink]:
        if x not in p:
            node, layer = x
            p[x] = lp.add_variable(f"p[{node}{chr(39) if layer == LOWER else ''}]", 0.0, 1.0)
    objective, budget = {}, {}
    for r in problem.resources():
        kind, key = r
        tag = f"{key[0]}->{key[1]}" if kind == "link" else str(key)
        beta = lp.add_variable(f"beta[{tag}]", 0.0, 1.0)
        z = lp.add_variable(f"z[{tag}]", 0.0, 1.0, integral=True)
        objective[beta] = problem.capacity(r)
        budget[z] = problem.cost(r)
        if kind == "link":
            u, v = key
            for layer in (UPPER, LOWER):
                lp.add_constraint({p[(v, layer)]: 1.0, p[(u, layer)]: -1.0, beta: 1.0, z: 1.0},
                                  ">=", 0.0, name=f"edge_{'lower' if layer else 'upper'}[{tag}]")
        else:
            lp.add_constraint({p[(key, LOWER)]: 1.0, p[(key, UPPER)]: -1.0, beta: 1.0, z: 1.0},
                              ">=", 0.0, name=f"node[{tag}]")
    lp.add_constraint({p[g.source]: 1.0, p[g.sink]: -1.0}, ">=", 1.0, name="separate")
    if budget:
        lp.add_constraint(budget, "<=", problem.budget, name="budget")
    lp.set_objective(objective)
    return lp


def interdict_binary_exact(problem: InterdictionProblem, time_limit: float | None = None,
                           node_limit: int | None = None) -> InterdictionSolution:
    model = FlowModel(problem.network, problem.source, problem.target)
    resources = problem.resources()
    if not resources:
        return _finish(problem, model, {}, "exact", True, objective=model.value())
    lp = build_interdiction_program(problem)
    res = solve_milp(lp, time_limit=time_limit, node_limit=node_limit)
    if not res.has_solution:
        # no incumbent within the limits: report the untouched network
        sol = _finish(problem, model, {}, "exact", False)
        sol.objective = None
        return sol
    fractions = {}
    for r in resources:
        kind, key = r
        tag = f"{key[0]}->{key[1]}" if kind == "link" else str(key)
        if res.primal[f"z[{tag}]"] > 0.5:
            fractions[r] = 1.0
    return _finish(problem, model, fractions, "exact", res.optimal, objective=res.objective)


# -- greedy heuristics -------------------------------------------------------

def _greedy(problem: InterdictionProblem, variant: str, partial: bool, method: str
            ) -> InterdictionSolution:
    model = FlowModel(problem.network, problem.source, problem.target)
    resources = problem.resources()
    fractions: dict = {}
    remaining = problem.budget
    trace = []
    while True:
        links, nodes = _residual_caps(problem, fractions)
        sol = model.solve(links, nodes)
        if sol.value <= TOL:
            break
        if variant == "cost-aware":
            price = model.solve(*_residual_caps(problem, fractions, use_costs=True))
        else:
            price = sol
        candidates = []
        for r in resources:
            z = fractions.get(r, 0.0)
            if z >= 1.0:
                continue
            cost = problem.cost(r)
            left = cost * (1.0 - z)
            if not partial and left > remaining + 1e-12:
                continue
            if partial and remaining <= 0 and left > 0:
                continue
            q = price.link_duals[r[1]] if r[0] == "link" else price.node_duals[r[1]]
            if q <= TOL:
                continue
            if variant == "shadow":
                score = q
            elif cost <= 0:
                score = math.inf
            else:
                score = q * problem.capacity(r) / cost
            candidates.append((-score, -problem.capacity(r), resource_label(r), r, score))
        if not candidates:
            break
        _, _, _, r, score = min(candidates)
        z = fractions.get(r, 0.0)
        cost = problem.cost(r)
        left = cost * (1.0 - z)
        if left <= remaining + 1e-12:
            amount = 1.0 - z
            spent = left
        else:
            amount = remaining / cost
            spent = remaining
        fractions[r] = min(1.0, z + amount)
        remaining = max(0.0, remaining - spent)
        trace.append(GreedyStep(r, score, amount, spent, sol.value))
    return _finish(problem, model, fractions, method, False, trace)


def _require_cost_equals_capacity(problem):
    if not problem.costs_equal_capacities():
        raise CostModeError("shadow-price greedy assumes interdiction cost equals capacity; "
                            "use the cost-ratio or cost-aware variant")


def interdict_binary_greedy(problem: InterdictionProblem) -> InterdictionSolution:
    """Repeatedly remove the affordable resource with the largest shadow price.

    Ties go to the larger capacity, then to the smaller resource label.
    """
    _require_cost_equals_capacity(problem)
    return _greedy(problem, "shadow", False, "greedy")


def interdict_binary_greedy_cost(problem: InterdictionProblem) -> InterdictionSolution:
    """Greedy on shadow price x capacity / cost; zero-cost resources first."""
    return _greedy(problem, "ratio", False, "greedy-cost")


def interdict_binary_greedy_cost_aware(problem: InterdictionProblem) -> InterdictionSolution:
    """As :func:`interdict_binary_greedy_cost` but the prices come from the
    flow LP with interdiction costs in place of capacities."""
    return _greedy(problem, "cost-aware", False, "cost-aware")


_PARTIAL_VARIANTS = {"shadow": "greedy", "cost": "greedy-cost", "cost-aware": "cost-aware"}


def interdict_partial_greedy(problem: InterdictionProblem, variant: str = "shadow"
                             ) -> InterdictionSolution:
    """Partial-removal greedy; the last pick may be fractional to use up the budget."""
    if variant not in _PARTIAL_VARIANTS:
        raise ValueError(f"unknown greedy variant {variant!r}")
    if variant == "shadow":
        _require_cost_equals_capacity(problem)
    inner = {"shadow": "shadow", "cost": "ratio", "cost-aware": "cost-aware"}[variant]
    return _greedy(problem, inner, True, f"partial-{_PARTIAL_VARIANTS[variant]}")


# -- enumeration oracle ------------------------------------------------------

class OracleSizeError(RuntimeError):
    pass


def _subsets_within(costs: Sequence[float], budget: float, maximal: bool, max_nodes: int):
    """Index sets with total cost <= budget (only the maximal ones if asked)."""
    n = len(costs)
    chosen: list = []
    visited = 0

    def rec(i, spent):
        nonlocal visited
        visited += 1
        if visited > max_nodes:
            raise OracleSizeError(f"enumeration exceeded {max_nodes} search nodes")
        if i == n:
            if maximal:
                left = budget - spent
                if any(j not in chosen and costs[j] <= left + 1e-12 for j in range(n)):
                    return
            yield list(chosen)
            return
        if spent + costs[i] <= budget + 1e-12:
            chosen.append(i)
            yield from rec(i + 1, spent + costs[i])
            chosen.pop()
        yield from rec(i + 1, spent)

    yield from rec(0, 0.0)


def interdict_oracle(problem: InterdictionProblem, max_evaluations: int = 50_000
                     ) -> InterdictionSolution:
    """Certified optimum by enumeration.

    Binary: every maximal affordable removal set (removing more never raises
    the max flow).  Partial: every vertex of the budget polytope, i.e. a set
    removed in full plus at most one resource taking the leftover budget.
    The residual max flow is concave in the removal fractions, so its
    minimum over the polytope sits at one of those vertices.  Zero-cost
    resources are removed up front.

    Raises
    ------
    OracleSizeError
        If more than ``max_evaluations`` max-flow solves would be needed.
    """
    model = FlowModel(problem.network, problem.source, problem.target)
    free = [r for r in problem.resources() if problem.cost(r) <= 0]
    candidates = [r for r in problem.resources() if problem.cost(r) > 0]
    if problem.mode == BINARY:
        candidates = [r for r in candidates if problem.cost(r) <= problem.budget + 1e-12]
    costs = [problem.cost(r) for r in candidates]
    base = {r: 1.0 for r in free}
    best, best_value = None, math.inf
    evaluations = 0

    def consider(fractions):
        nonlocal best, best_value, evaluations
        evaluations += 1
        if evaluations > max_evaluations:
            raise OracleSizeError(f"oracle needs more than {max_evaluations} max-flow solves")
        value = model.value(*_residual_caps(problem, fractions))
        if value < best_value - 1e-12:
            best, best_value = dict(fractions), value

    subsets = _subsets_within(costs, problem.budget, problem.mode == BINARY,
                              max_nodes=50 * max_evaluations)
    if problem.mode == BINARY:
        for idx in subsets:
            consider({**base, **{candidates[i]: 1.0 for i in idx}})
    else:
        for idx in subsets:
            fractions = {**base, **{candidates[i]: 1.0 for i in idx}}
            left = problem.budget - sum(costs[i] for i in idx)
            inside = set(idx)
            extend = [j for j in range(len(candidates))
                      if j not in inside and costs[j] > left > 0]
            # with leftover budget, a fractional extension dominates the bare set
            if not extend:
                consider(fractions)
            for j in extend:
                consider({**fractions, candidates[j]: left / costs[j]})
    return _finish(problem, model, best, "oracle", True)


def interdict_partial_exact(problem: InterdictionProblem, max_evaluations: int = 50_000
                            ) -> InterdictionSolution:
    """Optimal partial interdiction for small instances (vertex enumeration)."""
    if problem.mode != PARTIAL:
        problem = InterdictionProblem(problem.network, problem.source, problem.target,
                                      problem.budget, PARTIAL)
    sol = interdict_oracle(problem, max_evaluations)
    sol.method = "exact"
    return sol


# -- dispatch and sweeps -----------------------------------------------------

METHODS = ("exact", "greedy", "greedy-cost", "cost-aware", "oracle")


def interdict(problem: InterdictionProblem, method: str = "exact",
              time_limit: float | None = None, node_limit: int | None = None
              ) -> InterdictionSolution:
    if method not in METHODS:
        raise ValueError(f"unknown interdiction method {method!r}; choose from {METHODS}")
    if problem.mode == PARTIAL:
        if method == "exact":
            return interdict_partial_exact(problem)
        if method == "oracle":
            return interdict_oracle(problem)
        variant = {"greedy": "shadow", "greedy-cost": "cost", "cost-aware": "cost-aware"}[method]
        return interdict_partial_greedy(problem, variant)
    if method == "exact":
        return interdict_binary_exact(problem, time_limit=time_limit, node_limit=node_limit)
    if method == "oracle":
        return interdict_oracle(problem)
    if method == "greedy":
        return interdict_binary_greedy(problem)
    if method == "greedy-cost":
        return interdict_binary_greedy_cost(problem)
    return interdict_binary_greedy_cost_aware(problem)


SWEEP_FIELDS = ("budget", "method", "residual_flow", "spent", "optimal")


@dataclass(frozen=True)
class SweepRow:
    budget: float
    method: str
    residual_flow: float
    spent: float
    optimal: bool


def budget_sweep(problem: InterdictionProblem, budgets: Iterable[float],
                 methods: Sequence[str] = ("exact",), time_limit: float | None = None
                 ) -> list[SweepRow]:
    rows = []
    for b in sorted(budgets):
        p = problem.with_budget(b)
        for m in methods:
            sol = interdict(p, m, time_limit=time_limit)
            rows.append(SweepRow(b, m, sol.residual_flow, sol.spent, sol.optimal))
    return rows


def sweep_to_csv(rows: Iterable[SweepRow], digits: int = 6) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_FIELDS)
    for r in rows:
        writer.writerow([f"{r.budget:.{digits}f}", r.method, f"{r.residual_flow:.{digits}f}",
                         f"{r.spent:.{digits}f}", str(r.optimal).lower()])
    return buf.getvalue()


def sweep_to_json(rows: Iterable[SweepRow]) -> str:
    return json.dumps([{k: getattr(r, k) for k in SWEEP_FIELDS} for r in rows], indent=2)


def budget_grid(spec: str) -> list[float]:
    """Parse ``lo:hi:step`` into an inclusive grid; an empty string gives []."""
    if not spec.strip():
        return []
    try:
        lo, hi, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise ValueError(f"budget grid must look like lo:hi:step, got {spec!r}") from None
    if step <= 0 or lo < 0:
        raise ValueError("budget grid needs lo >= 0 and step > 0")
    if hi < lo:
        return []
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + i * step, 12) for i in range(n + 1)]
