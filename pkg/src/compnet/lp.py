"""Small linear / mixed-integer programming layer.

Models are assembled with named variables and sparse rows, then handed to
the HiGHS solvers shipped with SciPy.  Dual values are reported in the
sense of the model's own objective: ``dual[c]`` is the rate of change of
the optimal objective per unit increase of the right-hand side of ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, linprog, milp

FEAS_TOL = 1e-7
TOL = 1e-6

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
LIMIT = "iteration-limit"

_SENSES = ("<=", "==", ">=")


class LPError(RuntimeError):
    """Raised when a solve does not end in an optimal state."""

    def __init__(self, result: "SolveResult"):
        super().__init__(f"solver returned {result.status}: {result.message}")
        self.result = result


@dataclass(frozen=True)
class Variable:
    name: str
    lb: float = 0.0
    ub: float = math.inf
    integral: bool = False


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: Mapping[str, float]
    sense: str
    rhs: float


@dataclass
class SolveResult:
    status: str
    objective: float = math.nan
    primal: dict = field(default_factory=dict)
    dual: dict = field(default_factory=dict)
    # (lower, upper) bound multipliers per variable, same sign convention as dual
    bound_dual: dict = field(default_factory=dict)
    bound: float = math.nan
    message: str = ""

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL

    @property
    def has_solution(self) -> bool:
        return bool(self.primal)

    def raise_for_status(self) -> "SolveResult":
        if not self.optimal:
            raise LPError(self)
        return self


class LinearProgram:
    """A linear program with named variables and sparse constraint rows.

    >>> lp = LinearProgram("max")
    >>> lp.add_variable("x")
    'x'
    >>> lp.add_constraint({"x": 1.0}, "<=", 3.0, name="cap")
    'cap'
    >>> lp.set_objective({"x": 1.0})
    >>> res = solve_lp(lp)
    >>> round(res.objective, 6), round(res.dual["cap"], 6)
    (3.0, 1.0)
    """

    def __init__(self, sense: str = "min"):
        if sense not in ("min", "max"):
            raise ValueError(f"objective sense must be 'min' or 'max', got {sense!r}")
        self.sense = sense
        self.variables: list[Variable] = []
        self.constraints: list[Constraint] = []
        self.objective: dict[str, float] = {}
        self._var_index: dict[str, int] = {}
        self._con_index: dict[str, int] = {}
        self._compiled = None

    # -- construction ------------------------------------------------------
    def add_variable(self, name: str, lb: float = 0.0, ub: float = math.inf,
                     integral: bool = False) -> str:
        if name in self._var_index:
            raise ValueError(f"duplicate variable {name!r}")
        if lb > ub:
            raise ValueError(f"variable {name!r}: lower bound {lb} exceeds upper bound {ub}")
        self._var_index[name] = len(self.variables)
        self.variables.append(Variable(name, float(lb), float(ub), bool(integral)))
        self._compiled = None
        return name

    def add_constraint(self, coeffs: Mapping[str, float], sense: str, rhs: float,
                       name: str | None = None) -> str:
        if sense not in _SENSES:
            raise ValueError(f"unknown relation {sense!r}")
        if name is None:
            name = f"c{len(self.constraints)}"
        if name in self._con_index:
            raise ValueError(f"duplicate constraint {name!r}")
        for var in coeffs:
            if var not in self._var_index:
                raise KeyError(f"constraint {name!r} references unknown variable {var!r}")
        if not math.isfinite(rhs):
            raise ValueError(f"constraint {name!r} has non-finite rhs")
        self._con_index[name] = len(self.constraints)
        self.constraints.append(Constraint(name, dict(coeffs), sense, float(rhs)))
        self._compiled = None
        return name

    def set_objective(self, coeffs: Mapping[str, float], sense: str | None = None) -> None:
        for var in coeffs:
            if var not in self._var_index:
                raise KeyError(f"objective references unknown variable {var!r}")
        if sense is not None:
            if sense not in ("min", "max"):
                raise ValueError(f"objective sense must be 'min' or 'max', got {sense!r}")
            self.sense = sense
        self.objective = dict(coeffs)
        self._compiled = None

    # -- inspection --------------------------------------------------------
    @property
    def num_integral(self) -> int:
        return sum(v.integral for v in self.variables)

    def variable_names(self) -> list[str]:
        return [v.name for v in self.variables]

    def constraint(self, name: str) -> Constraint:
        return self.constraints[self._con_index[name]]

    def to_lp_text(self) -> str:
        """Human-readable dump in a CPLEX-LP-like layout."""

        def row(coeffs):
            terms = []
            for var, a in coeffs.items():
                sign = "-" if a < 0 else "+"
                terms.append(f"{sign} {abs(a):g} {var}")
            text = " ".join(terms) or "0"
            return text[2:] if text.startswith("+ ") else text

        lines = ["Maximize" if self.sense == "max" else "Minimize", f" obj: {row(self.objective)}",
                 "Subject To"]
        for c in self.constraints:
            rel = {"<=": "<=", ">=": ">=", "==": "="}[c.sense]
            lines.append(f" {c.name}: {row(c.coeffs)} {rel} {c.rhs:g}")
        lines.append("Bounds")
        for v in self.variables:
            lo = "-inf" if v.lb == -math.inf else f"{v.lb:g}"
            hi = "+inf" if v.ub == math.inf else f"{v.ub:g}"
            lines.append(f" {lo} <= {v.name} <= {hi}")
        ints = [v.name for v in self.variables if v.integral]
        if ints:
            lines.append("General")
            lines.append(" " + " ".join(ints))
        lines.append("End")
        return "\n".join(lines) + "\n"

    # -- matrix form -------------------------------------------------------
    def _compile(self):
        if self._compiled is not None:
            return self._compiled
        n = len(self.variables)
        c = np.zeros(n)
        for var, a in self.objective.items():
            c[self._var_index[var]] += a
        rows, cols, vals = [], [], []
        for i, con in enumerate(self.constraints):
            for var, a in con.coeffs.items():
                rows.append(i)
                cols.append(self._var_index[var])
                vals.append(a)
        A = sparse.csr_array((vals, (rows, cols)), shape=(len(self.constraints), n))
        senses = np.array([con.sense for con in self.constraints], dtype=object)
        rhs = np.array([con.rhs for con in self.constraints], dtype=float)
        lb = np.array([v.lb for v in self.variables], dtype=float)
        ub = np.array([v.ub for v in self.variables], dtype=float)
        integrality = np.array([1 if v.integral else 0 for v in self.variables])
        self._compiled = (c, A, senses, rhs, lb, ub, integrality)
        return self._compiled

    def rhs_vector(self, overrides: Mapping[str, float] | None = None) -> np.ndarray:
        rhs = self._compile()[3].copy()
        if overrides:
            for name, value in overrides.items():
                rhs[self._con_index[name]] = value
        return rhs


def _split_rows(A, senses, rhs):
    le = senses == "<="
    ge = senses == ">="
    eq = senses == "=="
    ub_rows = np.flatnonzero(le | ge)
    sign = np.where(ge[ub_rows], -1.0, 1.0)
    A_ub = sparse.diags_array(sign) @ A[ub_rows] if len(ub_rows) else None
    b_ub = sign * rhs[ub_rows] if len(ub_rows) else None
    eq_rows = np.flatnonzero(eq)
    A_eq = A[eq_rows] if len(eq_rows) else None
    b_eq = rhs[eq_rows] if len(eq_rows) else None
    return ub_rows, sign, A_ub, b_ub, eq_rows, A_eq, b_eq


def solve_lp(lp: LinearProgram, rhs: Mapping[str, float] | None = None) -> SolveResult:
    """Solve a continuous LP; ``rhs`` optionally overrides named right-hand sides.

    Integrality flags are rejected: use :func:`solve_milp` for those.
    """
    if lp.num_integral:
        raise ValueError("solve_lp called on a model with integral variables")
    c, A, senses, _, lb, ub, _ = lp._compile()
    b = lp.rhs_vector(rhs)
    flip = -1.0 if lp.sense == "max" else 1.0
    ub_rows, sign, A_ub, b_ub, eq_rows, A_eq, b_eq = _split_rows(A, senses, b)
    res = linprog(flip * c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=np.column_stack([lb, ub]), method="highs")
    if res.status == 2:
        return SolveResult(INFEASIBLE, message=res.message)
    if res.status == 3:
        return SolveResult(UNBOUNDED, message=res.message)
    if res.status != 0:
        return SolveResult(LIMIT, message=res.message)

    names = lp.variable_names()
    primal = dict(zip(names, res.x.tolist()))
    dual = {}
    # HiGHS marginals are d(min objective)/d(b); map back to the model's rows and sense
    if len(ub_rows):
        for k, i in enumerate(ub_rows):
            dual[lp.constraints[i].name] = float(flip * sign[k] * res.ineqlin.marginals[k])
    if len(eq_rows):
        for k, i in enumerate(eq_rows):
            dual[lp.constraints[i].name] = float(flip * res.eqlin.marginals[k])
    bound_dual = {
        name: (float(flip * lo), float(flip * hi))
        for name, lo, hi in zip(names, res.lower.marginals, res.upper.marginals)
    }
    return SolveResult(OPTIMAL, objective=float(flip * res.fun), primal=primal, dual=dual,
                       bound_dual=bound_dual, bound=float(flip * res.fun), message=res.message)


def solve_milp(lp: LinearProgram, time_limit: float | None = None,
               node_limit: int | None = None) -> SolveResult:
    """Solve a mixed-integer model by branch and bound (HiGHS).

    On hitting a limit the status is ``iteration-limit``; ``primal`` then holds
    the best incumbent if one was found and ``bound`` the best dual bound.
    """
    if not lp.num_integral:
        raise ValueError("solve_milp requires at least one integral variable")
    for v in lp.variables:
        if v.integral and not (math.isfinite(v.lb) and math.isfinite(v.ub)):
            raise ValueError(f"integral variable {v.name!r} must be bounded")
    c, A, senses, rhs, lb, ub, integrality = lp._compile()
    flip = -1.0 if lp.sense == "max" else 1.0
    cons = []
    if A.shape[0]:
        lo = np.where(senses == "<=", -np.inf, rhs)
        hi = np.where(senses == ">=", np.inf, rhs)
        cons.append(LinearConstraint(A, lo, hi))
    options = {}
    if time_limit is not None:
        options["time_limit"] = float(time_limit)
    if node_limit is not None:
        options["node_limit"] = int(node_limit)
    res = milp(flip * c, constraints=cons, integrality=integrality, bounds=Bounds(lb, ub),
               options=options)
    if res.status == 2:
        return SolveResult(INFEASIBLE, message=res.message)
    if res.status == 3:
        return SolveResult(UNBOUNDED, message=res.message)
    bound = getattr(res, "mip_dual_bound", None)
    bound = float(flip * bound) if bound is not None else math.nan
    if res.x is None:
        return SolveResult(LIMIT, bound=bound, message=res.message)
    x = res.x.copy()
    x[integrality == 1] = np.round(x[integrality == 1])
    primal = dict(zip(lp.variable_names(), x.tolist()))
    status = OPTIMAL if res.status == 0 else LIMIT
    return SolveResult(status, objective=float(flip * res.fun), primal=primal, bound=bound,
                       message=res.message)


def relax(lp: LinearProgram) -> LinearProgram:
    """Copy of ``lp`` with every integrality flag dropped."""
    out = LinearProgram(lp.sense)
    for v in lp.variables:
        out.add_variable(v.name, v.lb, v.ub, integral=False)
    for con in lp.constraints:
        out.add_constraint(con.coeffs, con.sense, con.rhs, con.name)
    out.set_objective(lp.objective)
    return out


def is_feasible(lp: LinearProgram, x: Mapping[str, float], tol: float = FEAS_TOL) -> bool:
    for v in lp.variables:
        val = x[v.name]
        if val < v.lb - tol or val > v.ub + tol:
            return False
        if v.integral and abs(val - round(val)) > tol:
            return False
    for con in lp.constraints:
        lhs = sum(a * x[var] for var, a in con.coeffs.items())
        if con.sense == "<=" and lhs > con.rhs + tol:
            return False
        if con.sense == ">=" and lhs < con.rhs - tol:
            return False
        if con.sense == "==" and abs(lhs - con.rhs) > tol:
            return False
    return True


def objective_value(lp: LinearProgram, x: Mapping[str, float]) -> float:
    return sum(a * x[var] for var, a in lp.objective.items())


def dual_objective(lp: LinearProgram, result: SolveResult,
                   rhs: Mapping[str, float] | None = None) -> float:
    """Value of the dual solution carried by ``result`` (equals the primal at optimum)."""
    b = lp.rhs_vector(rhs)
    total = sum(result.dual[con.name] * b[i] for i, con in enumerate(lp.constraints))
    for v in lp.variables:
        lo_d, hi_d = result.bound_dual.get(v.name, (0.0, 0.0))
        if math.isfinite(v.lb):
            total += lo_d * v.lb
        if math.isfinite(v.ub):
            total += hi_d * v.ub
    return total

