"""Command-line front end: ``compnet <command> [options]``.

Commands only parse arguments, call the library and format results.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import cuts, interdiction
from .flow import FlowModel, decompose, max_flow_path_oracle
from .network import NetworkError, dump_network, gen_random, load_network
from .testkit import fixtures as fx
from .testkit.oracles import cut_oracle

DEFAULT_TIME_LIMIT = 600.0
DIGITS = 6

CUT_METHODS = ("exact", "approx", "fast", "oracle")
FORMATS = ("table", "json", "csv")


class CLIError(Exception):
    pass


def _num(x: float) -> str:
    return f"{x:.{DIGITS}f}"


def _default_time_limit() -> float:
    raw = os.environ.get("COMPNET_TIME_LIMIT")
    if raw is None:
        return DEFAULT_TIME_LIMIT
    try:
        value = float(raw)
    except ValueError:
        raise CLIError(f"COMPNET_TIME_LIMIT must be a number, got {raw!r}") from None
    if value <= 0:
        raise CLIError("COMPNET_TIME_LIMIT must be positive")
    return value


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi but got {text!r}") from None
    return lo, hi


def _nonneg(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError("budget must be non-negative")
    return value


# -- argument parsing --------------------------------------------------------

def _network_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--network", metavar="PATH", help="topology JSON file")
    src.add_argument("--fixture", metavar="NAME", help="built-in reference network")
    p.add_argument("--source", metavar="ID", help="source node (fixtures supply a default)")
    p.add_argument("--dest", metavar="ID", help="destination node (fixtures supply a default)")
    p.add_argument("--format", choices=FORMATS, default="table")
    p.add_argument("--dump-lp", metavar="PATH",
                   help="write the underlying LP/MILP in text form ('-' for stderr)")


def _limit_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-limit", type=float, metavar="SECS",
                   help=f"solver time limit (default {DEFAULT_TIME_LIMIT:g} or $COMPNET_TIME_LIMIT)")
    p.add_argument("--node-limit", type=int, metavar="N", help="branch-and-bound node limit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compnet",
                                     description="Computation-flow analysis of networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("maxflow", help="maximum s-t computation flow")
    _network_args(p)
    p.add_argument("--decompose", action="store_true", help="list computation paths")
    p.add_argument("--duals", action="store_true", help="list shadow prices")
    p.add_argument("--method", choices=("lp", "oracle"), default="lp")

    p = sub.add_parser("mincut", help="minimum communication / computation / joint cut")
    _network_args(p)
    _limit_args(p)
    p.add_argument("--mode", choices=("comm", "comp", "joint"), default="joint")
    p.add_argument("--method", choices=CUT_METHODS, default="exact")

    for name, help_text in (("interdict", "interdict under a single budget"),
                            ("sweep", "interdict over a grid of budgets")):
        p = sub.add_parser(name, help=help_text)
        _network_args(p)
        _limit_args(p)
        p.add_argument("--partial", action="store_true", help="allow fractional removal")
        if name == "interdict":
            p.add_argument("--budget", type=_nonneg, required=True)
            p.add_argument("--method", choices=interdiction.METHODS, default="exact")
        else:
            p.add_argument("--budgets", required=True, metavar="LO:HI:STEP")
            p.add_argument("--method", action="append", choices=interdiction.METHODS,
                           help="repeat to compare methods (default exact)")

    p = sub.add_parser("gen", help="random capacities on a topology")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--topology", choices=("abilene",), help="built-in topology")
    src.add_argument("--network", metavar="PATH", help="reuse the links of a topology file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--link-range", type=_range, default=(0.0, 1.0), metavar="LO,HI")
    p.add_argument("--node-range", type=_range, default=(0.0, 0.1), metavar="LO,HI")
    p.add_argument("--link-cost-range", type=_range, metavar="LO,HI")
    p.add_argument("--node-cost-range", type=_range, metavar="LO,HI")
    p.add_argument("--output", "-o", metavar="PATH", help="write here instead of stdout")

    p = sub.add_parser("fixtures", help="list or export the reference networks")
    fsub = p.add_subparsers(dest="action", required=True)
    q = fsub.add_parser("list")
    q.add_argument("--format", choices=FORMATS, default="table")
    q = fsub.add_parser("export")
    q.add_argument("directory")
    return parser


# -- commands ----------------------------------------------------------------

def _load(args):
    if args.fixture:
        try:
            f = fx.fixture(args.fixture)
        except KeyError as e:
            raise CLIError(e.args[0]) from None
        net, s, t, name = f.network, f.source, f.target, f"fixture:{f.name}"
    else:
        try:
            text = Path(args.network).read_text()
        except OSError as e:
            raise CLIError(f"cannot read {args.network}: {e.strerror}") from None
        net, s, t, name = load_network(text), None, None, args.network
    s = args.source or s
    t = args.dest or t
    if s is None or t is None:
        raise CLIError("--source and --dest are required with --network")
    for node in (s, t):
        net.node(node)
    if s == t:
        raise CLIError("source and destination must differ")
    return net, s, t, name


def _dump(args, lp) -> None:
    if not getattr(args, "dump_lp", None):
        return
    text = lp.to_lp_text()
    if args.dump_lp == "-":
        sys.stderr.write(text + "\n")
    else:
        Path(args.dump_lp).write_text(text + "\n")


def _limits(args):
    limit = args.time_limit if args.time_limit is not None else _default_time_limit()
    if limit <= 0:
        raise CLIError("--time-limit must be positive")
    return limit, args.node_limit


def _header(command, name, s, t) -> dict:
    return {"command": command, "network": name, "source": s, "target": t}


def cmd_maxflow(args) -> dict:
    net, s, t, name = _load(args)
    model = FlowModel(net, s, t)
    _dump(args, model.lp)
    report = _header("maxflow", name, s, t)
    if args.method == "oracle":
        report["value"] = max_flow_path_oracle(net, s, t)
        return report
    sol = model.solve()
    report["value"] = sol.value
    if args.decompose:
        report["paths"] = [{"nodes": list(p.nodes), "processor": p.processor, "amount": p.amount}
                           for p in decompose(sol)]
    if args.duals:
        report["link_duals"] = [{"from": u, "to": v, "dual": q}
                                for (u, v), q in sorted(sol.link_duals.items())]
        report["node_duals"] = [{"id": w, "dual": q} for w, q in sorted(sol.node_duals.items())]
    return report


def cmd_mincut(args) -> dict:
    net, s, t, name = _load(args)
    mode = cuts._mode(args.mode)
    time_limit, node_limit = _limits(args)
    if args.method == "exact":
        _dump(args, cuts.build_cut_program(net, s, t, mode))
        sol = cuts.min_cut_exact(net, s, t, mode, time_limit=time_limit, node_limit=node_limit)
    elif args.method == "fast":
        if mode != cuts.COMPUTATION:
            raise CLIError("--method fast is only available with --mode comp")
        sol = cuts.min_computation_cut(net, s, t)
    elif args.method == "approx":
        if mode == cuts.COMPUTATION:
            raise CLIError("--method approx applies to --mode comm or joint (use fast for comp)")
        sol = cuts.approx_comm_cut(net, s, t) if mode == cuts.COMMUNICATION \
            else cuts.approx_joint_cut(net, s, t)
    else:
        sol = cut_oracle(net, s, t, mode)
    report = _header("mincut", name, s, t)
    report.update(sol.to_dict(verified=cuts.is_cut(net, s, t, sol)))
    return report


def _problem(args, budget):
    net, s, t, name = _load(args)
    mode = interdiction.PARTIAL if args.partial else interdiction.BINARY
    return interdiction.InterdictionProblem(net, s, t, budget, mode), name


def cmd_interdict(args) -> dict:
    problem, name = _problem(args, args.budget)
    time_limit, node_limit = _limits(args)
    if args.method == "exact" and problem.mode == interdiction.BINARY:
        _dump(args, interdiction.build_interdiction_program(problem))
    try:
        sol = interdiction.interdict(problem, args.method, time_limit=time_limit,
                                     node_limit=node_limit)
    except (interdiction.CostModeError, interdiction.OracleSizeError) as e:
        raise CLIError(str(e)) from None
    report = _header("interdict", name, problem.source, problem.target)
    report.update({"budget": problem.budget, "mode": problem.mode})
    report.update(sol.to_dict())
    return report


def cmd_sweep(args) -> dict:
    try:
        budgets = interdiction.budget_grid(args.budgets)
    except ValueError as e:
        raise CLIError(str(e)) from None
    problem, name = _problem(args, 0.0)
    time_limit, _ = _limits(args)
    methods = args.method or ["exact"]
    try:
        rows = interdiction.budget_sweep(problem, budgets, methods, time_limit=time_limit)
    except (interdiction.CostModeError, interdiction.OracleSizeError) as e:
        raise CLIError(str(e)) from None
    report = _header("sweep", name, problem.source, problem.target)
    report["mode"] = problem.mode
    report["rows"] = [{k: getattr(r, k) for k in interdiction.SWEEP_FIELDS} for r in rows]
    return report


def cmd_gen(args) -> dict:
    if args.topology == "abilene":
        topology, nodes, both = fx.ABILENE_EDGES, fx.ABILENE_NODES, True
    else:
        try:
            base = load_network(Path(args.network).read_text())
        except OSError as e:
            raise CLIError(f"cannot read {args.network}: {e.strerror}") from None
        topology, nodes, both = base.link_ids(), base.node_ids(), False
    net = gen_random(topology, args.link_range, args.node_range, seed=args.seed,
                     link_cost_range=args.link_cost_range, node_cost_range=args.node_cost_range,
                     bidirectional=both, nodes=nodes)
    text = dump_network(net) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    return {"command": "gen", "seed": args.seed, "output": args.output, "_raw": text}


def cmd_fixtures(args) -> dict:
    if args.action == "export":
        path = fx.export_fixtures(args.directory)
        return {"command": "fixtures", "manifest": str(path)}
    rows = []
    for f in fx.fixtures():
        rows.append({"name": f.name, "source": f.source, "target": f.target,
                     "expected": {m: e.value for m, e in f.expected.items()},
                     "description": f.description})
    return {"command": "fixtures", "fixtures": rows}


COMMANDS = {"maxflow": cmd_maxflow, "mincut": cmd_mincut, "interdict": cmd_interdict,
            "sweep": cmd_sweep, "gen": cmd_gen, "fixtures": cmd_fixtures}


# -- output ------------------------------------------------------------------

def _plain(value):
    if isinstance(value, float):
        return _num(value)
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def _rows_of(report: dict):
    """The tabular part of a report as (header, rows)."""
    cmd = report["command"]
    if cmd == "sweep":
        return list(interdiction.SWEEP_FIELDS), [[r[k] for k in interdiction.SWEEP_FIELDS]
                                                 for r in report["rows"]]
    if cmd == "fixtures" and "fixtures" in report:
        return ["name", "source", "target", "expected"], [
            [f["name"], f["source"], f["target"],
             ";".join(f"{m}={_num(v)}" for m, v in f["expected"].items())]
            for f in report["fixtures"]]
    scalars = [k for k, v in report.items() if not isinstance(v, (list, dict)) and not k.startswith("_")]
    return ["key", "value"], [[k, report[k]] for k in scalars]


def render(report: dict, fmt: str) -> str:
    if "_raw" in report and not report.get("output"):
        return report["_raw"].rstrip("\n")
    public = {k: v for k, v in report.items() if not k.startswith("_")}
    if fmt == "json":
        return json.dumps(public, indent=2, default=str)
    header, rows = _rows_of(public)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([[_plain(c) for c in r] for r in rows])
        return buf.getvalue().rstrip("\n")
    lines = _table(header, rows)
    for key, value in public.items():
        if isinstance(value, list) and value and key not in ("rows", "fixtures"):
            lines.append("")
            lines.append(f"{key}:")
            for item in value:
                lines.append("  " + _item(item))
    return "\n".join(lines)


def _item(item) -> str:
    if isinstance(item, dict):
        return "  ".join(f"{k}={_plain(v) if not isinstance(v, list) else '-'.join(map(str, v))}"
                         for k, v in item.items())
    return _plain(item)


def _table(header, rows) -> list[str]:
    cells = [[str(h) for h in header]] + [[_plain(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
        text = render(report, getattr(args, "format", "table"))
    except (CLIError, NetworkError, KeyError, ValueError, RuntimeError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"compnet {args.command}: error: {msg}", file=sys.stderr)
        return 2
    print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
