"""Command-line front end.

Exit status: solve gives 0 feasible, 2 infeasible, 3 exhausted; sweep gives
0 when every row outside the known discrepancies agrees; verify-reduction
gives 0 when the equivalence holds, 1 when it fails, 3 when withheld. Any
error exits 1.
"""
import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from eldb_core import formulas, solver
from eldb_core.broadcast import classify
from eldb_core.config import RunConfig, build_run_config
from eldb_core.error_logger import configure_console, get_logger, log_run_error
from eldb_core.exceptions import ConfigError, EldbError
from eldb_core.graph_core import (
    all_pairs_distances,
    build_tk,
    generate,
    product,
    serialize_graph,
    subdivided_star,
)
from eldb_core.importers import load_cnf, load_graph, save_graph
from eldb_core.models import Graph, SolveResult
from eldb_core.reduction import build_reduction, verify_reduction
from eldb_core.sweep import render_csv, render_json, run_sweep


logger = get_logger("cli")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_EXHAUSTED = 3

OBJECTIVES = ("exists", "mincost", "maxcover", "mcr", "mincost-no1")


def _dump(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text, encoding="utf-8")


def _graph_summary(g: Graph) -> Dict[str, Any]:
    d = all_pairs_distances(g)
    return {"n": g.vertex_count, "m": g.edge_count, "radius": d.radius, "diameter": d.diameter}


def cmd_gen(config: RunConfig) -> int:
    """Generate a family member, a T_k tree or a product of two graph files."""
    if config.product is not None:
        g = product(config.product, load_graph(config.left), load_graph(config.right))
    elif config.family == "tk":
        g = build_tk(config.k)
    elif config.family == "subdivided-star":
        g = subdivided_star(config.i, config.n)
    else:
        g = generate(config.family, config.n)

    summary = _graph_summary(g)
    if config.output is None:
        sys.stdout.write(serialize_graph(g))
        sys.stderr.write(_dump(summary))
    else:
        save_graph(g, config.output)
        sys.stdout.write(_dump(summary))
    return EXIT_OK


def _run_objective(config: RunConfig, g: Graph) -> SolveResult:
    limit = config.node_limit
    if config.objective == "exists":
        return solver.exists_k_eldb(g, config.k, node_limit=limit)
    if config.objective == "mincost":
        return solver.gamma_ebk(g, config.k, node_limit=limit)
    if config.objective == "maxcover":
        return solver.f_k(g, config.k, node_limit=limit)
    if config.objective == "mcr":
        return solver.mcr(g, node_limit=limit)
    return solver.min_k_without_cost_one(g, node_limit=limit)


def cmd_solve(config: RunConfig) -> int:
    """Solve one objective on a graph file and write the SolveResult as JSON."""
    g = load_graph(config.graph, allow_disconnected=config.allow_disconnected)
    result = _run_objective(config, g)
    if result.witness is not None:
        d = all_pairs_distances(g, allow_disconnected=config.allow_disconnected)
        report = classify(g, d, result.witness)
        ok = report.is_efficient if config.objective == "maxcover" else report.is_k_eldb
        if not ok:
            raise EldbError(f"solver witness failed validation: {result.witness.to_list()}")
    _emit(_dump(result.to_dict()), config.output)
    if result.exhausted:
        return EXIT_EXHAUSTED
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def cmd_sweep(config: RunConfig) -> int:
    """Run a named suite and write its report."""
    report = run_sweep(config.suite, node_limit=config.node_limit, workers=config.workers)
    text = render_csv(report) if config.format == "csv" else render_json(report)
    _emit(text, config.output)
    expected = sum(1 for r in report.disagreements if r.expected_discrepancy)
    sys.stderr.write(
        f"{len(report.rows)} rows, {len(report.disagreements)} disagreements "
        f"({expected} expected), {len(report.exhausted_rows)} exhausted\n"
    )
    return EXIT_OK if report.all_agree else EXIT_ERROR


def cmd_reduce(config: RunConfig) -> int:
    """Build the gadget for a CNF file."""
    cnf = load_cnf(config.cnf)
    rg = build_reduction(cnf, config.k)
    summary = {
        "variables": cnf.variable_count,
        "clauses": cnf.clause_count,
        "k": rg.k,
        "vertices": rg.graph.vertex_count,
        "expected_vertices": rg.expected_vertex_count,
        "edges": rg.graph.edge_count,
    }
    if config.output is None:
        sys.stdout.write(serialize_graph(rg.graph))
        sys.stderr.write(_dump(summary))
    else:
        save_graph(rg.graph, config.output)
        sys.stdout.write(_dump(summary))
    return EXIT_OK


def cmd_verify_reduction(config: RunConfig) -> int:
    """Check satisfiability against gadget domination for a CNF file."""
    cnf = load_cnf(config.cnf)
    report = verify_reduction(cnf, config.k, node_limit=config.node_limit)
    _emit(_dump(report.to_dict()), config.output)
    return {"holds": EXIT_OK, "fails": EXIT_ERROR, "withheld": EXIT_EXHAUSTED}[report.verdict]


def _checked(formula, result: SolveResult) -> Dict[str, Any]:
    entry = formula.to_dict()
    entry["solver"] = None if result.exhausted or not result.feasible else result.value
    entry["exhausted"] = result.exhausted
    entry["agree"] = None if result.exhausted else entry["solver"] == formula.value
    return entry


def cmd_check_formulas(config: RunConfig) -> int:
    """
    Evaluate the closed forms for one instance and compare with the solver.

    With --graph, the degree bounds on gamma_eb2 are checked instead.
    """
    limit = config.node_limit
    entries: List[Dict[str, Any]] = []
    if config.graph is not None:
        g = load_graph(config.graph)
        result = solver.gamma_ebk(g, 2, node_limit=limit)
        check = formulas.check_eb2_bounds(g, result)
        entries.append({
            "quantity": "bound_interval",
            "lower": str(check.interval.lower),
            "upper": str(check.interval.upper),
            "solver": check.solver_value,
            "applicable": check.applicable,
            "lower_holds": check.lower_holds,
            "upper_holds": check.upper_holds,
            "reason": check.reason,
        })
        _emit(_dump(entries), config.output)
        return EXIT_OK

    if config.family == "path":
        k = config.k or 1
        g = generate("path", config.n)
        entries.append(_checked(formulas.path_gamma(config.n, k), solver.gamma_ebk(g, k, node_limit=limit)))
    elif config.family == "cycle":
        g = generate("cycle", config.n)
        mcr_formula = formulas.cycle_mcr(config.n)
        entries.append(_checked(mcr_formula, solver.mcr(g, node_limit=limit)))
        entries.append(_checked(formulas.cycle_gamma(config.n), solver.gamma_ebk(g, mcr_formula.value, node_limit=limit)))
    elif config.family == "subdivided-star":
        g = subdivided_star(config.i, config.n)
        entries.append(_checked(formulas.subdivided_star_gamma(config.i, config.n), solver.gamma_ebk(g, 1, node_limit=limit)))
    else:
        raise ConfigError("check-formulas needs --graph or --family path|cycle|subdivided-star")

    _emit(_dump(entries), config.output)
    return EXIT_OK if all(e["agree"] is not False for e in entries) else EXIT_ERROR


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "reduce": cmd_reduce,
    "verify-reduction": cmd_verify_reduction,
    "check-formulas": cmd_check_formulas,
}


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with EXIT_ERROR."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="eldb", description="Efficient k-limited broadcast domination lab")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--output", type=Path, help="Output file (default: stdout)")
        p.add_argument("--seed", type=int, help="Reserved; every solver is deterministic")
        p.add_argument("--verbose", action="store_true", help="Log progress at INFO level")

    gen = sub.add_parser("gen", help="Generate a graph file")
    gen.add_argument("--family", choices=["path", "cycle", "complete", "star", "tk", "subdivided-star"])
    gen.add_argument("--n", type=int, help="Vertex count (star order for subdivided-star)")
    gen.add_argument("--i", type=int, help="Subdivisions per star edge")
    gen.add_argument("--k", type=int, help="T_k parameter")
    gen.add_argument("--product", choices=["lexicographic", "strong", "cartesian"])
    gen.add_argument("--left", type=Path, help="First factor graph file")
    gen.add_argument("--right", type=Path, help="Second factor graph file")
    common(gen)

    solve = sub.add_parser("solve", help="Solve one objective on a graph file")
    solve.add_argument("--graph", type=Path, required=True)
    solve.add_argument("--objective", choices=OBJECTIVES, required=True)
    solve.add_argument("--k", type=int)
    solve.add_argument("--node-limit", type=int, dest="node_limit")
    solve.add_argument(
        "--allow-disconnected", action="store_true", dest="allow_disconnected",
        help="Accept graphs with several components, e.g. gadgets with an unused variable",
    )
    common(solve)

    sweep = sub.add_parser("sweep", help="Run a formula-vs-solver suite")
    sweep.add_argument("--suite", required=True)
    sweep.add_argument("--format", choices=["json", "csv"], default="json")
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--node-limit", type=int, dest="node_limit")
    common(sweep)

    reduce = sub.add_parser("reduce", help="Build the gadget graph for a CNF file")
    reduce.add_argument("--cnf", type=Path, required=True)
    reduce.add_argument("--k", type=int, default=2)
    common(reduce)

    verify = sub.add_parser("verify-reduction", help="Verify the reduction on a CNF file")
    verify.add_argument("--cnf", type=Path, required=True)
    verify.add_argument("--k", type=int, default=2)
    verify.add_argument("--node-limit", type=int, dest="node_limit")
    common(verify)

    check = sub.add_parser("check-formulas", help="Compare closed forms with the solver")
    check.add_argument("--family", choices=["path", "cycle", "subdivided-star"])
    check.add_argument("--n", type=int)
    check.add_argument("--i", type=int)
    check.add_argument("--k", type=int)
    check.add_argument("--graph", type=Path)
    check.add_argument("--node-limit", type=int, dest="node_limit")
    common(check)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    values = {key: value for key, value in vars(args).items() if value is not None}
    command = values.get("command", "unknown")
    configure_console(values.get("verbose", False))
    try:
        config = build_run_config(values)
        return COMMANDS[config.command](config)
    except (EldbError, OSError) as e:
        log_run_error(e, command=command, argv=argv if argv is not None else sys.argv[1:])
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR
