"""Formula-vs-solver sweeps over graph families and products."""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd

from eldb_core import formulas, solver
from eldb_core.config import SuiteSpec, load_settings, load_suites
from eldb_core.corpus import resolve_graph
from eldb_core.error_logger import get_logger
from eldb_core.exceptions import ConfigError
from eldb_core.graph_core import all_pairs_distances, generate, product, subdivided_star
from eldb_core.models import DistanceMatrix, Graph, SolveResult, SweepReport, SweepRow


logger = get_logger("sweep")

CSV_COLUMNS = ["family", "params", "quantity", "formula", "solver", "agree", "note"]


@dataclass(frozen=True)
class SweepCase:
    """One instance of a suite block; expands to one or more rows."""
    index: int
    family: str
    params: Tuple[Tuple[str, object], ...] = field(default_factory=tuple)

    def param(self, name: str):
        return dict(self.params)[name]


def _value(result: SolveResult) -> Optional[int]:
    if result.exhausted or not result.feasible:
        return None
    return result.value


def _exact_row(family: str, params: str, quantity: str, expected: Optional[int], result: SolveResult, note: str = "") -> SweepRow:
    """Row comparing an exact formula value with a solve."""
    if result.exhausted:
        return SweepRow(family, params, quantity, str(expected), None, None,
                        note=f"solver exhausted after {result.nodes_explored} nodes", exhausted=True)
    got = _value(result)
    agree = got == expected
    if not agree and not note:
        note = "solver infeasible" if got is None else f"formula {expected}, solver {got}"
    return SweepRow(family, params, quantity, str(expected), got, agree, note=note)


def _bound_row(family: str, params: str, quantity: str, bound: int, result: SolveResult, at_least: bool) -> SweepRow:
    symbol = ">=" if at_least else "<="
    if result.exhausted:
        return SweepRow(family, params, quantity, f"{symbol}{bound}", None, None,
                        note=f"solver exhausted after {result.nodes_explored} nodes", exhausted=True)
    got = _value(result)
    agree = got is not None and (got >= bound if at_least else got <= bound)
    note = "" if agree else f"bound {symbol}{bound} broken by {got}"
    return SweepRow(family, params, quantity, f"{symbol}{bound}", got, agree, note=note)


def _with_distances(g: Graph) -> Tuple[Graph, DistanceMatrix]:
    return g, all_pairs_distances(g)


def _rows_path(case: SweepCase, limit: int) -> List[SweepRow]:
    n, k = case.param("n"), case.param("k")
    g, d = _with_distances(generate("path", n))
    expected = formulas.path_gamma(n, k).value
    return [_exact_row("path", f"n={n},k={k}", "gamma_ebk", expected, solver.gamma_ebk(g, k, limit, d))]


def _rows_cycle(case: SweepCase, limit: int) -> List[SweepRow]:
    n = case.param("n")
    g, d = _with_distances(generate("cycle", n))
    mcr_formula = formulas.cycle_mcr(n)
    gamma_formula = formulas.cycle_gamma(n)
    k = mcr_formula.value
    return [
        _exact_row("cycle", f"n={n}", "mcr", k, solver.mcr(g, limit, d)),
        _exact_row("cycle", f"n={n},k={k}", "gamma_ebk", gamma_formula.value, solver.gamma_ebk(g, k, limit, d)),
    ]


def _rows_subdivided_star(case: SweepCase, limit: int) -> List[SweepRow]:
    i, n = case.param("i"), case.param("n")
    g, d = _with_distances(subdivided_star(i, n))
    formula = formulas.subdivided_star_gamma(i, n)
    params = f"i={i},n={n}"
    return [
        _exact_row("subdivided_star", params, "mcr", formula.related["mcr"], solver.mcr(g, limit, d)),
        _exact_row("subdivided_star", params, "gamma_eb1", formula.value, solver.gamma_ebk(g, 1, limit, d)),
    ]


def _rows_lex_path(case: SweepCase, limit: int) -> List[SweepRow]:
    m, factor = case.param("m"), case.param("factor")
    h = resolve_graph(factor)
    rad_h = all_pairs_distances(h).radius
    g, d = _with_distances(product("lexicographic", generate("path", m), h))
    formula = formulas.lex_path(m, rad_h)
    params = f"m={m},H={factor}"
    rows = [_exact_row("lex_path", params, "mcr", formula.value, solver.mcr(g, limit, d))]
    if "gamma_eb2" in formula.related:
        rows.append(_exact_row("lex_path", params, "gamma_eb2", formula.related["gamma_eb2"], solver.gamma_ebk(g, 2, limit, d)))
    return rows


def _rows_lex_cycle(case: SweepCase, limit: int) -> List[SweepRow]:
    m, factor = case.param("m"), case.param("factor")
    h = resolve_graph(factor)
    rad_h = all_pairs_distances(h).radius
    g, d = _with_distances(product("lexicographic", generate("cycle", m), h))
    table, oracle = formulas.lex_cycle_mcr(m, rad_h)
    result = solver.mcr(g, limit, d)
    params = f"m={m},H={factor}"
    table_row = _exact_row("lex_cycle_table", params, "mcr", table.value, result)
    oracle_row = _exact_row("lex_cycle_oracle", params, "mcr", oracle.value, result)
    if table.value != oracle.value:
        table_row.expected_discrepancy = True
        table_row.note = f"expected discrepancy: table {table.value}, part-sum oracle {oracle.value}; {table_row.note}".rstrip("; ")
    return [table_row, oracle_row]


def _rows_lex_lower(case: SweepCase, limit: int) -> List[SweepRow]:
    name, factor = case.param("g"), case.param("factor")
    g = resolve_graph(name)
    g_result = solver.mcr(g, limit)
    if g_result.exhausted:
        return [SweepRow("lex_lower", f"G={name},H={factor}", "mcr", "n/a", None, None,
                         note="solver exhausted on G", exhausted=True)]
    gh, d = _with_distances(product("lexicographic", g, resolve_graph(factor)))
    bound = formulas.lex_mcr_lower(g_result.value).value
    return [_bound_row("lex_lower", f"G={name},H={factor}", "mcr", bound, solver.mcr(gh, limit, d), at_least=True)]


def _rows_lex_one_free(case: SweepCase, limit: int) -> List[SweepRow]:
    name, factor = case.param("g"), case.param("factor")
    g = resolve_graph(name)
    g_result = solver.min_k_without_cost_one(g, limit)
    if g_result.exhausted:
        return [SweepRow("lex_one_free", f"G={name},H={factor}", "mcr_no_cost_one", "n/a", None, None,
                         note="solver exhausted on G", exhausted=True)]
    gh, d = _with_distances(product("lexicographic", g, resolve_graph(factor)))
    bound = formulas.lex_one_free_lift(g_result.value).value
    result = solver.min_k_without_cost_one(gh, limit, d)
    return [_bound_row("lex_one_free", f"G={name},H={factor}", "mcr_no_cost_one", bound, result, at_least=False)]


def _rows_strong_cycle_path(case: SweepCase, limit: int) -> List[SweepRow]:
    m, factor = case.param("m"), case.param("factor")
    g, d = _with_distances(product("strong", generate("cycle", m), resolve_graph(factor)))
    formula = formulas.strong_mcr("cycle_times_path", {"m": m})
    return [_exact_row("strong_cycle_path", f"m={m},H={factor}", "mcr", formula.value, solver.mcr(g, limit, d))]


def _rows_strong_rad1(case: SweepCase, limit: int) -> List[SweepRow]:
    q, factor = case.param("q"), case.param("factor")
    family, size = factor.split(":")
    g, d = _with_distances(product("strong", generate("complete", q), resolve_graph(factor)))
    formula = formulas.strong_mcr("rad1_factor", {"g_radius": 1, "h_family": family, "h_size": int(size)})
    params = f"q={q},H={factor}"
    k = formula.value
    return [
        _exact_row("strong_rad1", params, "mcr", k, solver.mcr(g, limit, d)),
        _exact_row("strong_rad1", f"{params},k={k}", "gamma_ebk", formula.related["gamma_ebk"],
                   solver.gamma_ebk(g, k, limit, d)),
    ]


def _rows_strong_lower(case: SweepCase, limit: int) -> List[SweepRow]:
    pair = case.param("pair")
    left, right = pair.split("|")
    g, h = resolve_graph(left), resolve_graph(right)
    g_result, h_result = solver.mcr(g, limit), solver.mcr(h, limit)
    if g_result.exhausted or h_result.exhausted:
        return [SweepRow("strong_lower", f"G={left},H={right}", "mcr", "n/a", None, None,
                         note="solver exhausted on a factor", exhausted=True)]
    gh, d = _with_distances(product("strong", g, h))
    formula = formulas.strong_mcr("lower_bound", {"g_mcr": g_result.value, "h_mcr": h_result.value})
    return [_bound_row("strong_lower", f"G={left},H={right}", "mcr", formula.value, solver.mcr(gh, limit, d), at_least=True)]


def _rows_bounds(case: SweepCase, limit: int) -> List[SweepRow]:
    name = case.param("g")
    g, d = _with_distances(resolve_graph(name))
    result = solver.gamma_ebk(g, 2, limit, d)
    check = formulas.check_eb2_bounds(g, result)
    params = f"G={name}"
    if not check.applicable:
        return [SweepRow("bounds", params, "gamma_eb2", "n/a", None, None, note=check.reason or "")]
    if check.solver_value is None:
        return [SweepRow("bounds", params, "gamma_eb2", str(check.interval), None, None,
                         note="solver exhausted", exhausted=True)]

    has_eds = solver.exists_k_eldb(g, 1, limit, d).feasible
    lower = SweepRow("bounds", params, "eb2_lower", f">={check.interval.lower}", check.solver_value, check.lower_holds)
    upper = SweepRow("bounds", params, "eb2_upper", f"<={check.interval.upper}", check.solver_value, check.upper_holds)
    if not check.lower_holds:
        lower.expected_discrepancy = g.max_degree <= 2
        lower.note = ("expected discrepancy: " if lower.expected_discrepancy else "") + f"max degree {g.max_degree}"
    if not check.upper_holds:
        upper.expected_discrepancy = not has_eds
        upper.note = ("expected discrepancy: " if upper.expected_discrepancy else "") + (
            "no 1-ELDB" if not has_eds else "has a 1-ELDB"
        )
    return [lower, upper]


def _rows_chain(case: SweepCase, limit: int) -> List[SweepRow]:
    name = case.param("g")
    g, d = _with_distances(resolve_graph(name))
    start = solver.mcr(g, limit, d)
    if start.exhausted:
        return [SweepRow("chain", f"G={name}", "gamma_chain", "-", None, None, note="solver exhausted", exhausted=True)]
    values = []
    for k in range(start.value, d.radius + 1):
        result = solver.gamma_ebk(g, k, limit, d)
        if result.exhausted:
            return [SweepRow("chain", f"G={name}", "gamma_chain", "-", None, None,
                             note=f"solver exhausted at k={k}", exhausted=True)]
        values.append(result.value)
    listing = " ".join(f"k{start.value + i}={v}" for i, v in enumerate(values))
    return [SweepRow("chain", f"G={name}", "gamma_chain", "-", listing, None,
                     note=f"reported: {formulas.chain_direction(values)}")]


ROW_BUILDERS: Dict[str, Callable[[SweepCase, int], List[SweepRow]]] = {
    "path": _rows_path,
    "cycle": _rows_cycle,
    "subdivided_star": _rows_subdivided_star,
    "lex_path": _rows_lex_path,
    "lex_cycle": _rows_lex_cycle,
    "lex_lower": _rows_lex_lower,
    "lex_one_free": _rows_lex_one_free,
    "strong_cycle_path": _rows_strong_cycle_path,
    "strong_rad1": _rows_strong_rad1,
    "strong_lower": _rows_strong_lower,
    "bounds": _rows_bounds,
    "chain": _rows_chain,
}


def expand_suite(spec: SuiteSpec) -> List[SweepCase]:
    """Instances of every block, numbered in suite order."""
    cases: List[SweepCase] = []

    def add(family: str, **params) -> None:
        cases.append(SweepCase(index=len(cases), family=family, params=tuple(params.items())))

    for block in spec.blocks:
        if block.family not in ROW_BUILDERS:
            raise ConfigError(f"unknown sweep family {block.family!r}")
        if block.family == "path":
            for n in block.sizes:
                for k in block.ks:
                    add("path", n=n, k=k)
        elif block.family == "cycle":
            for n in block.sizes:
                add("cycle", n=n)
        elif block.family == "subdivided_star":
            for i in block.subdivisions:
                for n in block.sizes:
                    add("subdivided_star", i=i, n=n)
        elif block.family in ("lex_path", "lex_cycle"):
            for m in block.sizes:
                add(block.family, m=m, factor=block.factor)
        elif block.family in ("lex_lower", "lex_one_free"):
            for name in block.factors:
                add(block.family, g=name, factor=block.factor)
        elif block.family == "strong_cycle_path":
            for m in block.sizes:
                for factor in block.factors:
                    add("strong_cycle_path", m=m, factor=factor)
        elif block.family == "strong_rad1":
            for q in block.sizes:
                for factor in block.factors:
                    add("strong_rad1", q=q, factor=factor)
        elif block.family == "strong_lower":
            for pair in block.factors:
                add("strong_lower", pair=pair)
        else:
            for name in block.factors:
                add(block.family, g=name)
    return cases


def run_case(case: SweepCase, node_limit: int) -> List[SweepRow]:
    """Rows for one instance; safe to run in a worker process."""
    return ROW_BUILDERS[case.family](case, node_limit)


def run_sweep(
    suite: str,
    node_limit: Optional[int] = None,
    workers: Optional[int] = None,
    suites: Optional[Dict[str, SuiteSpec]] = None,
) -> SweepReport:
    """
    Run a named suite.

    Rows come back in case order whatever the number of workers.
    """
    suites = suites if suites is not None else load_suites()
    if suite not in suites:
        raise ConfigError(f"unknown suite {suite!r}; expected one of {sorted(suites)}")
    settings = load_settings()
    limit = node_limit or settings.node_limit
    workers = workers or settings.workers
    cases = expand_suite(suites[suite])

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_case = list(pool.map(run_case, cases, [limit] * len(cases)))
    else:
        per_case = [run_case(case, limit) for case in cases]

    report = SweepReport(suite=suite)
    for rows in per_case:
        for row in rows:
            logger.info(f"{row.family} {row.params} {row.quantity}: formula={row.formula} solver={row.solver} agree={row.agree}")
            if row.agree is False:
                level_note = "expected" if row.expected_discrepancy else "UNEXPECTED"
                logger.warning(f"{level_note} disagreement: {row.family} {row.params} {row.quantity} ({row.note})")
            report.rows.append(row)
    return report


def report_frame(report: SweepReport) -> pd.DataFrame:
    """Report rows as a DataFrame with the CSV columns."""
    records = [row.to_dict() for row in report.rows]
    return pd.DataFrame(records, columns=CSV_COLUMNS + ["expected_discrepancy", "exhausted"], dtype=object)


def _csv_agree(value: Optional[bool]) -> str:
    if value is None:
        return ""
    return "true" if value else "false"


def render_csv(report: SweepReport) -> str:
    frame = report_frame(report)[CSV_COLUMNS].copy()
    frame["agree"] = frame["agree"].map(_csv_agree)
    frame["solver"] = frame["solver"].map(lambda v: "" if v is None else str(v))
    return frame.to_csv(index=False, lineterminator="\n")


def render_json(report: SweepReport) -> str:
    return report_frame(report).to_json(orient="records", indent=2) + "\n"


def write_report(report: SweepReport, path: Path, fmt: str = "json") -> Path:
    """Write a report as CSV or JSON."""
    if fmt not in ("json", "csv"):
        raise ConfigError(f"unknown report format {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = render_csv(report) if fmt == "csv" else render_json(report)
    path.write_text(text, encoding="utf-8")
    return path
