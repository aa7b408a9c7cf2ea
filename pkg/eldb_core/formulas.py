"""Closed-form values for graph families and products, and bound checks."""
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from eldb_core.exceptions import InvalidParameterError
from eldb_core.models import (
    BoundCheck,
    BoundKind,
    FormulaResult,
    FormulaStep,
    Graph,
    Interval,
    Quantity,
    SolveResult,
)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _not_applicable(quantity: Quantity, source: str, reason: str) -> FormulaResult:
    return FormulaResult(quantity=quantity, source=source, applicable=False, reason=reason)


def path_gamma(n: int, k: int) -> FormulaResult:
    """gamma_ebk(P_n) = ceil(n/3) for every k >= 1."""
    if n < 2 or k < 1:
        return _not_applicable(Quantity.GAMMA_EBK, "path", f"needs n >= 2 and k >= 1 (n={n}, k={k})")
    value = _ceil_div(n, 3)
    return FormulaResult(
        quantity=Quantity.GAMMA_EBK,
        source="path",
        value=value,
        related={"mcr": 1},
        steps=[FormulaStep(
            id="path_gamma",
            description=f"cost-1 vertices at every third position of P_{n}",
            formula="gamma = ceil(n / 3)",
            values=f"gamma = ceil({n} / 3)",
            result=value,
            rule="paths are 1-efficiently dominatable and larger radii never help",
        )],
    )


def cycle_mcr(n: int) -> FormulaResult:
    """mcr(C_n): 1 when 3 | n, 3 for n = 7, else 2."""
    if n < 3:
        return _not_applicable(Quantity.MCR, "cycle", f"cycles need n >= 3 (n={n})")
    if n % 3 == 0:
        value, case = 1, "n = 0 (mod 3)"
    elif n == 7:
        value, case = 3, "n = 7"
    else:
        value, case = 2, "n = 1 or 2 (mod 3), n != 7"
    return FormulaResult(
        quantity=Quantity.MCR,
        source="cycle",
        value=value,
        steps=[FormulaStep(id="cycle_mcr", description=f"case {case}", formula="mcr = 1 | 3 | 2", values=f"n = {n}", result=value)],
    )


def cycle_gamma(n: int) -> FormulaResult:
    """gamma at k = mcr(C_n) is ceil(n/3)."""
    mcr_result = cycle_mcr(n)
    if not mcr_result.applicable:
        return _not_applicable(Quantity.GAMMA_EBK, "cycle", mcr_result.reason)
    value = _ceil_div(n, 3)
    return FormulaResult(
        quantity=Quantity.GAMMA_EBK,
        source="cycle",
        value=value,
        related={"k": mcr_result.value},
        steps=mcr_result.steps + [FormulaStep(
            id="cycle_gamma",
            description=f"cost at k = {mcr_result.value}",
            formula="gamma = ceil(n / 3)",
            values=f"gamma = ceil({n} / 3)",
            result=value,
        )],
    )


def subdivided_star_gamma(i: int, n: int) -> FormulaResult:
    """
    gamma_eb1 of the i-th subdivision of K_{1,n-1}.

    ceil(i/3)(n-1) when i = 1 (mod 3), otherwise one more for the center.
    """
    if i < 0 or n < 3:
        return _not_applicable(Quantity.GAMMA_EB1, "subdivided_star", f"needs i >= 0 and n >= 3 (i={i}, n={n})")
    legs = _ceil_div(i, 3) * (n - 1)
    center_needed = i % 3 != 1
    value = legs + (1 if center_needed else 0)
    return FormulaResult(
        quantity=Quantity.GAMMA_EB1,
        source="subdivided_star",
        value=value,
        related={"mcr": 1},
        steps=[
            FormulaStep(
                id="legs",
                description="cost-1 vertices on the n-1 legs",
                formula="legs = ceil(i / 3) * (n - 1)",
                values=f"legs = ceil({i} / 3) * {n - 1}",
                result=legs,
            ),
            FormulaStep(
                id="center",
                description="center needs its own broadcaster" if center_needed else "center heard from the legs",
                formula="+1 unless i = 1 (mod 3)",
                values=f"i mod 3 = {i % 3}",
                result=value,
            ),
        ],
    )


def eb2_bounds(g: Graph, solver_result: Optional[SolveResult] = None) -> FormulaResult:
    """
    2n/(1+D^2) <= gamma_eb2 <= n/(1+d) as exact rationals.

    Not applicable when a supplied gamma_eb2 solve is infeasible (mcr > 2).
    """
    if solver_result is not None and not solver_result.feasible and not solver_result.exhausted:
        return _not_applicable(Quantity.BOUND_INTERVAL, "eb2_degree_bounds", "gamma_eb2 undefined: no 2-ELDB (mcr > 2)")
    n = g.vertex_count
    big, small = g.max_degree, g.min_degree
    lower = Fraction(2 * n, 1 + big * big)
    upper = Fraction(n, 1 + small)
    return FormulaResult(
        quantity=Quantity.BOUND_INTERVAL,
        source="eb2_degree_bounds",
        value=Interval(lower=lower, upper=upper),
        bound=BoundKind.INTERVAL,
        steps=[
            FormulaStep(id="lower", description="lower bound from max degree", formula="2n / (1 + D^2)",
                        values=f"2*{n} / (1 + {big}^2)", result=str(lower)),
            FormulaStep(id="upper", description="upper bound from min degree", formula="n / (1 + d)",
                        values=f"{n} / (1 + {small})", result=str(upper)),
        ],
    )


def check_eb2_bounds(g: Graph, solver_result: SolveResult) -> BoundCheck:
    """
    Compare a solved gamma_eb2 with both degree bounds.

    The lower side is only guaranteed for max degree >= 3 and the upper side
    only when g has a 1-ELDB; violations are reported, never raised.
    """
    formula = eb2_bounds(g, solver_result)
    n = g.vertex_count
    interval = Interval(Fraction(2 * n, 1 + g.max_degree ** 2), Fraction(n, 1 + g.min_degree))
    if not formula.applicable:
        return BoundCheck(interval=interval, solver_value=None, applicable=False, reason=formula.reason)
    if solver_result.exhausted or solver_result.value is None:
        return BoundCheck(interval=interval, solver_value=None, applicable=True, reason="solver exhausted")

    value = solver_result.value
    lower_holds = Fraction(value) >= interval.lower
    upper_holds = Fraction(value) <= interval.upper
    reasons = []
    if not lower_holds:
        reasons.append(f"lower bound {interval.lower} exceeds {value} (max degree {g.max_degree})")
    if not upper_holds:
        reasons.append(f"upper bound {interval.upper} below {value}")
    return BoundCheck(
        interval=interval,
        solver_value=value,
        applicable=True,
        lower_holds=lower_holds,
        upper_holds=upper_holds,
        reason="; ".join(reasons) or None,
    )


def lex_path(m: int, rad_h: int) -> FormulaResult:
    """
    mcr(P_m . H): 1 iff rad(H) = 1, else 2 with gamma_eb2 = 2 ceil(m/5).

    The gamma_eb2 value is in `related`.
    """
    if m < 2 or rad_h < 1:
        return _not_applicable(Quantity.MCR, "lex_path", f"needs m >= 2 and rad(H) >= 1 (m={m}, rad={rad_h})")
    if rad_h == 1:
        return FormulaResult(
            quantity=Quantity.MCR,
            source="lex_path",
            value=1,
            steps=[FormulaStep(id="lex_path_mcr", description="H has a universal vertex",
                               formula="mcr = 1 iff rad(H) = 1", values=f"rad(H) = {rad_h}", result=1)],
        )
    gamma = 2 * _ceil_div(m, 5)
    return FormulaResult(
        quantity=Quantity.MCR,
        source="lex_path",
        value=2,
        related={"gamma_eb2": gamma},
        steps=[
            FormulaStep(id="lex_path_mcr", description="no cost-1 broadcaster fits",
                        formula="mcr = 2 when rad(H) != 1", values=f"rad(H) = {rad_h}", result=2),
            FormulaStep(id="lex_path_gamma", description="cost-2 vertices every fifth H-layer",
                        formula="gamma_eb2 = 2 * ceil(m / 5)", values=f"2 * ceil({m} / 5)", result=gamma),
        ],
    )


_TABLE_FOUR = {9, 16, 18, 23}


def lex_cycle_table(m: int, rad_h: int) -> int:
    """The published case table for mcr(C_m . H), with its "and" read as "or"."""
    if m % 3 == 0 and rad_h == 1:
        return 1
    if m % 5 == 0 or m in (3, 4):
        return 2
    if m in _TABLE_FOUR:
        return 4
    if m == 11:
        return 5
    if m == 13:
        return 6
    return 3


def odd_part_sums(limit: int, largest: int) -> List[bool]:
    """reachable[s]: s is a sum of odd parts from [5, largest] (coin-sum DP)."""
    parts = list(range(5, largest + 1, 2))
    reachable = [False] * (limit + 1)
    reachable[0] = True
    for s in range(1, limit + 1):
        reachable[s] = any(p <= s and reachable[s - p] for p in parts)
    return reachable


def lex_cycle_oracle_value(m: int, rad_h: int) -> int:
    """
    mcr(C_m . H) from the wrap-around and part-sum conditions.

    For rad(H) != 1: the least k >= 2 with 2k+1 >= m or m a sum of odd parts
    in [5, 2k+1]. For rad(H) = 1 the product behaves like C_m.
    """
    if rad_h == 1:
        return cycle_mcr(m).value
    k = 2
    while True:
        if 2 * k + 1 >= m or odd_part_sums(m, 2 * k + 1)[m]:
            return k
        k += 1


def _oracle_is_two_by_fives(m: int) -> bool:
    """Independent check of oracle == 2: m in {3, 4} or m a positive multiple of 5."""
    return m in (3, 4, 5) or (m % 5 == 0 and m > 0)


def lex_cycle_mcr(m: int, rad_h: int) -> Tuple[FormulaResult, FormulaResult]:
    """Published table value and part-sum oracle value for mcr(C_m . H)."""
    if m < 3 or rad_h < 1:
        reason = f"needs m >= 3 and rad(H) >= 1 (m={m}, rad={rad_h})"
        return (
            _not_applicable(Quantity.MCR, "lex_cycle_table", reason),
            _not_applicable(Quantity.MCR, "lex_cycle_oracle", reason),
        )
    table = lex_cycle_table(m, rad_h)
    oracle = lex_cycle_oracle_value(m, rad_h)
    steps = []
    if rad_h != 1:
        consistent = (oracle == 2) == _oracle_is_two_by_fives(m)
        steps.append(FormulaStep(
            id="oracle_two_check",
            description="oracle value 2 matches the multiples-of-5 characterisation",
            formula="oracle == 2 <=> m in {3,4} or 5 | m",
            values=f"m = {m}, oracle = {oracle}",
            result="consistent" if consistent else "inconsistent",
        ))
    table_result = FormulaResult(
        quantity=Quantity.MCR,
        source="lex_cycle_table",
        value=table,
        related={"oracle": oracle},
    )
    oracle_result = FormulaResult(
        quantity=Quantity.MCR,
        source="lex_cycle_oracle",
        value=oracle,
        related={"table": table},
        steps=steps,
    )
    return table_result, oracle_result


def family_mcr(family: str, size: int) -> int:
    """mcr of a basic family member from its closed form."""
    if family in ("path", "complete", "star"):
        return 1
    if family == "cycle":
        result = cycle_mcr(size)
        if not result.applicable:
            raise InvalidParameterError(result.reason)
        return result.value
    raise InvalidParameterError(f"no closed-form mcr for family {family!r}")


def family_gamma(family: str, size: int) -> int:
    """gamma_ebk at k = mcr of a basic family member."""
    if family in ("path", "cycle"):
        return _ceil_div(size, 3)
    if family in ("complete", "star"):
        return 1
    raise InvalidParameterError(f"no closed-form gamma for family {family!r}")


def _factor_mcr(params: Dict, prefix: str) -> int:
    explicit = params.get(f"{prefix}_mcr")
    if explicit is not None:
        return int(explicit)
    family = params.get(f"{prefix}_family")
    size = params.get(f"{prefix}_size")
    if family is None or size is None:
        raise InvalidParameterError(f"params need {prefix}_mcr or {prefix}_family and {prefix}_size")
    return family_mcr(family, int(size))


STRONG_SELECTORS = ("cycle_times_path", "rad1_factor", "lower_bound", "coded_factor")


def strong_mcr(selector: str, params: Dict) -> FormulaResult:
    """
    mcr of a strong product G x H.

    cycle_times_path: {"m"} gives mcr(C_m x P_n) = mcr(C_m).
    rad1_factor: {"g_radius", "h_mcr"[, "h_gamma"]} or H as family/size; when
        rad(G) = 1 the product has mcr(H) and gamma_ebk(H) (in `related`).
    lower_bound: {"g_mcr", "h_mcr"} or families; max of the factors.
    coded_factor: {"m", "h_perfect_1", "h_perfect_2"}; when H has perfect 1-
        and 2-codes, mcr(C_m x H) = mcr(C_m).
    """
    if selector not in STRONG_SELECTORS:
        raise InvalidParameterError(f"unknown selector {selector!r}; expected one of {STRONG_SELECTORS}")

    if selector in ("cycle_times_path", "coded_factor"):
        if "m" not in params:
            raise InvalidParameterError(f"{selector} needs param 'm'")
        m = int(params["m"])
        if selector == "coded_factor" and not (params.get("h_perfect_1") and params.get("h_perfect_2")):
            return _not_applicable(Quantity.MCR, "strong_coded_factor", "H lacks a perfect 1-code or 2-code")
        cycle = cycle_mcr(m)
        if not cycle.applicable:
            return _not_applicable(Quantity.MCR, f"strong_{selector}", cycle.reason)
        return FormulaResult(
            quantity=Quantity.MCR,
            source=f"strong_{selector}",
            value=cycle.value,
            steps=cycle.steps + [FormulaStep(
                id="strong_cycle",
                description="cycle factor decides the product",
                formula="mcr(C_m x H) = mcr(C_m)",
                values=f"m = {m}",
                result=cycle.value,
            )],
        )

    if selector == "rad1_factor":
        g_radius = params.get("g_radius")
        if g_radius is None:
            raise InvalidParameterError("rad1_factor needs param 'g_radius'")
        if int(g_radius) != 1:
            return _not_applicable(Quantity.MCR, "strong_rad1_factor", f"rad(G) = {g_radius}, needs 1")
        h_mcr = _factor_mcr(params, "h")
        related = {}
        if params.get("h_gamma") is not None:
            related["gamma_ebk"] = int(params["h_gamma"])
        elif params.get("h_family") is not None:
            related["gamma_ebk"] = family_gamma(params["h_family"], int(params["h_size"]))
        return FormulaResult(
            quantity=Quantity.MCR,
            source="strong_rad1_factor",
            value=h_mcr,
            related=related,
            steps=[FormulaStep(
                id="rad1",
                description="each H-layer broadcaster keeps its cost",
                formula="mcr(G x H) = mcr(H) when rad(G) = 1",
                values=f"mcr(H) = {h_mcr}",
                result=h_mcr,
            )],
        )

    g_mcr = _factor_mcr(params, "g")
    h_mcr = _factor_mcr(params, "h")
    value = max(g_mcr, h_mcr)
    return FormulaResult(
        quantity=Quantity.MCR,
        source="strong_lower_bound",
        value=value,
        bound=BoundKind.LOWER,
        steps=[FormulaStep(
            id="strong_lower",
            description="a product broadcast projects to each factor",
            formula="mcr(G x H) >= max(mcr(G), mcr(H))",
            values=f"max({g_mcr}, {h_mcr})",
            result=value,
        )],
    )


def lex_mcr_lower(g_mcr: int) -> FormulaResult:
    """mcr(G . H) >= mcr(G)."""
    if g_mcr < 1:
        raise InvalidParameterError(f"mcr(G) must be >= 1, got {g_mcr}")
    return FormulaResult(
        quantity=Quantity.MCR,
        source="lex_lower_bound",
        value=g_mcr,
        bound=BoundKind.LOWER,
    )


def lex_one_free_lift(g_k: int) -> FormulaResult:
    """
    A k-ELDB of G with no cost-1 broadcaster lifts to G . H.

    So the least such k for G . H is at most the one for G.
    """
    if g_k < 2:
        raise InvalidParameterError(f"a cost-one-free k must be >= 2, got {g_k}")
    return FormulaResult(
        quantity=Quantity.MCR_NO_COST_ONE,
        source="lex_one_free_lift",
        value=g_k,
        bound=BoundKind.UPPER,
    )


def chain_direction(values: List[int]) -> str:
    """Direction of a sequence: constant, non-increasing, non-decreasing or mixed."""
    pairs = list(zip(values, values[1:]))
    if all(a == b for a, b in pairs):
        return "constant"
    if all(a >= b for a, b in pairs):
        return "non-increasing"
    if all(a <= b for a, b in pairs):
        return "non-decreasing"
    return "mixed"
