"""
Fourier-Motzkin elimination over Λ = ℚ^k.

Constraints read Σ cⱼ·xⱼ ≥ b (or > b) with rational cⱼ and Λ-valued xⱼ, b.
Λ is a nontrivial divisible ordered group, so projecting out a variable is
exact: any interval [L, U] with L ≤ U contains a point, and rays are unbounded.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .ordered_groups import GroupValue, linear_combination

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearConstraint:
    coefficients: Tuple[Fraction, ...]
    bound: GroupValue
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    def value(self, x: Sequence[GroupValue]) -> GroupValue:
        return linear_combination(self.coefficients, x, self.bound.rank)

    def holds(self, x: Sequence[GroupValue]) -> bool:
        value = self.value(x)
        return value > self.bound if self.strict else value >= self.bound

    def negated(self) -> "LinearConstraint":
        """The complement: Σ cⱼxⱼ < b (resp. ≤ b) written as ≥-form."""
        return LinearConstraint(tuple(-c for c in self.coefficients), -self.bound, not self.strict)

    def normalized(self) -> "LinearConstraint":
        lead = next((abs(c) for c in self.coefficients if c), None)
        if lead is None or lead == 1:
            return self
        return LinearConstraint(tuple(c / lead for c in self.coefficients), self.bound / lead, self.strict)


class Infeasible(Exception):
    pass


def _prune(rows: Sequence[LinearConstraint]) -> List[LinearConstraint]:
    """Drop trivial rows and keep the tightest bound per coefficient vector."""
    tightest: Dict[Tuple[Fraction, ...], LinearConstraint] = {}
    for row in rows:
        row = row.normalized()
        if not any(row.coefficients):
            zero = GroupValue.zero(row.bound.rank)
            if (row.strict and not zero > row.bound) or (not row.strict and not zero >= row.bound):
                raise Infeasible(row)
            continue
        known = tightest.get(row.coefficients)
        if known is None or row.bound > known.bound or (row.bound == known.bound and row.strict):
            tightest[row.coefficients] = row
    return [tightest[key] for key in sorted(tightest)]


def _combine(upper: LinearConstraint, lower: LinearConstraint, column: int) -> LinearConstraint:
    a = upper.coefficients[column]
    b = lower.coefficients[column]
    coefficients = tuple(-b * p + a * q for p, q in zip(upper.coefficients, lower.coefficients))
    bound = upper.bound * -b + lower.bound * a
    return LinearConstraint(coefficients, bound, upper.strict or lower.strict)


def _eliminate(rows: Sequence[LinearConstraint], n_vars: int):
    stages = []
    current = _prune(rows)
    for column in reversed(range(n_vars)):
        stages.append((column, current))
        z = [r for r in current if r.coefficients[column] == 0]
        p = [r for r in current if r.coefficients[column] > 0]
        n = [r for r in current if r.coefficients[column] < 0]
        logger.debug("  x%d: z=%d, p+n=%d, p*n=%d", column, len(z), len(p) + len(n), len(p) * len(n))
        current = _prune(z + [_combine(up, low, column) for up in p for low in n])
    return stages


def _pick(rows: Sequence[LinearConstraint], column: int, known: Sequence[GroupValue], rank: int, lowest: bool):
    lower: Optional[GroupValue] = None
    upper: Optional[GroupValue] = None
    lower_strict = upper_strict = False
    for row in rows:
        c = row.coefficients[column]
        if c == 0:
            continue
        rest = row.bound - linear_combination(row.coefficients[:column], known, rank) if column else row.bound
        limit = rest / c
        if c > 0:
            if lower is None or limit > lower:
                lower, lower_strict = limit, row.strict
            elif limit == lower:
                lower_strict = lower_strict or row.strict
        else:
            if upper is None or limit < upper:
                upper, upper_strict = limit, row.strict
            elif limit == upper:
                upper_strict = upper_strict or row.strict
    unit = GroupValue.unit(rank)
    if lower is not None and upper is not None:
        if lower == upper:
            if lower_strict or upper_strict:
                raise Infeasible((column, lower))
            return lower
        if lowest and not lower_strict:
            return lower
        return (lower + upper) / 2
    if lower is not None:
        return lower + unit if lower_strict else lower
    if upper is not None:
        return upper - unit if upper_strict else upper
    return GroupValue.zero(rank)


def _back_substitute(stages, n_vars: int, rank: int, lowest_first: bool) -> Tuple[GroupValue, ...]:
    values: List[GroupValue] = []
    for column, rows in reversed(stages):
        values.append(_pick(rows, column, values, rank, lowest_first and column == 0))
    return tuple(values)


def solve(rows: Sequence[LinearConstraint], n_vars: int, rank: int) -> Optional[Tuple[GroupValue, ...]]:
    """A point satisfying every row, or None when the system is infeasible."""
    if rank == 0:
        origin = tuple(GroupValue.zero(0) for _ in range(n_vars))
        return origin if all(r.holds(origin) for r in rows) else None
    logger.debug("Eliminate: %d rows in %d variables", len(rows), n_vars)
    try:
        stages = _eliminate(rows, n_vars)
        point = _back_substitute(stages, n_vars, rank, lowest_first=False)
    except Infeasible:
        return None
    assert all(r.holds(point) for r in rows), "elimination produced an invalid witness"
    return point


@dataclass(frozen=True)
class Minimum:
    """``value`` is None when the objective is unbounded below."""

    value: Optional[GroupValue]
    witness: Tuple[GroupValue, ...]


def minimize(
    rows: Sequence[LinearConstraint], objective: Sequence[Fraction], n_vars: int, rank: int
) -> Optional[Minimum]:
    """Lexicographic minimum of Σ oⱼxⱼ over a system of non-strict rows; None if infeasible."""
    if rank == 0:
        point = solve(rows, n_vars, rank)
        return None if point is None else Minimum(GroupValue.zero(0), point)
    zero = GroupValue.zero(rank)
    lifted = [LinearConstraint((Fraction(0),) + r.coefficients, r.bound, r.strict) for r in rows]
    lifted.append(LinearConstraint((Fraction(1),) + tuple(-Fraction(o) for o in objective), zero))
    lifted.append(LinearConstraint((Fraction(-1),) + tuple(Fraction(o) for o in objective), zero))
    try:
        stages = _eliminate(lifted, n_vars + 1)
        bounded = any(r.coefficients[0] > 0 for r in stages[-1][1])
        point = _back_substitute(stages, n_vars + 1, rank, lowest_first=True)
    except Infeasible:
        return None
    witness = point[1:]
    assert all(r.holds(witness) for r in rows)
    return Minimum(point[0] if bounded else None, witness)
