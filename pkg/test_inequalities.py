from buildings.inequalities import LinearConstraint, minimize, solve
from buildings.ordered_groups import GroupValue


def v(*entries):
    return GroupValue.of(*entries)


def test_interval_is_feasible():
    rows = [LinearConstraint((1,), v(1)), LinearConstraint((-1,), v(-3))]
    (x,) = solve(rows, 1, 1)
    assert v(1) <= x <= v(3)


def test_contradiction_is_infeasible():
    rows = [LinearConstraint((1,), v(1)), LinearConstraint((-1,), v(1))]
    assert solve(rows, 1, 1) is None


def test_strict_rows_exclude_the_boundary():
    rows = [LinearConstraint((1,), v(0), strict=True), LinearConstraint((-1,), v(0), strict=True)]
    assert solve(rows, 1, 1) is None
    rows = [LinearConstraint((1,), v(0), strict=True), LinearConstraint((-1,), v(-1))]
    (x,) = solve(rows, 1, 1)
    assert v(0) < x <= v(1)


def test_lexicographic_bounds_pin_a_point():
    rows = [LinearConstraint((1,), v(0, 1)), LinearConstraint((-1,), v(0, -1))]
    assert solve(rows, 1, 2) == (v(0, 1),)


def test_infinitesimal_gap_is_feasible():
    # 0 < x < (0, 1) has points in ℚ² even though no integer multiple fits
    rows = [LinearConstraint((1,), v(0, 0), strict=True), LinearConstraint((-1,), v(0, -1), strict=True)]
    (x,) = solve(rows, 1, 2)
    assert v(0, 0) < x < v(0, 1)


def test_two_variable_witness_satisfies_all_rows():
    rows = [
        LinearConstraint((1, 1), v(2)),
        LinearConstraint((1, -1), v(0)),
        LinearConstraint((-1, 0), v(-5)),
    ]
    point = solve(rows, 2, 1)
    assert point is not None
    assert all(row.holds(point) for row in rows)


def test_minimize():
    rows = [LinearConstraint((1,), v(1, -5))]
    result = minimize(rows, (1,), 1, 2)
    assert result.value == v(1, -5)
    assert result.witness == (v(1, -5),)


def test_minimize_unbounded_and_infeasible():
    assert minimize([LinearConstraint((-1,), v(-3))], (1,), 1, 1).value is None
    rows = [LinearConstraint((1,), v(1)), LinearConstraint((-1,), v(1))]
    assert minimize(rows, (1,), 1, 1) is None
