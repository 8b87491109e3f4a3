from fractions import Fraction
from itertools import product

import pytest

from buildings.errors import EmptyInputError, PointInsideError, PointOutsideError, TypeMismatchError
from buildings.model_space import AffineMap, ConvexSet, HalfApartment, Point
from buildings.ordered_groups import GroupValue


def v(*entries):
    return GroupValue.of(*entries)


def q(*entries):
    """A point over Λ = ℚ."""
    return Point(tuple(GroupValue.of(x) for x in entries))


def q2(*pairs):
    """A point over Λ = ℚ²."""
    return Point(tuple(GroupValue.of(*pair) for pair in pairs))


def half(n):
    return Fraction(n, 2)


def random_point(rng, rank=2):
    return q(*(half(rng.randint(-8, 8)) for _ in range(rank)))


def random_affine(rng, space):
    w = rng.choice(space.root_system.elements)
    return AffineMap(w, random_point(rng, space.rank))


def test_distance_anchors(a1q, a2q, a1q2):
    assert a2q.distance(a2q.origin, q(1, 0)) == v(4)
    assert a1q.distance(a1q.origin, q(3)) == v(6)
    assert a1q.distance(q(2), q(2)) == v(0)
    assert a1q2.distance(q2((0, 1)), q2((1, 0))) == v(2, -2)


def random_lex_point(rng, rank=2):
    return q2(*((rng.randint(-3, 3), half(rng.randint(-8, 8))) for _ in range(rank)))


@pytest.mark.parametrize(
    "space, sample",
    [
        ("a1q", lambda rng: random_point(rng, 1)),
        ("a2q", random_point),
        ("a2q2", random_lex_point),
    ],
)
def test_metric_axioms(space, sample, request, rng):
    space = request.getfixturevalue(space)
    for _ in range(1000):
        x, y, z = (sample(rng) for _ in range(3))
        d = space.distance(x, y)
        assert d == space.distance(y, x)
        assert d.sign() >= 0
        assert d.is_zero == (x == y)
        assert space.distance(x, z) <= d + space.distance(y, z)
        w = AffineMap(rng.choice(space.root_system.elements), sample(rng))
        assert space.distance(w(x), w(y)) == d


def test_distance_along_a_root(a1q, rng):
    for _ in range(50):
        t = Fraction(rng.randint(-20, 20), rng.randint(1, 5))
        assert a1q.distance(a1q.origin, q(t)) == v(2 * abs(t))


def test_distance_is_invariant_under_affine_weyl_maps(a2q, rng):
    for _ in range(100):
        w = random_affine(rng, a2q)
        x, y = random_point(rng), random_point(rng)
        assert a2q.distance(w(x), w(y)) == a2q.distance(x, y)


def test_affine_maps(a1q, a1q2):
    rs = a1q.root_system
    assert AffineMap.identity(rs, 1).apply(q(5)) == q(5)
    assert AffineMap.reflection(rs, (1,), v(0)).apply(q(3)) == q(-3)
    reflection = AffineMap.reflection(rs, (1,), v(1, 0))
    assert a1q2.apply(reflection, a1q2.origin) == q2((1, 0))
    assert reflection(q2((half(1), 0))) == q2((half(1), 0))
    assert reflection.compose(reflection).is_identity


def test_affine_inverse_and_composition(a2q, rng):
    for _ in range(50):
        f, g = random_affine(rng, a2q), random_affine(rng, a2q)
        x = random_point(rng)
        assert f.inverse()(f(x)) == x
        assert (f @ g)(x) == f(g(x))


def test_is_empty_examples(a1q):
    K = ConvexSet((a1q.at_least((1,), v(0)), a1q.at_least((1,), v(-1))))
    empty, witness = a1q.is_empty(K)
    assert not empty and a1q.contains(K, witness)
    K = ConvexSet((a1q.at_least((1,), v(1)), a1q.at_most((1,), v(-1))))
    assert a1q.is_empty(K) == (True, None)


def test_is_empty_matches_grid_oracle(a2q, rng):
    roots = a2q.root_system.roots
    grid = [q(half(a), half(b)) for a, b in product(range(-8, 9), repeat=2)]
    for _ in range(200):
        K = ConvexSet(
            tuple(HalfApartment(rng.choice(roots), v(rng.randint(-3, 3))) for _ in range(rng.randint(2, 5)))
        )
        empty, witness = a2q.is_empty(K)
        if empty:
            assert not any(a2q.contains(K, x) for x in grid)
        else:
            assert a2q.contains(K, witness)


def test_convex_hull(a1q, a2q):
    K = a1q.convex_hull([a1q.origin, q(2)])
    assert a1q.contains(K, q(1))
    assert not a1q.contains(K, q(3))
    K = a2q.convex_hull([a2q.origin, q(1, 0)])
    assert a2q.contains(K, q(half(1), 0))
    assert not a2q.contains(K, q(0, 1))
    with pytest.raises(EmptyInputError):
        a2q.convex_hull([])


def test_transform_moves_sets_with_points(a2q, rng):
    roots = a2q.root_system.roots
    for _ in range(50):
        K = ConvexSet(tuple(HalfApartment(rng.choice(roots), v(rng.randint(-2, 2))) for _ in range(3)))
        w = random_affine(rng, a2q)
        image = a2q.transform(K, w)
        for _ in range(10):
            x = random_point(rng)
            assert a2q.contains(image, w(x)) == a2q.contains(K, x)


def test_germ_in_convex_examples(a1q, a2q):
    rs = a1q.root_system
    assert a1q.germ_in_convex(a1q.germ(a1q.origin, rs.identity), ConvexSet())
    K = ConvexSet((a1q.at_least((1,), v(0)),))
    assert a1q.germ_in_convex(a1q.germ(a1q.origin, rs.identity), K)
    assert not a1q.germ_in_convex(a1q.germ(a1q.origin, rs.from_word([0])), K)
    K = ConvexSet((a2q.at_least((1, 0), v(0)),))
    assert a2q.germ_in_convex(a2q.germ(a2q.origin, a2q.root_system.from_word([1])), K)
    with pytest.raises(PointOutsideError):
        a1q.germ_in_convex(a1q.germ(q(-1), rs.identity), ConvexSet((a1q.at_least((1,), v(0)),)))


def _rays(space, w, face):
    rs = space.root_system
    return [Point(w.act(tuple(GroupValue.of(c) for c in rs.fundamental_weight(j)))) for j in sorted(face)]


def test_germ_in_convex_matches_ray_sampling(a2q, rng):
    rs = a2q.root_system
    faces = [frozenset({0}), frozenset({1}), frozenset({0, 1})]
    epsilon = Fraction(1, 1024)
    for _ in range(200):
        base = random_point(rng)
        constraints = []
        for _ in range(rng.randint(1, 4)):
            root = rng.choice(rs.roots)
            slack = rng.choice([0, 0, half(1), 1])
            constraints.append(HalfApartment(root, a2q.pairing(base, root) - v(slack)))
        K = ConvexSet(tuple(constraints))
        w, face = rng.choice(rs.elements), rng.choice(faces)
        sampled = all(a2q.contains(K, base + ray * epsilon) for ray in _rays(a2q, w, face))
        assert a2q.germ_in_convex(a2q.germ(base, w, face), K) == sampled


def test_exit_simplex_on_a_line(a1q):
    K = ConvexSet((a1q.at_most((1,), v(0)),))
    y, S = a1q.exit_simplex(K, q(1))
    assert y == a1q.origin
    assert S.direction.is_identity and S.face == frozenset({0})
    assert a1q.contains(a1q.simplex_set(S), q(1))


def test_exit_simplex_towards_a_point(a2q):
    x = q(1, 0)
    y, S = a2q.exit_simplex(a2q.convex_hull([a2q.origin]), x)
    assert y == a2q.origin
    assert S == a2q.minimal_simplex(a2q.origin, x)
    assert S.dimension == 2


def test_exit_simplex_meets_convex_set_only_at_its_base(a2q):
    K = ConvexSet((a2q.at_most((1, 0), v(0)),))
    x = q(1, 0)
    y, S = a2q.exit_simplex(K, x)
    assert a2q.contains(K, y)
    assert a2q.contains(a2q.simplex_set(S), x)
    rows = a2q.rows(a2q.simplex_set(S) & K) + [a2q._punctured(S)]
    assert a2q.solve(rows) is None


def test_exit_simplex_errors(a1q):
    K = ConvexSet((a1q.at_most((1,), v(0)),))
    with pytest.raises(PointInsideError):
        a1q.exit_simplex(K, q(-1))
    empty = ConvexSet((a1q.at_least((1,), v(1)), a1q.at_most((1,), v(-1))))
    with pytest.raises(EmptyInputError):
        a1q.exit_simplex(empty, q(5))


def test_parallel(a1q, a2q):
    rs = a1q.root_system
    assert a1q.parallel(a1q.simplex(a1q.origin, rs.identity), a1q.simplex(q(7), rs.identity))
    assert not a1q.parallel(a1q.simplex(a1q.origin, rs.identity), a1q.simplex(a1q.origin, rs.from_word([0])))
    a2 = a2q.root_system
    assert not a2q.parallel(a2q.simplex(a2q.origin, a2.identity), a2q.simplex(a2q.origin, a2.from_word([0])))
    assert a2q.parallel(a2q.simplex(a2q.origin, a2.identity, {0}), a2q.simplex(q(1, 1), a2.from_word([1]), {0}))
    with pytest.raises(TypeMismatchError):
        a2q.parallel(a2q.simplex(a2q.origin, a2.identity, {0}), a2q.simplex(a2q.origin, a2.identity, {1}))


def test_canonical_direction_and_minimal_simplex(a2q):
    rs = a2q.root_system
    assert a2q.canonical_direction(rs.from_word([1]), {0}).is_identity
    assert a2q.minimal_simplex(a2q.origin, a2q.origin).dimension == 0
    S = a2q.minimal_simplex(a2q.origin, q(Fraction(2, 3), Fraction(1, 3)))
    assert S.face == frozenset({0}) and S.direction.is_identity


def test_direction_in_recession(a1q, a2q):
    rs = a1q.root_system
    assert all(a2q.direction_in_recession(w, ConvexSet()) for w in a2q.root_system.elements)
    K = ConvexSet((a1q.at_least((1,), v(0)),))
    assert a1q.direction_in_recession(rs.identity, K)
    assert not a1q.direction_in_recession(rs.from_word([0]), K)
    K = ConvexSet((a2q.at_least((1, 0), v(0)),))
    assert sum(a2q.direction_in_recession(w, K) for w in a2q.root_system.elements) == 3


def test_subsets_and_equal_sets(a1q, a2q):
    segment = a1q.convex_hull([a1q.origin, q(2)])
    ray = ConvexSet((a1q.at_least((1,), v(0)),))
    assert a1q.is_subset(segment, ray)
    assert not a1q.is_subset(ray, segment)
    redundant = ConvexSet(ray.constraints + (a1q.at_least((1,), v(-5)),))
    assert a1q.same_set(ray, redundant)
    assert not a2q.same_set(ConvexSet(), ConvexSet((a2q.at_least((1, 1), v(0)),)))


def test_minimize_over_a_convex_set(a1q, a1q2):
    K = ConvexSet((a1q.at_least((1,), v(1)),))
    result = a1q.minimize(K, (1,))
    assert result.value == v(half(1))
    assert a1q.minimize(K, (-1,)).value is None
    K = ConvexSet((a1q2.at_least((1,), v(0, -3)), a1q2.at_most((1,), v(4, 0))))
    assert a1q2.minimize(K, (1,)).value == v(0, Fraction(-3, 2))
    assert a1q2.minimize(K, (-1,)).value == v(-2, 0)


def test_simplex_direction_in_recession(a2q):
    rs = a2q.root_system
    K = ConvexSet((a2q.at_least((1, 0), v(0)),))
    assert a2q.simplex_direction_in_recession(rs.identity, frozenset({0}), K)
    assert not a2q.simplex_direction_in_recession(rs.from_word([0]), frozenset({0}), K)
    assert a2q.simplex_direction_in_recession(rs.from_word([0]), frozenset({1}), K)


def random_region(rng, space):
    roots = space.root_system.roots
    return ConvexSet(tuple(HalfApartment(rng.choice(roots), v(rng.randint(-2, 2))) for _ in range(rng.randint(1, 3))))


def test_recession_of_an_intersection(a2q, rng):
    rs = a2q.root_system
    faces = [frozenset({0}), frozenset({1})]
    for _ in range(100):
        first, second = random_region(rng, a2q), random_region(rng, a2q)
        for w in rs.elements:
            both = a2q.direction_in_recession(w, first) and a2q.direction_in_recession(w, second)
            assert a2q.direction_in_recession(w, first & second) == both
            face = rng.choice(faces)
            both = a2q.simplex_direction_in_recession(w, face, first) and a2q.simplex_direction_in_recession(
                w, face, second
            )
            assert a2q.simplex_direction_in_recession(w, face, first & second) == both


def test_convex_hull_ignores_interior_points(a2q, rng):
    for _ in range(50):
        points = [random_point(rng) for _ in range(rng.randint(1, 4))]
        hull = a2q.convex_hull(points)
        inner = sum(points[1:], points[0]) / len(points)
        assert a2q.contains(hull, inner)
        assert a2q.same_set(a2q.convex_hull(points + [inner]), hull)
        assert a2q.same_set(a2q.convex_hull(points + [points[-1]]), hull)
