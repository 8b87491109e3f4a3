from fractions import Fraction

import pytest

from buildings.base_change import EpiFunctor, MonoFunctor
from buildings.chart_complex import BuildingPoint, ChartComplex, validate
from buildings.errors import (
    GeneratorViolation,
    NotFiniteGroupError,
    OrbitCapExceededError,
    UnsupportedComplexClassError,
)
from buildings.group_actions import (
    IsometryAction,
    IsometryGenerator,
    centroid,
    fixed_point,
    generated_group,
    orbit,
    orbit_bound,
    tree_circumcenter,
)
from buildings.model_space import AffineMap, ModelSpace, Point
from buildings.ordered_groups import GroupValue, embedding, quotient_epi
from buildings.root_systems import build
from buildings.serialization import atlas_from_document, parse_generators


def v(*entries):
    return GroupValue.of(*entries)


def q(*entries):
    return Point(tuple(GroupValue.of(x) for x in entries))


def q2(*pairs):
    return Point(tuple(GroupValue.of(*pair) for pair in pairs))


def flat(space):
    return validate(ChartComplex(space, ["A"]))


def acting(cc, *maps):
    return IsometryAction(cc, [IsometryGenerator.affine("A", w) for w in maps])


def test_trivial_group_fixes_everything(a1q):
    cc = flat(a1q)
    action = acting(cc)
    x0 = BuildingPoint("A", q(5))
    assert orbit(action, x0) == [x0]
    assert len(generated_group(action)) == 1
    result = fixed_point(action, x0)
    assert result.point == x0 and result.trace == ()


def test_reflection_orbit(a1q):
    cc = flat(a1q)
    action = acting(cc, AffineMap.reflection(a1q.root_system, (1,), v(0)))
    assert orbit(action, BuildingPoint("A", q(3))) == [BuildingPoint("A", q(3)), BuildingPoint("A", q(-3))]
    assert len(generated_group(action)) == 2


def test_spherical_weyl_group_orbit(a2q):
    cc = flat(a2q)
    rs = a2q.root_system
    action = acting(cc, *(AffineMap(s, a2q.origin) for s in rs.simple_reflections))
    assert len(generated_group(action)) == 6
    assert len(orbit(action, BuildingPoint("A", q(1, 0)))) == 6
    result = fixed_point(action, BuildingPoint("A", q(1, 0)))
    assert result.point == BuildingPoint("A", a2q.origin)
    assert [layer.orbit_size for layer in result.trace] == [6]


def test_orbit_bound(a1q2):
    cc = flat(a1q2)
    x0 = BuildingPoint("A", a1q2.origin)
    bound = orbit_bound(cc, [x0, BuildingPoint("A", q2((0, 6)))], x0)
    assert bound.g0 == v(0, 12)
    bound = orbit_bound(cc, [x0, BuildingPoint("A", q2((1, 0)))], x0)
    assert bound.g0 == v(2, 0)
    assert orbit_bound(cc, [x0], x0).trivial


def test_fixed_point_of_an_affine_reflection(a1q, a1q2):
    action = acting(flat(a1q), AffineMap.reflection(a1q.root_system, (1,), v(1)))
    assert fixed_point(action).point == BuildingPoint("A", q(Fraction(1, 2)))
    action = acting(flat(a1q2), AffineMap.reflection(a1q2.root_system, (1,), v(1, 0)))
    result = fixed_point(action)
    assert result.point == BuildingPoint("A", q2((Fraction(1, 2), 0)))
    assert len(result.trace) == 1


def test_fixed_point_descends_through_layers(a1q2):
    action = acting(flat(a1q2), AffineMap.reflection(a1q2.root_system, (1,), v(1, 1)))
    result = fixed_point(action)
    assert result.point == BuildingPoint("A", q2((Fraction(1, 2), Fraction(1, 2))))
    assert [layer.index for layer in result.trace] == [1, 2]
    assert result.to_dict()["trace"][1] == {
        "leading_index": 2,
        "M_level": 2,
        "N_level": 3,
        "orbit_size": 2,
        "g0": ["0/1", "2/1"],
    }


def _random_value(rng):
    return v(Fraction(rng.randint(-4, 4), rng.randint(1, 2)), Fraction(rng.randint(-4, 4), rng.randint(1, 3)))


@pytest.mark.parametrize("space", ["a1q2", "a2q2"])
def test_fixed_point_matches_orbit_centroid(space, request, rng):
    space = request.getfixturevalue(space)
    cc = flat(space)
    rs = space.root_system
    for _ in range(12):
        t = Point(tuple(_random_value(rng) for _ in range(space.rank)))
        maps = []
        for w in rng.sample(rs.elements[1:], min(len(rs.elements) - 1, rng.randint(1, 2))):
            maps.append(AffineMap(w, t - Point(w.act(t.coords))))
        action = acting(cc, *maps)
        x0 = BuildingPoint("A", Point(tuple(_random_value(rng) for _ in range(space.rank))))
        expected = centroid([p.point for p in orbit(action, x0)])
        result = fixed_point(action, x0)
        assert result.point == BuildingPoint("A", expected)
        assert action.fixes(result.point)
        assert len(result.trace) <= space.group_rank


def test_tripod_rotation(tripod, rotation_document):
    action = IsometryAction(tripod, parse_generators(rotation_document, tripod))
    x0 = BuildingPoint("A", q2((-2, 0)))
    points = orbit(action, x0)
    assert points == [x0, BuildingPoint("A", q2((2, 0))), BuildingPoint("B", q2((2, 0)))]
    assert len(generated_group(action)) == 3
    result = fixed_point(action, x0)
    assert result.point == BuildingPoint("A", tripod.space.origin)
    assert result.trace[0].bound == v(8, 0)


def test_tree_circumcenter(tripod_q):
    legs = [BuildingPoint("A", q(-2)), BuildingPoint("A", q(2)), BuildingPoint("B", q(2))]
    found = tree_circumcenter(tripod_q, legs)
    assert found.center == BuildingPoint("A", q(0))
    assert found.radius == v(4)
    assert tripod_q.distance(*found.pair) == v(8)


def test_translations_generate_an_infinite_group(a1q, monkeypatch):
    action = acting(flat(a1q), AffineMap.translation_by(a1q.root_system, q(1)))
    with pytest.raises(NotFiniteGroupError):
        generated_group(action, cap=50)
    with pytest.raises(OrbitCapExceededError):
        orbit(action, BuildingPoint("A", q(0)), cap=5)
    monkeypatch.setenv("LAMBDA_BUILDINGS_ORBIT_CAP", "20")
    with pytest.raises(NotFiniteGroupError):
        fixed_point(action)


def test_generator_must_permute_charts(tripod):
    identity = AffineMap.identity(tripod.root_system, 2)
    generator = IsometryGenerator.of({"A": "A", "B": "A", "C": "C"}, {f: identity for f in "ABC"})
    with pytest.raises(GeneratorViolation):
        IsometryAction(tripod, [generator])


def test_generator_must_respect_gluings(tripod):
    reflection = AffineMap.reflection(tripod.root_system, (1,), v(0, 0))
    generator = IsometryGenerator.of({f: f for f in "ABC"}, {f: reflection for f in "ABC"})
    with pytest.raises(GeneratorViolation) as error:
        IsometryAction(tripod, [generator])
    assert error.value.witness["pair"] == ["A", "B"]


def test_fixed_points_need_a_flat_or_a_tree():
    document = {
        "root_system": {"type": "A", "rank": 2},
        "group_rank": 1,
        "charts": ["A", "B"],
        "gluings": [
            {"pair": ["A", "B"], "region": [{"root": [1, 0], "offset": ["0/1"]}], "weyl": {"word": []}},
        ],
    }
    cc = validate(atlas_from_document(document))
    with pytest.raises(UnsupportedComplexClassError):
        fixed_point(IsometryAction(cc, []))


def test_pushforward_commutes_with_base_change(tripod, rotation_document, rng):
    action = IsometryAction(tripod, parse_generators(rotation_document, tripod))
    functor = EpiFunctor(tripod.space, quotient_epi(1, 2))
    image = functor.complex(tripod)
    pushed = action.pushforward(functor, image.complex)
    for _ in range(50):
        p = BuildingPoint(rng.choice("ABC"), q2((rng.randint(-3, 3), rng.randint(-3, 3))))
        assert image.complex.equal(
            image.point_map(action.generators[0](p)), pushed.generators[0](image.point_map(p))
        )


def test_shear_moves_points_boundedly_but_is_not_an_isometry(a1q2):
    """(x, y) ↦ (x, y + kx) on a single Λ-coordinate."""

    def shear(point, k):
        (value,) = point.coords
        x, y = value.coords
        return Point((v(x, y + k * x),))

    for x, y, k in [(1, 0, 3), (-2, 5, 1), (0, 4, 7)]:
        p = q2((x, y))
        assert a1q2.distance(p, shear(p, k)) == v(0, 2 * abs(k * x))
        assert a1q2.distance(p, shear(p, k)) < v(2, 0)
    p, r = q2((1, 0)), q2((2, 0))
    assert a1q2.distance(p, r) == v(2, 0)
    assert a1q2.distance(shear(p, 1), shear(r, 1)) == v(2, 2)


def tripod_rotation(cc):
    rs = cc.root_system
    identity = AffineMap.identity(rs, cc.group_rank)
    reflection = AffineMap.reflection(rs, (1,), GroupValue.zero(cc.group_rank))
    return IsometryGenerator.of({"A": "C", "B": "A", "C": "B"}, {"A": identity, "B": reflection, "C": reflection})


def test_pushforward_along_an_embedding(tripod_q, rng):
    action = IsometryAction(tripod_q, [tripod_rotation(tripod_q)])
    functor = MonoFunctor(tripod_q.space, embedding([2], [Fraction(3)], 2))
    image = functor.complex(tripod_q)
    pushed = action.pushforward(functor, image.complex)
    for _ in range(50):
        p = BuildingPoint(rng.choice("ABC"), q(Fraction(rng.randint(-6, 6), 2)))
        assert image.complex.equal(
            image.point_map(action.generators[0](p)), pushed.generators[0](image.point_map(p))
        )


def test_tripod_fixed_point_through_an_infinitesimal_layer(tripod):
    action = IsometryAction(tripod, [tripod_rotation(tripod)])
    x0 = BuildingPoint("A", q2((0, -2)))
    assert orbit(action, x0) == [x0, BuildingPoint("A", q2((0, 2))), BuildingPoint("B", q2((0, 2)))]
    result = fixed_point(action, x0)
    assert result.point == BuildingPoint("A", tripod.space.origin)
    assert [layer.to_dict() for layer in result.trace] == [
        {"leading_index": 2, "M_level": 2, "N_level": 3, "orbit_size": 3, "g0": ["0/1", "8/1"]}
    ]


@pytest.mark.parametrize("word, order", [([0, 1], 6), (None, 12)])
def test_fixed_point_of_g2_groups(word, order):
    space = ModelSpace(build("G", 2), 2)
    rs = space.root_system
    t = q2((1, 0), (Fraction(-1, 2), 3))
    linears = rs.simple_reflections if word is None else [rs.from_word(word)]
    action = acting(flat(space), *(AffineMap(w, t - Point(w.act(t.coords))) for w in linears))
    assert len(generated_group(action)) == order
    x0 = BuildingPoint("A", t + q2((1, 0), (0, 1)))
    assert len(orbit(action, x0)) == order
    result = fixed_point(action, x0)
    assert result.point == BuildingPoint("A", t)
    assert len(result.trace) <= space.group_rank


def test_centroid_commutes_with_affine_weyl_maps(a2q, rng):
    rs = a2q.root_system
    for _ in range(100):
        points = [q(Fraction(rng.randint(-8, 8), 2), Fraction(rng.randint(-8, 8), 3)) for _ in range(rng.randint(1, 5))]
        w = AffineMap(rng.choice(rs.elements), q(rng.randint(-3, 3), Fraction(rng.randint(-3, 3), 2)))
        assert centroid([w(p) for p in points]) == w(centroid(points))


def test_tree_circumcenter_is_minimal(tripod_q, rng):
    def sample():
        return BuildingPoint(rng.choice("ABC"), q(Fraction(rng.randint(-8, 8), 2)))

    for _ in range(50):
        points = [sample() for _ in range(rng.randint(1, 5))]
        found = tree_circumcenter(tripod_q, points)
        assert found.radius == max(tripod_q.distance(found.center, p) for p in points)
        for _ in range(20):
            y = sample()
            assert found.radius <= max(tripod_q.distance(y, p) for p in points)
