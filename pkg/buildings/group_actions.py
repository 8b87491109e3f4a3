"""
Finite isometry groups acting on chart complexes, and their fixed points.

The fixed point is found layer by layer: bound the orbit by g₀, pass to the
archimedean layer M_g₀/N_g₀ by two base changes (the fiber of Λ → Λ/M_g₀,
then its truncation to M_g₀/N_g₀), fix the induced action there, and repeat
from a lift of that point. Each layer strictly deepens the leading
index of g₀, so at most rank(Λ) layers are needed.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .base_change import CoordinateFunctor, EpiFunctor, fiber
from .chart_complex import BuildingPoint, ChartComplex, isometry_violation
from .config import orbit_cap
from .errors import (
    EmptyInputError,
    GeneratorViolation,
    NotFiniteGroupError,
    OrbitCapExceededError,
    UnsupportedComplexClassError,
)
from .model_space import AffineMap, Point
from .ordered_groups import ConvexSubgroup, GroupValue, convex_subgroups, quotient_epi

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IsometryGenerator:
    """(f, a) ↦ (chart_map[f], maps[f]·a)."""

    chart_map: Tuple[Tuple[str, str], ...]
    maps: Tuple[Tuple[str, AffineMap], ...]

    @classmethod
    def of(cls, chart_map: Dict[str, str], maps: Dict[str, AffineMap]) -> "IsometryGenerator":
        return cls(tuple(sorted(chart_map.items())), tuple(sorted(maps.items())))

    @classmethod
    def affine(cls, chart: str, w: AffineMap) -> "IsometryGenerator":
        return cls.of({chart: chart}, {chart: w})

    def target(self, chart: str) -> str:
        return dict(self.chart_map)[chart]

    def map_for(self, chart: str) -> AffineMap:
        return dict(self.maps)[chart]

    def __call__(self, p: BuildingPoint) -> BuildingPoint:
        return BuildingPoint(self.target(p.chart), self.map_for(p.chart).apply(p.point))

    def then(self, other: "IsometryGenerator") -> "IsometryGenerator":
        """other ∘ self."""
        chart_map = {f: other.target(self.target(f)) for f, _ in self.chart_map}
        maps = {f: other.map_for(self.target(f)).compose(self.map_for(f)) for f, _ in self.chart_map}
        return IsometryGenerator.of(chart_map, maps)


class IsometryAction:
    def __init__(self, complex_: ChartComplex, generators: Iterable[IsometryGenerator]):
        self.complex = complex_
        self.generators: Tuple[IsometryGenerator, ...] = tuple(generators)
        for index, generator in enumerate(self.generators):
            self._check(index, generator)

    def _check(self, index: int, generator: IsometryGenerator) -> None:
        found = isometry_violation(self.complex, self.complex, dict(generator.chart_map), dict(generator.maps))
        if found is not None:
            message, witness = found
            raise GeneratorViolation(f"Generator {index} {message}", witness={"generator": index, **witness})

    def apply(self, index: int, p: BuildingPoint) -> BuildingPoint:
        return self.generators[index](self.complex.check_point(p))

    def fixes(self, p: BuildingPoint) -> bool:
        return all(self.complex.equal(g(p), p) for g in self.generators)

    def pushforward(self, functor: CoordinateFunctor, image: ChartComplex) -> "IsometryAction":
        """The induced action on a base-changed complex."""
        generators = [
            IsometryGenerator(g.chart_map, tuple((f, functor.weyl(w)) for f, w in g.maps)) for g in self.generators
        ]
        return IsometryAction(image, generators)


def _key(generator: IsometryGenerator):
    return tuple((f, w.linear.matrix, w.translation) for f, w in generator.maps) + generator.chart_map


def generated_group(action: IsometryAction, cap: Optional[int] = None) -> List[IsometryGenerator]:
    """All elements of the group generated by the action, identity first."""
    cap = orbit_cap() if cap is None else cap
    cc = action.complex
    identity = IsometryGenerator.of(
        {f: f for f in cc.charts}, {f: AffineMap.identity(cc.root_system, cc.group_rank) for f in cc.charts}
    )
    seen = {_key(identity)}
    elements = [identity]
    frontier = [identity]
    while frontier:
        following = []
        for element in frontier:
            for generator in action.generators:
                product = element.then(generator)
                key = _key(product)
                if key in seen:
                    continue
                seen.add(key)
                elements.append(product)
                following.append(product)
                if len(elements) > cap:
                    raise NotFiniteGroupError(
                        f"Group closure exceeds {cap} elements",
                        witness={"cap": cap, "generators": len(action.generators)},
                    )
        frontier = following
    logger.debug("Generated group of order %d", len(elements))
    return elements


def orbit(action: IsometryAction, x0: BuildingPoint, cap: Optional[int] = None) -> List[BuildingPoint]:
    """Closure of {x₀} under the generators, as canonical representatives."""
    cap = orbit_cap() if cap is None else cap
    cc = action.complex
    start = cc.canonical(x0)
    seen = {start}
    points = [start]
    frontier = [start]
    while frontier:
        following = []
        for p in frontier:
            for generator in action.generators:
                image = cc.canonical(generator(p))
                if image in seen:
                    continue
                seen.add(image)
                points.append(image)
                following.append(image)
                if len(points) > cap:
                    raise OrbitCapExceededError(
                        f"Orbit exceeds {cap} points", witness={"cap": cap, "x0": x0.to_json()}
                    )
        frontier = following
    logger.debug("Orbit of %s has %d points", x0, len(points))
    return points


@dataclass(frozen=True)
class OrbitBound:
    orbit: Tuple[BuildingPoint, ...]
    g0: GroupValue

    @property
    def trivial(self) -> bool:
        return self.g0.is_zero


def orbit_bound(cc: ChartComplex, points: Sequence[BuildingPoint], x0: BuildingPoint) -> OrbitBound:
    if not points:
        raise EmptyInputError("Orbit bound of an empty orbit")
    return OrbitBound(tuple(points), max(cc.distance(x0, p) for p in points))


def centroid(points: Sequence[Point]) -> Point:
    if not points:
        raise EmptyInputError("Centroid of an empty point set")
    total = points[0]
    for p in points[1:]:
        total = total + p
    return total / len(points)


@dataclass(frozen=True)
class Circumcenter:
    center: BuildingPoint
    radius: GroupValue
    pair: Tuple[BuildingPoint, BuildingPoint]


def tree_circumcenter(cc: ChartComplex, points: Sequence[BuildingPoint]) -> Circumcenter:
    """Midpoint of a diameter pair of a finite subset of a rank-one complex."""
    if cc.root_system.rank != 1:
        raise UnsupportedComplexClassError(
            "Circumcenters are only computed in trees", witness={"root_system": cc.root_system.label}
        )
    if not points:
        raise EmptyInputError("Circumcenter of an empty point set")
    pair = (points[0], points[0])
    diameter = GroupValue.zero(cc.group_rank)
    for p, q in combinations(points, 2):
        d = cc.distance(p, q)
        if d > diameter:
            pair, diameter = (p, q), d
    p, q = pair
    for chart in cc.charts:
        a, b = cc.try_transport(p, chart), cc.try_transport(q, chart)
        if a is not None and b is not None:
            center = cc.canonical(BuildingPoint(chart, (a + b) / 2))
            break
    radius = max(cc.distance(center, r) for r in points)
    assert radius == diameter / 2
    return Circumcenter(center, radius, pair)


def archimedean_fixed_point(cc: ChartComplex, points: Sequence[BuildingPoint]) -> BuildingPoint:
    """A point fixed by every isometry of cc permuting ``points``."""
    if len(cc.charts) == 1:
        chart = cc.charts[0]
        return BuildingPoint(chart, centroid([cc.transport(p, chart) for p in points]))
    return tree_circumcenter(cc, points).center


@dataclass(frozen=True)
class Layer:
    index: int
    upper: ConvexSubgroup
    lower: ConvexSubgroup
    orbit_size: int
    bound: GroupValue

    def to_dict(self) -> dict:
        return {
            "leading_index": self.index,
            "M_level": self.upper.level,
            "N_level": self.lower.level,
            "orbit_size": self.orbit_size,
            "g0": self.bound.to_json(),
        }


@dataclass(frozen=True)
class FixedPoint:
    point: BuildingPoint
    trace: Tuple[Layer, ...] = field(default=())

    def to_dict(self) -> dict:
        return {"point": self.point.to_json(), "trace": [layer.to_dict() for layer in self.trace]}


def _descend(cc: ChartComplex, points: Sequence[BuildingPoint], x: BuildingPoint, upper: ConvexSubgroup):
    """A point whose orbit moves only by values in N_g₀.

    The orbit lies in the fiber of Λ → Λ/M_g₀ through x. Passing that fiber
    through M_g₀ → M_g₀/N_g₀ ≅ ℚ leaves an archimedean complex where the
    induced action has a fixed point; any lift of it will do, and the lift
    keeps x's deeper coordinates when the chart allows.
    """
    if upper.level == 1:
        within, base = cc, x
        lift, project = (lambda u: u), (lambda p: p)
    else:
        section = fiber(EpiFunctor(cc.space, upper.quotient()), cc, x)
        within, base = section.complex, section.base
        lift, project = section.lift, (lambda p: section.project(cc, p))
    layer = EpiFunctor(within.space, quotient_epi(1, within.group_rank))
    image = layer.complex(within).complex
    shadows = []
    for p in points:
        u = project(p)
        assert u is not None, f"orbit point {p} left the fiber through {x}"
        shadows.append(layer.building_point(u))
    center = archimedean_fixed_point(image, shadows)
    start = within.try_transport(base, center.chart)
    if start is None:
        start = Point.zero(within.space.rank, within.group_rank)
    coords = tuple(GroupValue(c.coords + s.coords[1:]) for c, s in zip(center.point.coords, start.coords))
    return lift(BuildingPoint(center.chart, Point(coords)))


def fixed_point(action: IsometryAction, x0: Optional[BuildingPoint] = None) -> FixedPoint:
    cc = action.complex
    if len(cc.charts) != 1 and cc.root_system.rank != 1:
        raise UnsupportedComplexClassError(
            "Fixed points are computed on single apartments and on trees",
            witness={"root_system": cc.root_system.label, "charts": len(cc.charts)},
        )
    generated_group(action)
    x = cc.canonical(x0 if x0 is not None else BuildingPoint(cc.charts[0], cc.space.origin))
    trace: List[Layer] = []
    for _ in range(cc.group_rank + 1):
        points = orbit(action, x)
        bound = orbit_bound(cc, points, x)
        if bound.trivial:
            break
        upper, lower = convex_subgroups(bound.g0)
        trace.append(Layer(upper.level, upper, lower, len(points), bound.g0))
        logger.debug("Layer %d: orbit of %d points, g0 = %s", upper.level, len(points), bound.g0)
        x = cc.canonical(_descend(cc, points, x, upper))
    else:
        raise AssertionError("layered fixed-point search did not terminate")
    assert action.fixes(x)
    return FixedPoint(x, tuple(trace))
