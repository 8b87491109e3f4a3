"""
Base change along order-preserving morphisms of Λ.

An epimorphism e : ℚ^k → ℚ^s collapses points at distance in ker(e); a
monomorphism extends every apartment to the larger group. Both act on
coordinates entrywise and keep chart ids, so a complex maps to a complex
with the same charts and d′∘φ = e∘d.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from .chart_complex import BuildingPoint, ChartComplex, ChamberReport, Gluing, isometry_violation, validate
from .errors import MorphismError, RankMismatchError
from .model_space import AffineMap, ConvexSet, HalfApartment, ModelSpace, Point
from .ordered_groups import GroupMorphism, GroupValue, compose, decompose, embedding

logger = logging.getLogger(__name__)


class ImageComplex(NamedTuple):
    complex: ChartComplex
    point_map: Callable[[BuildingPoint], BuildingPoint]


@dataclass(frozen=True)
class CoordinateFunctor:
    source: ModelSpace
    morphism: GroupMorphism

    def __post_init__(self):
        if self.morphism.source_rank != self.source.group_rank:
            raise RankMismatchError(
                f"Morphism starts at rank {self.morphism.source_rank}, apartment has rank {self.source.group_rank}",
                witness={"morphism": self.morphism.source_rank, "apartment": self.source.group_rank},
            )

    @property
    def target(self) -> ModelSpace:
        return ModelSpace(self.source.root_system, self.morphism.target_rank)

    def value(self, k: GroupValue) -> GroupValue:
        return self.morphism(k)

    def point(self, x: Point) -> Point:
        return Point(tuple(self.morphism(c) for c in self.source.check(x).coords))

    def weyl(self, w: AffineMap) -> AffineMap:
        return AffineMap(w.linear, self.point(w.translation))

    def convex(self, K: ConvexSet) -> ConvexSet:
        return ConvexSet(
            tuple(HalfApartment(c.root, None if c.offset is None else self.morphism(c.offset)) for c in K.constraints)
        )

    def building_point(self, p: BuildingPoint) -> BuildingPoint:
        return BuildingPoint(p.chart, self.point(p.point))

    def complex(self, cc: ChartComplex) -> ImageComplex:
        if cc.space != self.source:
            raise RankMismatchError(
                "Complex does not live over the functor's source apartment",
                witness={"complex": cc.to_summary()},
            )
        gluings = [Gluing(g.source, g.target, self.convex(g.region), self.weyl(g.transition)) for g in cc.gluings]
        image = validate(ChartComplex(self.target, cc.charts, gluings))
        logger.info(
            "Base change %s: ℚ^%d -> ℚ^%d on %d charts",
            self.morphism.kind,
            self.morphism.source_rank,
            self.morphism.target_rank,
            len(cc.charts),
        )
        return ImageComplex(image, self.building_point)


class EpiFunctor(CoordinateFunctor):
    """Truncation ℚ^k → ℚ^s and the induced quotient of buildings."""

    def __post_init__(self):
        super().__post_init__()
        if not self.morphism.is_epi:
            raise MorphismError("EpiFunctor needs a truncation", witness={"kind": self.morphism.kind})

    @property
    def kernel_rank(self) -> int:
        return self.morphism.source_rank - self.morphism.target_rank


class MonoFunctor(CoordinateFunctor):
    """Embedding ℚ^k → ℚ^m and the induced extension of buildings (ι, ι̂, ι̃)."""

    def __post_init__(self):
        super().__post_init__()
        if not self.morphism.is_mono:
            raise MorphismError("MonoFunctor needs an injective morphism", witness={"kind": self.morphism.kind})


def epi_point(F: EpiFunctor, x: Point) -> Point:
    return F.point(x)


def epi_metric_check(F: EpiFunctor, x: Point, y: Point) -> Tuple[GroupValue, GroupValue, GroupValue]:
    """(d(x, y), d′(φx, φy), e(d(x, y))); the last two always agree."""
    d = F.source.distance(x, y)
    image = F.target.distance(F.point(x), F.point(y))
    expected = F.value(d)
    assert image == expected, f"d′ = {image} but e(d) = {expected}"
    return d, image, expected


def epi_complex(F: EpiFunctor, cc: ChartComplex) -> ImageComplex:
    return F.complex(cc)


def mono_point(F: MonoFunctor, x: Point) -> Point:
    return F.point(x)


def mono_weyl(F: MonoFunctor, w: AffineMap) -> AffineMap:
    return F.weyl(w)


def mono_convex(F: MonoFunctor, K: ConvexSet) -> ConvexSet:
    return F.convex(K)


def mono_complex(F: MonoFunctor, cc: ChartComplex) -> ImageComplex:
    return F.complex(cc)


def compose_functors(m: GroupMorphism, cc: ChartComplex) -> ImageComplex:
    """Base change along m, factored as truncation followed by embedding."""
    epi, mono = decompose(m)
    first = EpiFunctor(cc.space, epi).complex(cc)
    second = MonoFunctor(first.complex.space, mono).complex(first.complex)
    assert compose(epi, mono) == m
    return ImageComplex(second.complex, lambda p: second.point_map(first.point_map(p)))


@dataclass
class ImageIsometry:
    """μ between two images of one complex, with the first failure found, if any."""

    chart_map: Dict[str, str]
    maps: Dict[str, AffineMap]
    violation: Optional[dict] = None

    @property
    def is_isometry(self) -> bool:
        return self.violation is None

    def __call__(self, p: BuildingPoint) -> BuildingPoint:
        return BuildingPoint(self.chart_map[p.chart], self.maps[p.chart].apply(p.point))

    def to_dict(self) -> dict:
        return {
            "chart_map": dict(sorted(self.chart_map.items())),
            "isometry": self.is_isometry,
            "violation": self.violation,
        }


def image_isometry(source: ChartComplex, first: ImageComplex, second: ImageComplex) -> ImageIsometry:
    """The map μ with second.point_map = μ ∘ first.point_map, checked to be an isometry.

    Chart by chart, μ is read off the images of the origin and of the points
    ε·e_j (ε the leading unit of Λ) and is then matched against both gluing
    systems.
    """
    a, b = first.complex, second.complex
    if a.space != b.space:
        raise RankMismatchError(
            "Images live over different apartments",
            witness={"first": a.to_summary(), "second": b.to_summary()},
        )
    rs, space = source.root_system, source.space
    unit = GroupValue.unit(space.group_rank) if space.group_rank else GroupValue.zero(0)
    origin = space.origin
    samples = [Point(tuple(unit if i == j else c for i, c in enumerate(origin.coords))) for j in range(space.rank)]
    chart_map: Dict[str, str] = {}
    maps: Dict[str, AffineMap] = {}
    for chart in source.charts:
        here, there = first.point_map(BuildingPoint(chart, origin)), second.point_map(BuildingPoint(chart, origin))
        if here.chart in chart_map:
            continue
        chart_map[here.chart] = there.chart
        steps = []
        for x in samples:
            p = BuildingPoint(chart, x)
            steps.append((first.point_map(p).point - here.point, second.point_map(p).point - there.point))
        linear = next((w for w in rs.elements if all(w.act(u.coords) == v.coords for u, v in steps)), None)
        if linear is None:
            return ImageIsometry(chart_map, maps, {"reason": "no Weyl map matches the images", "chart": chart})
        maps[here.chart] = AffineMap(linear, there.point - Point(linear.act(here.point.coords)))
    found = isometry_violation(a, b, chart_map, maps)
    if found is not None:
        message, witness = found
        logger.info("Images are not isometric: %s", message)
        return ImageIsometry(chart_map, maps, {"reason": message, **witness})
    return ImageIsometry(chart_map, maps)


# fibers


@dataclass
class FiberComplex:
    """φ⁻¹(φ(x)) as a complex over ker(e) ≅ ℚ^(k−s).

    Fiber chart f has coordinates u with source coordinates anchors[f] + ι(u),
    where ι places u in the trailing k−s positions.
    """

    complex: ChartComplex
    functor: EpiFunctor
    anchors: Dict[str, Point]
    base: BuildingPoint
    merged: Dict[str, str]

    @property
    def inclusion(self) -> GroupMorphism:
        s, k = self.functor.morphism.target_rank, self.functor.morphism.source_rank
        return embedding(range(s + 1, k + 1), [1] * (k - s), k)

    def lift(self, p: BuildingPoint) -> BuildingPoint:
        """The source-building point with fiber coordinates p."""
        self.complex.check_point(p)
        offset = Point(tuple(self.inclusion(c) for c in p.point.coords))
        return BuildingPoint(p.chart, self.anchors[p.chart] + offset)

    def project(self, source: ChartComplex, p: BuildingPoint) -> Optional[BuildingPoint]:
        """Fiber coordinates of a source point, or None when it lies off the fiber."""
        s = self.functor.morphism.target_rank
        for chart in self.complex.charts:
            coords = source.try_transport(p, chart)
            if coords is None:
                continue
            difference = coords - self.anchors[chart]
            if any(not self.functor.value(c).is_zero for c in difference.coords):
                return None
            return BuildingPoint(chart, Point(tuple(GroupValue(c.coords[s:]) for c in difference.coords)))
        return None


def _split(value: GroupValue, s: int) -> Tuple[GroupValue, GroupValue]:
    return GroupValue(value.coords[:s]), GroupValue(value.coords[s:])


def _fiber_region(space: ModelSpace, region: ConvexSet, anchor: Point, s: int) -> Optional[ConvexSet]:
    """Z ∩ (anchor + ker) in fiber coordinates; None when empty for rank reasons."""
    constraints = []
    for c in region.effective:
        head, tail = _split(c.offset - space.pairing(anchor, c.root), s)
        if head.sign() > 0:
            return None
        if head.sign() == 0:
            constraints.append(HalfApartment(c.root, tail))
    return ConvexSet(tuple(constraints))


def fiber(F: EpiFunctor, cc: ChartComplex, x: BuildingPoint) -> FiberComplex:
    cc.check_point(x)
    image = F.complex(cc).complex
    s = F.morphism.target_rank
    fiber_space = ModelSpace(cc.root_system, F.kernel_rank)
    target = F.building_point(x)
    anchors: Dict[str, Point] = {}
    for chart, coords in image.locations(target):
        anchors[chart] = Point(tuple(GroupValue(c.coords + (0,) * F.kernel_rank) for c in coords.coords))
    gluings: List[Gluing] = []
    merged: Dict[str, str] = {}
    for gluing in cc.gluings:
        f, g = gluing.source, gluing.target
        if f not in anchors or g not in anchors:
            continue
        region = _fiber_region(cc.space, gluing.region, anchors[f], s)
        if region is None or fiber_space.is_empty(region)[0]:
            continue
        moved = gluing.transition.apply(anchors[f]) - anchors[g]
        assert all(_split(c, s)[0].is_zero for c in moved.coords)
        transition = AffineMap(gluing.transition.linear, Point(tuple(_split(c, s)[1] for c in moved.coords)))
        if not region.effective and g not in merged and f not in merged:
            merged[g] = f
        gluings.append(Gluing(f, g, region, transition))
    charts = [chart for chart in sorted(anchors) if chart not in merged]
    kept = [gl for gl in gluings if gl.source in charts and gl.target in charts]
    complex_ = validate(ChartComplex(fiber_space, charts, kept))
    result = FiberComplex(complex_, F, {chart: anchors[chart] for chart in charts}, x, merged)
    base = result.project(cc, x)
    assert base is not None
    result.base = base
    logger.info("Fiber at %s: %d charts, %d merged", x, len(charts), len(merged))
    return result


@dataclass(frozen=True)
class ResidueMatching:
    fiber_boundary: ChamberReport
    residue: ChamberReport
    pairs: Tuple[Tuple[int, int], ...]
    perfect: bool

    def to_dict(self) -> dict:
        return {
            "fiber_boundary_classes": self.fiber_boundary.count,
            "residue_classes": self.residue.count,
            "matching": [list(pair) for pair in self.pairs],
            "perfect": self.perfect,
        }


def residue_fiber_iso(F: EpiFunctor, cc: ChartComplex, x: BuildingPoint) -> ResidueMatching:
    """Match ∂X″ with the residue of the image building at φ(x) through chart and direction provenance."""
    fiber_complex = fiber(F, cc, x)
    image = F.complex(cc).complex
    at_infinity = fiber_complex.complex.boundary()
    residue = image.residue(F.building_point(x))
    mapping: Dict[int, int] = {}
    consistent = True
    for i, members in enumerate(at_infinity.classes):
        targets = {residue.class_of(member) for member in members}
        if len(targets) != 1:
            consistent = False
        mapping[i] = min(targets)
    bijective = sorted(mapping.values()) == list(range(residue.count)) and at_infinity.count == residue.count
    adjacency = {(min(mapping[a], mapping[b]), max(mapping[a], mapping[b]), t) for a, b, t in at_infinity.adjacency}
    preserved = adjacency == set(residue.adjacency)
    return ResidueMatching(
        at_infinity,
        residue,
        tuple(sorted(mapping.items())),
        consistent and bijective and preserved,
    )
