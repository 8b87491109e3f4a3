"""
Buildings presented by finite atlases.

A complex has charts (copies of the model apartment) and, for every pair of
charts whose apartments meet, a convex region Z_fg in f-coordinates with an
affine Weyl transition w_fg such that (f, a) and (g, w_fg·a) are the same
point for a ∈ Z_fg. Only one orientation is stored; the other is derived.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .errors import (
    BuildingError,
    CocycleViolation,
    ConvexityViolation,
    DanglingChart,
    EmptyGluing,
    InconsistentGluing,
    NoChartContainingGermAndPointError,
    NoCommonChartError,
    NotInChartError,
    TransitionViolation,
    UnknownChartError,
    ValidationError,
)
from .inequalities import LinearConstraint
from .model_space import AffineMap, ConvexSet, Germ, HalfApartment, ModelSpace, Point
from .ordered_groups import GroupValue
from .root_systems import SphericalWeylElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BuildingPoint:
    chart: str
    point: Point

    def to_json(self) -> dict:
        return {"chart": self.chart, "coords": self.point.to_json()}

    def __str__(self) -> str:
        return f"{self.chart}:{self.point}"


@dataclass(frozen=True)
class Gluing:
    """(source, a) ≡ (target, transition·a) for a in region (source coordinates)."""

    source: str
    target: str
    region: ConvexSet
    transition: AffineMap


def region_from_pieces(space: ModelSpace, pieces: Sequence[ConvexSet]) -> ConvexSet:
    """The convex set equal to a union of convex pieces, or ConvexityViolation."""
    for piece in pieces:
        for constraint in piece.constraints:
            if not space.root_system.is_root(constraint.root):
                raise ConvexityViolation(
                    f"Constraint normal {list(constraint.root)} is not a root of {space.root_system.label}",
                    witness={"constraint": constraint.to_json()},
                )
    given = list(pieces)
    pieces = [p for p in given if not space.is_empty(p)[0]]
    if len(pieces) <= 1:
        return pieces[0] if pieces else given[0]
    if any(not p.effective for p in pieces):
        return ConvexSet()
    closure = []
    for root in space.root_system.roots:
        lows = []
        for piece in pieces:
            found = space.minimize(piece, space.functional([root]))
            lows.append(found.value)
        closure.append(HalfApartment(root, None if any(v is None for v in lows) else min(lows)))
    closure = ConvexSet(tuple(closure))
    closure_rows = space.rows(closure)
    for choice in product(*(space.rows(p) for p in pieces)):
        outside = space.solve(closure_rows + [row.negated() for row in choice])
        if outside is not None:
            raise ConvexityViolation(
                "Gluing region is not convex: a point of its convex closure lies in no piece",
                witness={"point": outside.to_json()},
            )
    return closure


class ChartComplex:
    """An atlas over 𝔸(R, ℚ^k)."""

    def __init__(self, space: ModelSpace, charts: Iterable[str], gluings: Iterable[Gluing] = ()):
        self.space = space
        self.charts: Tuple[str, ...] = tuple(sorted(set(charts)))
        self._stored: Dict[Tuple[str, str], Gluing] = {}
        self._derived: Dict[Tuple[str, str], Gluing] = {}
        self.validated = False
        for gluing in gluings:
            self._add(gluing)

    @property
    def root_system(self):
        return self.space.root_system

    @property
    def group_rank(self) -> int:
        return self.space.group_rank

    def _add(self, gluing: Gluing) -> None:
        for chart in (gluing.source, gluing.target):
            if chart not in self.charts:
                raise DanglingChart(
                    f"Gluing {gluing.source}-{gluing.target} refers to undeclared chart {chart!r}",
                    witness={"pair": [gluing.source, gluing.target], "chart": chart},
                )
        if self.root_system.element(gluing.transition.linear.matrix) is None:
            raise TransitionViolation(
                f"Transition of {gluing.source}-{gluing.target} has a linear part outside W({self.root_system.label})",
                witness={
                    "pair": [gluing.source, gluing.target],
                    "matrix": [list(r) for r in gluing.transition.linear.matrix],
                },
            )
        for constraint in gluing.region.constraints:
            if not self.root_system.is_root(constraint.root):
                raise ConvexityViolation(
                    f"Region of {gluing.source}-{gluing.target} uses non-root normal {list(constraint.root)}",
                    witness={"pair": [gluing.source, gluing.target], "constraint": constraint.to_json()},
                )
        if gluing.source == gluing.target:
            raise InconsistentGluing(
                f"Chart {gluing.source!r} glued to itself", witness={"pair": [gluing.source, gluing.target]}
            )
        key = tuple(sorted((gluing.source, gluing.target)))
        if key != (gluing.source, gluing.target):
            gluing = self._invert(gluing)
        known = self._stored.get(key)
        if known is not None:
            same_map = known.transition.linear == gluing.transition.linear and (
                known.transition.translation == gluing.transition.translation
            )
            if not same_map or not self.space.same_set(known.region, gluing.region):
                raise InconsistentGluing(
                    f"Gluing {key[0]}-{key[1]} given twice with data that are not mutually inverse",
                    witness={"pair": list(key)},
                )
            return
        self._stored[key] = gluing
        self._derived[(key[1], key[0])] = self._invert(gluing)

    def _invert(self, gluing: Gluing) -> Gluing:
        return Gluing(
            gluing.target,
            gluing.source,
            self.space.transform(gluing.region, gluing.transition),
            gluing.transition.inverse(),
        )

    @property
    def gluings(self) -> Tuple[Gluing, ...]:
        """Stored orientations, ordered by chart pair."""
        return tuple(self._stored[key] for key in sorted(self._stored))

    def require_chart(self, chart: str) -> str:
        if chart not in self.charts:
            raise UnknownChartError(f"Unknown chart {chart!r}", witness={"chart": chart, "charts": list(self.charts)})
        return chart

    def gluing(self, source: str, target: str) -> Optional[Gluing]:
        self.require_chart(source)
        self.require_chart(target)
        if source == target:
            return Gluing(source, target, ConvexSet(), AffineMap.identity(self.root_system, self.group_rank))
        return self._stored.get((source, target)) or self._derived.get((source, target))

    # points

    def check_point(self, p: BuildingPoint) -> BuildingPoint:
        self.require_chart(p.chart)
        self.space.check(p.point)
        return p

    def try_transport(self, p: BuildingPoint, target: str) -> Optional[Point]:
        self.check_point(p)
        gluing = self.gluing(p.chart, target)
        if gluing is None or not self.space.contains(gluing.region, p.point):
            return None
        return gluing.transition.apply(p.point)

    def transport(self, p: BuildingPoint, target: str) -> Point:
        coords = self.try_transport(p, target)
        if coords is None:
            raise NotInChartError(
                f"Point {p} does not lie in chart {target!r}", witness={"point": p.to_json(), "chart": target}
            )
        return coords

    def locations(self, p: BuildingPoint) -> List[Tuple[str, Point]]:
        """Every chart containing p with p's coordinates there."""
        found = []
        for chart in self.charts:
            coords = self.try_transport(p, chart)
            if coords is not None:
                found.append((chart, coords))
        return found

    def canonical(self, p: BuildingPoint) -> BuildingPoint:
        chart, coords = self.locations(p)[0]
        return BuildingPoint(chart, coords)

    def equal(self, p: BuildingPoint, q: BuildingPoint) -> bool:
        self.check_point(q)
        coords = self.try_transport(p, q.chart)
        return coords is not None and coords == q.point

    def distance(self, p: BuildingPoint, q: BuildingPoint) -> GroupValue:
        for chart in self.charts:
            a = self.try_transport(p, chart)
            if a is None:
                continue
            b = self.try_transport(q, chart)
            if b is not None:
                return self.space.distance(a, b)
        raise NoCommonChartError(
            f"No chart contains both {p} and {q}", witness={"p": p.to_json(), "q": q.to_json()}
        )

    def common_chart_distances(self, p: BuildingPoint, q: BuildingPoint) -> Dict[str, GroupValue]:
        found = {}
        for chart in self.charts:
            a, b = self.try_transport(p, chart), self.try_transport(q, chart)
            if a is not None and b is not None:
                found[chart] = self.space.distance(a, b)
        return found

    def retract(self, target: str, germ: Germ, p: BuildingPoint) -> BuildingPoint:
        """r_{A,μ}(p): fold p onto chart ``target`` through a chart holding μ and p."""
        self.require_chart(target)
        self.check_point(p)
        for chart in (target,) + tuple(c for c in self.charts if c != target):
            if chart != target:
                overlap = self.gluing(target, chart)
                if overlap is None or not self.space.contains(overlap.region, germ.base):
                    continue
                if not self.space.germ_in_convex(germ, overlap.region):
                    continue
            coords = self.try_transport(p, chart)
            if coords is None:
                continue
            return BuildingPoint(target, self.gluing(chart, target).transition.apply(coords))
        raise NoChartContainingGermAndPointError(
            f"No chart contains the germ at {germ.base} and the point {p}",
            witness={"chart": target, "germ_base": germ.base.to_json(), "point": p.to_json()},
        )

    def residue(self, p: BuildingPoint) -> "ChamberReport":
        self.check_point(p)
        holders = self.locations(p)
        coords = dict(holders)

        def same(source: str, target: str, w: SphericalWeylElement, face) -> bool:
            region = self.gluing(source, target).region
            if not self.space.contains(region, coords[source]):
                return False
            return self.space.germ_in_convex(Germ(coords[source], w, face), region)

        return _classify(self, [chart for chart, _ in holders], same)

    def boundary(self) -> "ChamberReport":
        def same(source: str, target: str, w: SphericalWeylElement, face) -> bool:
            region = self.gluing(source, target).region
            return self.space.simplex_direction_in_recession(w, face, region)

        return _classify(self, list(self.charts), same)

    def to_summary(self) -> dict:
        return {
            "root_system": self.root_system.label,
            "group_rank": self.group_rank,
            "charts": list(self.charts),
            "gluings": [[g.source, g.target] for g in self.gluings],
        }


Chamber = Tuple[str, Tuple[int, ...]]


@dataclass(frozen=True)
class ChamberReport:
    """Chamber equivalence classes with panel adjacency."""

    classes: Tuple[Tuple[Chamber, ...], ...]
    adjacency: Tuple[Tuple[int, int, int], ...]
    panels: int
    thick_panels: int
    _index: Dict[Chamber, int] = field(default_factory=dict, compare=False, repr=False)

    @property
    def count(self) -> int:
        return len(self.classes)

    def class_of(self, chamber: Chamber) -> int:
        if not self._index:
            for i, members in enumerate(self.classes):
                for member in members:
                    self._index[member] = i
        return self._index[chamber]

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "classes": [[{"chart": c, "word": [i + 1 for i in w]} for c, w in members] for members in self.classes],
            "adjacency": [{"classes": [a, b], "panel_type": t + 1} for a, b, t in self.adjacency],
            "panels": self.panels,
            "thick_panels": self.thick_panels,
        }


def _chamber_key(chamber: Chamber):
    chart, word = chamber
    return chart, len(word), word


def _classify(
    cc: ChartComplex,
    charts: List[str],
    same: Callable[[str, str, SphericalWeylElement, frozenset], bool],
) -> ChamberReport:
    rs = cc.root_system
    space = cc.space
    full = frozenset(range(rs.rank))
    chambers = nx.Graph()
    panels = nx.Graph()
    for chart in charts:
        for w in rs.elements:
            chambers.add_node((chart, w.word))
            for i in range(rs.rank):
                panels.add_node((chart, space.canonical_direction(w, full - {i}).word, i))
    for source, target in combinations(charts, 2):
        gluing = cc.gluing(source, target)
        if gluing is None:
            continue
        linear = gluing.transition.linear
        for w in rs.elements:
            if same(source, target, w, full):
                chambers.add_edge((source, w.word), (target, rs.product(linear, w).word))
            for i in range(rs.rank):
                face = full - {i}
                direction = space.canonical_direction(w, face)
                if direction != w:
                    continue
                if same(source, target, direction, face):
                    image = space.canonical_direction(rs.product(linear, direction), face)
                    panels.add_edge((source, direction.word, i), (target, image.word, i))
    classes = sorted(
        (tuple(sorted(component, key=_chamber_key)) for component in nx.connected_components(chambers)),
        key=lambda members: _chamber_key(members[0]),
    )
    index = {member: i for i, members in enumerate(classes) for member in members}
    adjacency = set()
    thick = 0
    panel_classes = list(nx.connected_components(panels))
    for component in panel_classes:
        touching = set()
        for chart, word, i in component:
            direction = rs.from_word(word)
            for w in (direction, rs.product(direction, rs.simple_reflections[i])):
                touching.add(index[(chart, w.word)])
        if len(touching) >= 3:
            thick += 1
        panel_type = next(iter(component))[2]
        for a, b in combinations(sorted(touching), 2):
            adjacency.add((a, b, panel_type))
    return ChamberReport(tuple(classes), tuple(sorted(adjacency)), len(panel_classes), thick)


def residue(cc: ChartComplex, p: BuildingPoint) -> ChamberReport:
    return cc.residue(p)


def boundary(cc: ChartComplex) -> ChamberReport:
    return cc.boundary()


# validation


def _difference_rows(first: AffineMap, second: AffineMap, group_rank: int) -> List[LinearConstraint]:
    """Rows whose individual satisfaction means first(a) ≠ second(a) in some coordinate."""
    rows = []
    for i, (row_a, row_b) in enumerate(zip(first.linear.matrix, second.linear.matrix)):
        coefficients = tuple(x - y for x, y in zip(row_a, row_b))
        offset = first.translation.coords[i] - second.translation.coords[i]
        rows.append(LinearConstraint(coefficients, -offset, strict=True))
        rows.append(LinearConstraint(tuple(-c for c in coefficients), offset, strict=True))
    return rows


def maps_disagree_on(space: ModelSpace, region: ConvexSet, first: AffineMap, second: AffineMap) -> Optional[Point]:
    """A point of the region where the two affine maps differ, if any."""
    base = space.rows(region)
    for row in _difference_rows(first, second, space.group_rank):
        witness = space.solve(base + [row])
        if witness is not None:
            return witness
    return None


def point_outside(space: ModelSpace, region: ConvexSet, container: ConvexSet) -> Optional[Point]:
    base = space.rows(region)
    for row in space.rows(container):
        witness = space.solve(base + [row.negated()])
        if witness is not None:
            return witness
    return None


def isometry_violation(
    source: ChartComplex, target: ChartComplex, chart_map: Dict[str, str], maps: Dict[str, AffineMap]
) -> Optional[Tuple[str, dict]]:
    """Why (f, a) ↦ (chart_map[f], maps[f]·a) is not an isometry source → target, or None.

    It is one when it bijects the charts through affine Weyl maps that carry
    every gluing of source onto the matching gluing of target.
    """
    space = source.space
    if sorted(chart_map) != list(source.charts) or sorted(chart_map.values()) != list(target.charts):
        return "does not biject the charts", {"chart_map": chart_map}
    for chart in source.charts:
        w = maps.get(chart)
        if w is None or source.root_system.element(w.linear.matrix) is None:
            return f"needs an affine Weyl map on chart {chart}", {"chart": chart}
    for f, g in combinations(source.charts, 2):
        before, after = source.gluing(f, g), target.gluing(chart_map[f], chart_map[g])
        witness = {"pair": [f, g]}
        if before is None and after is None:
            continue
        if before is None or after is None:
            return f"does not preserve the overlap of {f} and {g}", witness
        moved = space.transform(before.region, maps[f])
        outside = point_outside(space, moved, after.region) or point_outside(space, after.region, moved)
        if outside is not None:
            return f"maps Z_{f}{g} onto a different region", {**witness, "point": outside.to_json()}
        differing = maps_disagree_on(
            space, before.region, after.transition.compose(maps[f]), maps[g].compose(before.transition)
        )
        if differing is not None:
            return f"disagrees with the gluing of {f} and {g}", {**witness, "point": differing.to_json()}
    return None


def validate(cc: ChartComplex) -> ChartComplex:
    """Exact check of convexity, transitions and cocycles; returns the same complex."""
    space = cc.space
    rs = cc.root_system
    for gluing in cc.gluings:
        pair = [gluing.source, gluing.target]
        if rs.element(gluing.transition.linear.matrix) is None:
            raise TransitionViolation(
                f"Transition of {pair} has a linear part outside W({rs.label})",
                witness={"pair": pair, "matrix": [list(r) for r in gluing.transition.linear.matrix]},
            )
        for constraint in gluing.region.constraints:
            if not rs.is_root(constraint.root):
                raise ConvexityViolation(
                    f"Region of {pair} uses non-root normal {list(constraint.root)}",
                    witness={"pair": pair, "constraint": constraint.to_json()},
                )
        if space.is_empty(gluing.region)[0]:
            raise EmptyGluing(f"Gluing {pair} has an empty region", witness={"pair": pair})
    for f, g, h in permutations(cc.charts, 3):
        fg, gh = cc.gluing(f, g), cc.gluing(g, h)
        if fg is None or gh is None:
            continue
        through = fg.region & space.transform(gh.region, fg.transition.inverse())
        empty, sample = space.is_empty(through)
        if empty:
            continue
        fh = cc.gluing(f, h)
        if fh is None:
            raise CocycleViolation(
                f"Charts {f} and {h} meet through {g} but are not glued",
                witness={"charts": [f, g, h], "point": sample.to_json()},
            )
        outside = point_outside(space, through, fh.region)
        if outside is not None:
            raise CocycleViolation(
                f"A point of {f} passing through {g} into {h} is missing from Z_{f}{h}",
                witness={"charts": [f, g, h], "point": outside.to_json()},
            )
        differing = maps_disagree_on(space, through, gh.transition.compose(fg.transition), fh.transition)
        if differing is not None:
            raise CocycleViolation(
                f"Transitions {f}->{g}->{h} and {f}->{h} disagree",
                witness={"charts": [f, g, h], "point": differing.to_json()},
            )
    cc.validated = True
    logger.info("Validated complex with %d charts and %d gluings", len(cc.charts), len(cc.gluings))
    return cc


# axioms


@dataclass(frozen=True)
class AxiomVerdict:
    status: str
    witness: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status.startswith("pass")


@dataclass(frozen=True)
class AxiomReport:
    verdicts: Dict[str, AxiomVerdict]

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts.values())

    def to_dict(self) -> dict:
        report = {name: verdict.status for name, verdict in sorted(self.verdicts.items())}
        failures = {name: v.witness for name, v in sorted(self.verdicts.items()) if not v.passed}
        if failures:
            report["witnesses"] = failures
        return report


def _check_a3(cc: ChartComplex, points: Sequence[BuildingPoint]) -> AxiomVerdict:
    for p, q in combinations(points, 2):
        try:
            cc.distance(p, q)
        except NoCommonChartError as error:
            return AxiomVerdict("fail", error.witness)
    return AxiomVerdict("pass(witnesses)")


def _check_a4(cc: ChartComplex) -> AxiomVerdict:
    report = cc.boundary()
    charts_of = [{chart for chart, _ in members} for members in report.classes]
    for a, b in combinations(range(report.count), 2):
        if not charts_of[a] & charts_of[b]:
            return AxiomVerdict(
                "fail",
                {
                    "chambers": [
                        {"chart": c, "word": [i + 1 for i in w]}
                        for c, w in (report.classes[a][0], report.classes[b][0])
                    ]
                },
            )
    return AxiomVerdict("pass(witnesses)")


def _check_a5(cc: ChartComplex, points: Sequence[BuildingPoint], germs: Sequence[Tuple[str, Germ]]) -> AxiomVerdict:
    centers = list(germs)
    for point in points:
        for chart, coords in cc.locations(point):
            centers.extend((chart, Germ(coords, w, frozenset(range(cc.root_system.rank)))) for w in cc.root_system.elements)
    for chart, germ in centers:
        for p, q in combinations(points, 2):
            try:
                before = cc.distance(p, q)
            except NoCommonChartError:
                continue
            try:
                after = cc.distance(cc.retract(chart, germ, p), cc.retract(chart, germ, q))
            except NoChartContainingGermAndPointError as error:
                return AxiomVerdict("fail", error.witness)
            if after > before:
                return AxiomVerdict(
                    "fail",
                    {"chart": chart, "germ_base": germ.base.to_json(), "p": p.to_json(), "q": q.to_json()},
                )
    return AxiomVerdict("pass(witnesses)")


def _check_a6(cc: ChartComplex) -> AxiomVerdict:
    space = cc.space
    for f, g, h in combinations(cc.charts, 3):
        fg, fh, gh = cc.gluing(f, g), cc.gluing(f, h), cc.gluing(g, h)
        if fg is None or fh is None or gh is None:
            continue
        if any(len(gl.region.effective) != 1 for gl in (fg, fh, gh)):
            continue
        triple = fg.region & fh.region & space.transform(gh.region, fg.transition.inverse())
        if space.is_empty(triple)[0]:
            return AxiomVerdict("fail", {"charts": [f, g, h]})
    return AxiomVerdict("pass")


def check_axioms(
    cc: ChartComplex, points: Sequence[BuildingPoint] = (), germs: Sequence[Tuple[str, Germ]] = ()
) -> AxiomReport:
    points = [cc.check_point(p) for p in points]
    verdicts = {"A1": AxiomVerdict("pass")}
    try:
        validate(cc)
        verdicts["A2"] = AxiomVerdict("pass")
    except ValidationError as error:
        verdicts["A2"] = AxiomVerdict("fail", error.to_dict())
    checks = {
        "A3": lambda: _check_a3(cc, points),
        "A4": lambda: _check_a4(cc),
        "A5": lambda: _check_a5(cc, points, germs),
        "A6": lambda: _check_a6(cc),
    }
    for name, run in checks.items():
        try:
            verdicts[name] = run()
        except BuildingError as error:
            verdicts[name] = AxiomVerdict("fail", error.to_dict())
    report = AxiomReport(verdicts)
    logger.info("Axiom check: %s", {k: v.status for k, v in sorted(verdicts.items())})
    return report
