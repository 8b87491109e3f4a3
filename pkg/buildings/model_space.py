"""
The model apartment 𝔸(R, Λ).

Points are Λ-valued coordinate vectors in the simple-root basis. Convex sets
are finite lists of half-apartments {x : ⟨x, β∨⟩ ≥ k}; every geometric
question about them is decided exactly by elimination (see inequalities).
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import EmptyInputError, PointInsideError, PointOutsideError, RankMismatchError, TypeMismatchError
from .inequalities import LinearConstraint, minimize, solve
from .ordered_groups import GroupValue, Scalar, linear_combination
from .root_systems import Root, RootSystem, SphericalWeylElement

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Point:
    coords: Tuple[GroupValue, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))

    @classmethod
    def zero(cls, rank: int, group_rank: int) -> "Point":
        return cls(tuple(GroupValue.zero(group_rank) for _ in range(rank)))

    @classmethod
    def along(cls, root: Sequence[Scalar], value: GroupValue) -> "Point":
        """value·β for an integer (or rational) vector β."""
        return cls(tuple(value * c for c in root))

    @property
    def group_rank(self) -> int:
        return self.coords[0].rank if self.coords else 0

    def __add__(self, other: "Point") -> "Point":
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Point") -> "Point":
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Point":
        return Point(tuple(-a for a in self.coords))

    def __mul__(self, scalar: Scalar) -> "Point":
        return Point(tuple(a * scalar for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "Point":
        return Point(tuple(a / scalar for a in self.coords))

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.coords) + "]"

    def to_json(self) -> list:
        return [c.to_json() for c in self.coords]


@dataclass(frozen=True)
class AffineMap:
    """x ↦ linear·x + translation."""

    linear: SphericalWeylElement
    translation: Point

    @classmethod
    def identity(cls, rs: RootSystem, group_rank: int) -> "AffineMap":
        return cls(rs.identity, Point.zero(rs.rank, group_rank))

    @classmethod
    def translation_by(cls, rs: RootSystem, t: Point) -> "AffineMap":
        return cls(rs.identity, t)

    @classmethod
    def reflection(cls, rs: RootSystem, root: Sequence[int], offset: GroupValue) -> "AffineMap":
        """The reflection fixing the hyperplane ⟨x, β∨⟩ = offset."""
        return cls(rs.reflection(root), Point.along(root, offset))

    def apply(self, x: Point) -> Point:
        return Point(self.linear.act(x.coords)) + self.translation

    __call__ = apply

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self ∘ other."""
        return AffineMap(self.linear * other.linear, self.apply(other.translation))

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        return self.compose(other)

    def inverse(self) -> "AffineMap":
        linear = self.linear.inverse()
        return AffineMap(linear, -Point(linear.act(self.translation.coords)))

    @property
    def is_identity(self) -> bool:
        return self.linear.is_identity and all(c.is_zero for c in self.translation.coords)


@dataclass(frozen=True)
class HalfApartment:
    """{x : ⟨x, β∨⟩ ≥ offset}; offset None stands for −∞."""

    root: Root
    offset: Optional[GroupValue]

    def __post_init__(self):
        object.__setattr__(self, "root", tuple(int(c) for c in self.root))

    @property
    def is_trivial(self) -> bool:
        return self.offset is None

    def to_json(self) -> dict:
        return {"root": list(self.root), "offset": "-inf" if self.offset is None else self.offset.to_json()}


@dataclass(frozen=True)
class ConvexSet:
    constraints: Tuple[HalfApartment, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def __and__(self, other: "ConvexSet") -> "ConvexSet":
        return ConvexSet(self.constraints + other.constraints)

    @property
    def effective(self) -> Tuple[HalfApartment, ...]:
        return tuple(c for c in self.constraints if c.offset is not None)


@dataclass(frozen=True)
class WeylSimplex:
    """base + direction·(face of the fundamental chamber); ``face`` lists the simple
    roots kept as inequalities, the others hold at equality."""

    base: Point
    direction: SphericalWeylElement
    face: FrozenSet[int] = field(default_factory=frozenset)

    @property
    def dimension(self) -> int:
        return len(self.face)

    @property
    def germ(self) -> "Germ":
        return Germ(self.base, self.direction, self.face)


@dataclass(frozen=True)
class Germ:
    base: Point
    direction: SphericalWeylElement
    face: FrozenSet[int] = field(default_factory=frozenset)


@dataclass(frozen=True)
class ModelSpace:
    root_system: RootSystem
    group_rank: int

    @property
    def rank(self) -> int:
        return self.root_system.rank

    @property
    def origin(self) -> Point:
        return Point.zero(self.rank, self.group_rank)

    def check(self, x: Point) -> Point:
        if len(x.coords) != self.rank or any(c.rank != self.group_rank for c in x.coords):
            raise RankMismatchError(
                f"Point {x} does not live in 𝔸({self.root_system.label}, ℚ^{self.group_rank})",
                witness={"rank": self.rank, "group_rank": self.group_rank},
            )
        return x

    def pairing(self, x: Point, root: Sequence[int]) -> GroupValue:
        return linear_combination(self.root_system.coroot(root), x.coords, self.group_rank)

    def distance(self, x: Point, y: Point) -> GroupValue:
        """d(x, y) = Σ_{α ∈ R⁺} |⟨y − x, α∨⟩|."""
        self.check(x)
        self.check(y)
        difference = y - x
        total = GroupValue.zero(self.group_rank)
        for root in self.root_system.positive_roots:
            total = total + abs(self.pairing(difference, root))
        return total

    def apply(self, w: AffineMap, x: Point) -> Point:
        return w.apply(self.check(x))

    # half-apartments and convex sets

    def at_least(self, root: Sequence[int], offset: GroupValue) -> HalfApartment:
        return HalfApartment(self.root_system.require_root(root), offset)

    def at_most(self, root: Sequence[int], offset: GroupValue) -> HalfApartment:
        return HalfApartment(tuple(-c for c in self.root_system.require_root(root)), -offset)

    def contains(self, K: ConvexSet, x: Point) -> bool:
        return all(self.pairing(x, c.root) >= c.offset for c in K.effective)

    def rows(self, K: ConvexSet) -> List[LinearConstraint]:
        return [
            LinearConstraint(tuple(self.root_system.coroot(c.root)), c.offset) for c in K.effective
        ]

    def functional(self, roots: Iterable[Sequence[int]]) -> Tuple[Fraction, ...]:
        """Coefficients of Σ ⟨x, β∨⟩ over the given roots."""
        total = [Fraction(0)] * self.rank
        for root in roots:
            for i, c in enumerate(self.root_system.coroot(root)):
                total[i] += c
        return tuple(total)

    def solve(self, rows: Sequence[LinearConstraint]) -> Optional[Point]:
        point = solve(rows, self.rank, self.group_rank)
        return None if point is None else Point(point)

    def is_empty(self, K: ConvexSet) -> Tuple[bool, Optional[Point]]:
        """Exact emptiness verdict; the witness satisfies every constraint."""
        witness = self.solve(self.rows(K))
        return witness is None, witness

    def is_subset(self, inner: ConvexSet, outer: ConvexSet) -> bool:
        inner_rows = self.rows(inner)
        for row in self.rows(outer):
            if self.solve(inner_rows + [row.negated()]) is not None:
                return False
        return True

    def same_set(self, a: ConvexSet, b: ConvexSet) -> bool:
        return self.is_subset(a, b) and self.is_subset(b, a)

    def minimize(self, K: ConvexSet, objective: Sequence[Fraction], extra: Sequence[LinearConstraint] = ()):
        return minimize(self.rows(K) + list(extra), objective, self.rank, self.group_rank)

    def transform(self, K: ConvexSet, w: AffineMap) -> ConvexSet:
        """The image w(K)."""
        image = []
        for c in K.constraints:
            root = w.linear.act_on_root(c.root)
            offset = None if c.offset is None else c.offset + self.pairing(w.translation, root)
            image.append(HalfApartment(root, offset))
        return ConvexSet(tuple(image))

    def convex_hull(self, points: Sequence[Point]) -> ConvexSet:
        if not points:
            raise EmptyInputError("Convex hull of an empty point list")
        constraints = []
        for root in self.root_system.roots:
            constraints.append(HalfApartment(root, min(self.pairing(self.check(p), root) for p in points)))
        return ConvexSet(tuple(constraints))

    # simplices and germs

    def canonical_direction(self, w: SphericalWeylElement, face: Iterable[int]) -> SphericalWeylElement:
        """Minimal-length representative of w modulo the stabilizer of the face."""
        face = frozenset(face)
        stabilizer = frozenset(range(self.rank)) - face
        return self.root_system.minimal_coset_representative(w, stabilizer)

    def simplex(self, base: Point, w: SphericalWeylElement, face: Optional[Iterable[int]] = None) -> WeylSimplex:
        face = frozenset(range(self.rank)) if face is None else frozenset(face)
        return WeylSimplex(self.check(base), self.canonical_direction(w, face), face)

    def germ(self, base: Point, w: SphericalWeylElement, face: Optional[Iterable[int]] = None) -> Germ:
        return self.simplex(base, w, face).germ

    def _wall_roots(self, w: SphericalWeylElement) -> List[Root]:
        return [w.act_on_root(tuple(int(i == j) for i in range(self.rank))) for j in range(self.rank)]

    def simplex_set(self, S: WeylSimplex) -> ConvexSet:
        constraints = []
        for j, root in enumerate(self._wall_roots(S.direction)):
            value = self.pairing(S.base, root)
            constraints.append(HalfApartment(root, value))
            if j not in S.face:
                constraints.append(HalfApartment(tuple(-c for c in root), -value))
        return ConvexSet(tuple(constraints))

    def _punctured(self, S: WeylSimplex) -> LinearConstraint:
        """Σ_{j∈face} ⟨x − base, (w̄α_j)∨⟩ > 0, which removes the base from S."""
        walls = self._wall_roots(S.direction)
        coefficients = self.functional(walls[j] for j in sorted(S.face))
        bound = linear_combination(coefficients, S.base.coords, self.group_rank)
        return LinearConstraint(coefficients, bound, strict=True)

    def cone_nonnegative(self, w: SphericalWeylElement, face: FrozenSet[int], root: Sequence[int]) -> bool:
        """Every direction of w·(face of Cf) pairs nonnegatively with β∨."""
        image = self.root_system.inverse(w).act_on_root(root)
        return self.root_system.is_positive(image) or all(image[j] == 0 for j in face)

    def germ_in_convex(self, g: Germ, K: ConvexSet) -> bool:
        if not self.contains(K, g.base):
            raise PointOutsideError("Germ base lies outside the convex set", witness={"base": str(g.base)})
        for c in K.effective:
            if self.pairing(g.base, c.root) > c.offset:
                continue
            if not self.cone_nonnegative(g.direction, g.face, c.root):
                return False
        return True

    def minimal_simplex(self, base: Point, x: Point) -> WeylSimplex:
        """The smallest Weyl simplex based at ``base`` containing ``x``."""
        difference = self.check(x) - self.check(base)
        for w in self.root_system.elements:
            values = [self.pairing(difference, root) for root in self._wall_roots(w)]
            if all(v.sign() >= 0 for v in values):
                face = frozenset(j for j, v in enumerate(values) if v.sign() > 0)
                return self.simplex(base, w, face)
        raise AssertionError("the Weyl chambers cover the apartment")

    def directions(self, dimension: int) -> List[Tuple[SphericalWeylElement, FrozenSet[int]]]:
        """All distinct simplex directions of the given dimension, in a fixed order."""
        seen = set()
        found = []
        for face in combinations(range(self.rank), dimension):
            face = frozenset(face)
            for w in self.root_system.elements:
                canonical = self.canonical_direction(w, face)
                key = (canonical.matrix, face)
                if key not in seen:
                    seen.add(key)
                    found.append((canonical, face))
        return found

    def exit_simplex(self, K: ConvexSet, x: Point) -> Tuple[Point, WeylSimplex]:
        """y ∈ K and a simplex S at y through x with S ∩ K = {y}."""
        if self.contains(K, x):
            raise PointInsideError("exit_simplex needs a point outside the convex set", witness={"x": str(x)})
        empty, _ = self.is_empty(K)
        if empty:
            raise EmptyInputError("exit_simplex needs a nonempty convex set")
        rs = self.root_system
        for dimension in range(1, self.rank + 1):
            for w, face in self.directions(dimension):
                towards = WeylSimplex(x, w, face)
                meeting = self.simplex_set(towards) & K
                if self.is_empty(meeting)[0]:
                    continue
                # a lowest point of S ∩ K along the cone is minimal for the cone order
                walls = self._wall_roots(w)
                result = self.minimize(meeting, self.functional(walls[j] for j in sorted(face)))
                y = Point(result.witness)
                back = self.simplex(y, rs.product(w, rs.longest_element), (rs.opposition(j) for j in face))
                logger.debug("exit simplex from %s: base %s, dimension %d", x, y, dimension)
                assert self.contains(self.simplex_set(back), x)
                assert self.solve(self.rows(self.simplex_set(back) & K) + [self._punctured(back)]) is None
                return y, back
        raise AssertionError("some Weyl chamber at x meets a nonempty convex set")

    def parallel(self, first: WeylSimplex, second: WeylSimplex) -> bool:
        if first.face != second.face:
            raise TypeMismatchError(
                "Simplices of different types",
                witness={"first": sorted(first.face), "second": sorted(second.face)},
            )
        return self.canonical_direction(first.direction, first.face) == self.canonical_direction(
            second.direction, second.face
        )

    def direction_in_recession(self, w: SphericalWeylElement, K: ConvexSet) -> bool:
        """K contains a Weyl chamber of direction w̄ from each of its points."""
        return all(self.root_system.is_positive_after(w, c.root) for c in K.effective)

    def simplex_direction_in_recession(self, w: SphericalWeylElement, face: FrozenSet[int], K: ConvexSet) -> bool:
        return all(self.cone_nonnegative(w, face, c.root) for c in K.effective)


def distance(space: ModelSpace, x: Point, y: Point) -> GroupValue:
    return space.distance(x, y)


def is_empty(space: ModelSpace, K: ConvexSet) -> Tuple[bool, Optional[Point]]:
    return space.is_empty(K)


def convex_hull(space: ModelSpace, points: Sequence[Point]) -> ConvexSet:
    return space.convex_hull(points)
