"""
Finite lexicographic powers of the rationals and their morphisms.

A value of rank k is a tuple of k exact rationals; position 1 is the most
significant one. Order-preserving morphisms are kept in the normal form
"truncate to the first ``keep`` positions, then embed along increasing
positions with positive scales".
"""
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .errors import EmptyInputError, MorphismError, RankMismatchError

Scalar = Union[int, Fraction]


def _exact(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"Inexact group entry {value!r}: use int, Fraction or 'p/q' strings")
    return Fraction(value)


class Ordering(Enum):
    LT = "LT"
    EQ = "EQ"
    GT = "GT"


@dataclass(frozen=True)
class GroupValue:
    """An element of ℚ^k ordered lexicographically."""

    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_exact(c) for c in self.coords))

    @classmethod
    def of(cls, *entries) -> "GroupValue":
        return cls(tuple(entries))

    @classmethod
    def zero(cls, rank: int) -> "GroupValue":
        return cls((Fraction(0),) * rank)

    @classmethod
    def unit(cls, rank: int, position: int = 1) -> "GroupValue":
        """The value with a single 1 at ``position`` (1-based)."""
        if not 1 <= position <= rank:
            raise RankMismatchError(f"Position {position} outside rank {rank}")
        entries = [Fraction(0)] * rank
        entries[position - 1] = Fraction(1)
        return cls(tuple(entries))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "GroupValue") -> None:
        if not isinstance(other, GroupValue):
            raise TypeError(f"Expected GroupValue, got {type(other).__name__}")
        if other.rank != self.rank:
            raise RankMismatchError(
                f"Rank mismatch: {self.rank} vs {other.rank}",
                witness={"left": self.rank, "right": other.rank},
            )

    def __add__(self, other: "GroupValue") -> "GroupValue":
        self._check(other)
        return GroupValue(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupValue") -> "GroupValue":
        self._check(other)
        return GroupValue(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupValue":
        return GroupValue(tuple(-a for a in self.coords))

    def __mul__(self, scalar: Scalar) -> "GroupValue":
        factor = _exact(scalar)
        return GroupValue(tuple(a * factor for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "GroupValue":
        factor = _exact(scalar)
        if factor == 0:
            raise ZeroDivisionError("Division of a group value by zero")
        return GroupValue(tuple(a / factor for a in self.coords))

    def __lt__(self, other: "GroupValue") -> bool:
        self._check(other)
        return self.coords < other.coords

    def __le__(self, other: "GroupValue") -> bool:
        self._check(other)
        return self.coords <= other.coords

    def __gt__(self, other: "GroupValue") -> bool:
        self._check(other)
        return self.coords > other.coords

    def __ge__(self, other: "GroupValue") -> bool:
        self._check(other)
        return self.coords >= other.coords

    def __abs__(self) -> "GroupValue":
        return -self if self.sign() < 0 else self

    def sign(self) -> int:
        for entry in self.coords:
            if entry:
                return 1 if entry > 0 else -1
        return 0

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def to_json(self) -> list:
        return [f"{c.numerator}/{c.denominator}" for c in self.coords]


def compare(a: GroupValue, b: GroupValue) -> Ordering:
    if a < b:
        return Ordering.LT
    if a == b:
        return Ordering.EQ
    return Ordering.GT


def leading_index(a: GroupValue) -> Union[int, float]:
    """Smallest position with a nonzero entry, ``math.inf`` for zero."""
    for position, entry in enumerate(a.coords, start=1):
        if entry:
            return position
    return math.inf


def linear_combination(coefficients: Sequence[Scalar], values: Sequence[GroupValue], rank: int) -> GroupValue:
    """Σ cᵢ·vᵢ with rational cᵢ."""
    if len(coefficients) != len(values):
        raise RankMismatchError(f"{len(coefficients)} coefficients for {len(values)} values")
    total = [Fraction(0)] * rank
    for coefficient, value in zip(coefficients, values):
        if not coefficient:
            continue
        if value.rank != rank:
            raise RankMismatchError(f"Rank mismatch: {value.rank} vs {rank}")
        for position, entry in enumerate(value.coords):
            total[position] += coefficient * entry
    return GroupValue(tuple(total))


def maximum(values: Iterable[GroupValue]) -> GroupValue:
    values = list(values)
    if not values:
        raise EmptyInputError("Maximum of an empty family")
    return max(values)


@dataclass(frozen=True)
class ConvexSubgroup:
    """{λ : leading_index(λ) ≥ level}; level rank+1 is the trivial subgroup."""

    level: int
    rank: int

    def __post_init__(self):
        if not 1 <= self.level <= self.rank + 1:
            raise MorphismError(f"Level {self.level} outside 1..{self.rank + 1}")

    @property
    def is_trivial(self) -> bool:
        return self.level == self.rank + 1

    def contains(self, value: GroupValue) -> bool:
        if value.rank != self.rank:
            raise RankMismatchError(f"Rank mismatch: {value.rank} vs {self.rank}")
        return leading_index(value) >= self.level

    def quotient(self) -> "GroupMorphism":
        """The epimorphism whose kernel is this subgroup."""
        return quotient_epi(self.level - 1, self.rank)


def convex_subgroups(g: GroupValue) -> Tuple[ConvexSubgroup, ConvexSubgroup]:
    """M_g and N_g: values at least, resp. strictly, as deep as g."""
    if g.is_zero:
        raise MorphismError("Convex subgroups M_g, N_g need g ≠ 0", witness={"g": g.to_json()})
    index = leading_index(g)
    return ConvexSubgroup(index, g.rank), ConvexSubgroup(index + 1, g.rank)


@dataclass(frozen=True)
class GroupMorphism:
    """Truncate to ``keep`` positions, then place entry j at ``positions[j]`` scaled by ``scales[j]``."""

    source_rank: int
    keep: int
    positions: Tuple[int, ...]
    scales: Tuple[Fraction, ...]
    target_rank: int

    def __post_init__(self):
        object.__setattr__(self, "scales", tuple(_exact(s) for s in self.scales))
        if not 0 <= self.keep <= self.source_rank:
            raise MorphismError(f"Cannot keep {self.keep} positions of rank {self.source_rank}")
        if len(self.positions) != self.keep or len(self.scales) != self.keep:
            raise MorphismError("Embedding needs one position and one scale per kept entry")
        previous = 0
        for position in self.positions:
            if position <= previous or position > self.target_rank:
                raise MorphismError(
                    f"Positions {list(self.positions)} must increase strictly within 1..{self.target_rank}"
                )
            previous = position
        if any(scale <= 0 for scale in self.scales):
            raise MorphismError("Embedding scales must be positive")

    @classmethod
    def identity(cls, rank: int) -> "GroupMorphism":
        return cls(rank, rank, tuple(range(1, rank + 1)), (Fraction(1),) * rank, rank)

    @property
    def is_epi(self) -> bool:
        return self.target_rank == self.keep and self.positions == tuple(range(1, self.keep + 1)) and all(
            s == 1 for s in self.scales
        )

    @property
    def is_mono(self) -> bool:
        return self.keep == self.source_rank

    @property
    def kind(self) -> str:
        if self.is_epi:
            return "epi"
        if self.is_mono:
            return "mono"
        return "composite"

    @property
    def kernel(self) -> ConvexSubgroup:
        return ConvexSubgroup(self.keep + 1, self.source_rank)

    def __call__(self, value: GroupValue) -> GroupValue:
        return apply_morphism(self, value)


def quotient_epi(s: int, k: int) -> GroupMorphism:
    if not 0 <= s <= k:
        raise MorphismError(f"Cannot keep {s} significant positions of rank {k}")
    return GroupMorphism(k, s, tuple(range(1, s + 1)), (Fraction(1),) * s, s)


def embedding(positions: Sequence[int], scales: Sequence[Scalar], target_rank: int) -> GroupMorphism:
    positions = tuple(int(p) for p in positions)
    return GroupMorphism(len(positions), len(positions), positions, tuple(scales), target_rank)


def apply_morphism(m: GroupMorphism, a: GroupValue) -> GroupValue:
    if a.rank != m.source_rank:
        raise RankMismatchError(
            f"Morphism expects rank {m.source_rank}, got {a.rank}",
            witness={"expected": m.source_rank, "got": a.rank},
        )
    image = [Fraction(0)] * m.target_rank
    for entry, position, scale in zip(a.coords, m.positions, m.scales):
        image[position - 1] = entry * scale
    return GroupValue(tuple(image))


def decompose(m: GroupMorphism) -> Tuple[GroupMorphism, GroupMorphism]:
    return quotient_epi(m.keep, m.source_rank), embedding(m.positions, m.scales, m.target_rank)


def compose(first: GroupMorphism, second: GroupMorphism) -> GroupMorphism:
    """``second ∘ first``, again in normal form."""
    if first.target_rank != second.source_rank:
        raise MorphismError(f"Cannot compose: rank {first.target_rank} feeds rank {second.source_rank}")
    # entries of first that survive the truncation of second form a prefix
    survivors = sum(1 for p in first.positions if p <= second.keep)
    positions = tuple(second.positions[first.positions[j] - 1] for j in range(survivors))
    scales = tuple(first.scales[j] * second.scales[first.positions[j] - 1] for j in range(survivors))
    return GroupMorphism(first.source_rank, survivors, positions, scales, second.target_rank)


def is_bounded_by(a: GroupValue, g: GroupValue) -> bool:
    """a ∈ M_g, i.e. |a| ≤ n·|g| for some integer n."""
    return convex_subgroups(g)[0].contains(a)


def is_infinitesimal(a: GroupValue, g: GroupValue) -> bool:
    """a ∈ N_g, i.e. n·|a| < |g| for every integer n."""
    return convex_subgroups(g)[1].contains(a)


def standard_part(a: GroupValue, g: GroupValue) -> Fraction:
    """Image of a in the archimedean layer M_g/N_g ≅ ℚ."""
    if not is_bounded_by(a, g):
        raise MorphismError(
            "Standard part needs a ∈ M_g",
            witness={"a": a.to_json(), "g": g.to_json()},
        )
    return a.coords[leading_index(g) - 1]
