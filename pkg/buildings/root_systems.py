"""
Crystallographic root systems and their spherical Weyl groups.

Everything lives in simple-root coordinates: a root is an integer vector, a
Weyl element an integer matrix acting on coordinate columns. The pairing
table follows C[i][j] = ⟨α_i, α_j∨⟩.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import NotARootError, UnsupportedRootSystemError
from .ordered_groups import GroupValue, linear_combination

logger = logging.getLogger(__name__)

Root = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]

SUPPORTED_RANKS = {
    "A": (1, 2, 3, 4),
    "B": (2, 3, 4),
    "C": (2, 3, 4),
    "D": (4,),
    "G": (2,),
}


def _identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _matvec(a: Matrix, v: Sequence[int]) -> Root:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in a)


def _invert(a: Sequence[Sequence]) -> List[List[Fraction]]:
    """Gauss-Jordan inverse over ℚ."""
    n = len(a)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if work[r][col] != 0)
        work[col], work[pivot] = work[pivot], work[col]
        lead = work[col][col]
        work[col] = [x / lead for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def cartan_matrix(kind: str, rank: int) -> Matrix:
    if kind not in SUPPORTED_RANKS or rank not in SUPPORTED_RANKS[kind]:
        raise UnsupportedRootSystemError(
            f"Unsupported root system {kind}{rank}",
            witness={"type": kind, "rank": rank, "supported": {k: list(v) for k, v in SUPPORTED_RANKS.items()}},
        )
    c = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def bond(i: int, j: int, ij: int = -1, ji: int = -1) -> None:
        c[i][j], c[j][i] = ij, ji

    if kind == "G":
        bond(0, 1, -1, -3)
    elif kind == "D":
        for i in range(rank - 2):
            bond(i, i + 1)
        bond(rank - 3, rank - 1)
    else:
        for i in range(rank - 1):
            bond(i, i + 1)
        if kind == "B":
            bond(rank - 2, rank - 1, -2, -1)
        elif kind == "C":
            bond(rank - 2, rank - 1, -1, -2)
    return tuple(tuple(row) for row in c)


@dataclass(frozen=True)
class SphericalWeylElement:
    """A Weyl group element as an integer matrix; ``word`` is provenance only."""

    matrix: Matrix
    word: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def is_identity(self) -> bool:
        return self.matrix == _identity(self.rank)

    def act_on_root(self, root: Sequence[int]) -> Root:
        return _matvec(self.matrix, root)

    def act(self, values: Sequence[GroupValue]) -> Tuple[GroupValue, ...]:
        """Apply to Λ-valued coordinates."""
        if not values:
            return ()
        group_rank = values[0].rank
        return tuple(linear_combination(row, values, group_rank) for row in self.matrix)

    def __mul__(self, other: "SphericalWeylElement") -> "SphericalWeylElement":
        return SphericalWeylElement(_matmul(self.matrix, other.matrix), self.word + other.word)

    def inverse(self) -> "SphericalWeylElement":
        inverse = _invert(self.matrix)
        return SphericalWeylElement(
            tuple(tuple(int(x) for x in row) for row in inverse),
            tuple(reversed(self.word)),
        )


class RootSystem:
    """Roots, coroot functionals and the enumerated spherical Weyl group."""

    def __init__(self, kind: str, rank: int):
        self.kind = kind
        self.rank = rank
        self.cartan = cartan_matrix(kind, rank)
        self._gram = self._gram_matrix()
        self.roots = self._enumerate_roots()
        self.positive_roots = tuple(
            sorted((r for r in self.roots if all(c >= 0 for c in r)), key=lambda r: (sum(r), tuple(-c for c in r)))
        )
        self._root_set = frozenset(self.roots)
        self._coroots = {root: self._coroot_functional(root) for root in self.roots}
        self.simple_reflections = tuple(self._simple_reflection(i) for i in range(rank))
        self.elements = self._enumerate_group()
        self._by_matrix = {w.matrix: w for w in self.elements}
        self._parabolics = {}
        logger.debug("Built %s: %d roots, |W| = %d", self.label, len(self.roots), len(self.elements))

    @property
    def label(self) -> str:
        return f"{self.kind}{self.rank}"

    def __repr__(self) -> str:
        return f"RootSystem({self.label})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RootSystem) and (self.kind, self.rank) == (other.kind, other.rank)

    def __hash__(self) -> int:
        return hash((self.kind, self.rank))

    def _gram_matrix(self) -> Tuple[Tuple[Fraction, ...], ...]:
        # squared lengths ℓ with C[i][j]·ℓ_j = C[j][i]·ℓ_i, propagated along the Dynkin tree
        lengths: List[Optional[Fraction]] = [None] * self.rank
        lengths[0] = Fraction(1)
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in range(self.rank):
                if j != i and self.cartan[i][j] and lengths[j] is None:
                    lengths[j] = Fraction(self.cartan[j][i]) * lengths[i] / self.cartan[i][j]
                    queue.append(j)
        return tuple(
            tuple(Fraction(self.cartan[i][j]) * lengths[j] / 2 for j in range(self.rank)) for i in range(self.rank)
        )

    def _reflect_simple(self, i: int, root: Root) -> Root:
        coefficient = sum(root[j] * self.cartan[j][i] for j in range(self.rank))
        return tuple(c - coefficient if k == i else c for k, c in enumerate(root))

    def _enumerate_roots(self) -> Tuple[Root, ...]:
        simple = [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]
        seen = set(simple)
        queue = deque(simple)
        while queue:
            root = queue.popleft()
            for i in range(self.rank):
                image = self._reflect_simple(i, root)
                if image not in seen:
                    seen.add(image)
                    queue.append(image)
        return tuple(sorted(seen))

    def _coroot_functional(self, root: Root) -> Tuple[int, ...]:
        inner = [sum(root[j] * self._gram[i][j] for j in range(self.rank)) for i in range(self.rank)]
        norm = sum(root[i] * inner[i] for i in range(self.rank))
        coefficients = [2 * x / norm for x in inner]
        assert all(c.denominator == 1 for c in coefficients), "crystallographic pairing must be integral"
        return tuple(int(c) for c in coefficients)

    def _simple_reflection(self, i: int) -> SphericalWeylElement:
        rows = []
        for r in range(self.rank):
            if r == i:
                rows.append(tuple(int(r == j) - self.cartan[j][i] for j in range(self.rank)))
            else:
                rows.append(tuple(int(r == j) for j in range(self.rank)))
        return SphericalWeylElement(tuple(rows), (i,))

    def _enumerate_group(self) -> Tuple[SphericalWeylElement, ...]:
        identity = SphericalWeylElement(_identity(self.rank), ())
        found = {identity.matrix: identity}
        order = [identity]
        queue = deque([identity])
        while queue:
            w = queue.popleft()
            for generator in self.simple_reflections:
                matrix = _matmul(w.matrix, generator.matrix)
                if matrix not in found:
                    element = SphericalWeylElement(matrix, w.word + generator.word)
                    found[matrix] = element
                    order.append(element)
                    queue.append(element)
        return tuple(order)

    # queries

    def is_root(self, root: Sequence[int]) -> bool:
        return tuple(root) in self._root_set

    def require_root(self, root: Sequence[int]) -> Root:
        root = tuple(int(c) for c in root)
        if root not in self._root_set:
            raise NotARootError(f"{list(root)} is not a root of {self.label}", witness={"root": list(root)})
        return root

    def coroot(self, root: Sequence[int]) -> Tuple[int, ...]:
        """Coefficients c with ⟨x, β∨⟩ = Σ cᵢ xᵢ."""
        return self._coroots[self.require_root(root)]

    def pairing(self, x: Sequence[GroupValue], root: Sequence[int]) -> GroupValue:
        """⟨x, β∨⟩ for Λ-valued coordinates x."""
        return linear_combination(self.coroot(root), x, x[0].rank)

    def squared_length(self, root: Sequence[int]) -> Fraction:
        return sum(root[i] * root[j] * self._gram[i][j] for i in range(self.rank) for j in range(self.rank))

    @property
    def identity(self) -> SphericalWeylElement:
        return self.elements[0]

    def element(self, matrix: Sequence[Sequence[int]]) -> Optional[SphericalWeylElement]:
        """The enumerated element with this matrix (carrying a reduced word), or None."""
        key = tuple(tuple(int(x) for x in row) for row in matrix)
        return self._by_matrix.get(key)

    def normalize(self, w: SphericalWeylElement) -> SphericalWeylElement:
        found = self._by_matrix.get(w.matrix)
        if found is None:
            raise UnsupportedRootSystemError(f"Matrix {w.matrix} is not in W({self.label})")
        return found

    def from_word(self, word: Iterable[int]) -> SphericalWeylElement:
        w = self.identity
        for index in word:
            if not 0 <= index < self.rank:
                raise NotARootError(f"Simple reflection index {index + 1} outside 1..{self.rank}")
            w = w * self.simple_reflections[index]
        return self.normalize(w)

    def product(self, a: SphericalWeylElement, b: SphericalWeylElement) -> SphericalWeylElement:
        return self.normalize(a * b)

    def inverse(self, w: SphericalWeylElement) -> SphericalWeylElement:
        return self.normalize(w.inverse())

    def reflection(self, root: Sequence[int]) -> SphericalWeylElement:
        """r_β : x ↦ x − ⟨x, β∨⟩β."""
        root = self.require_root(root)
        functional = self._coroots[root]
        matrix = tuple(
            tuple(int(i == j) - root[i] * functional[j] for j in range(self.rank)) for i in range(self.rank)
        )
        return self._by_matrix[matrix]

    def is_positive(self, root: Sequence[int]) -> bool:
        return all(c >= 0 for c in root)

    def is_positive_after(self, w: SphericalWeylElement, root: Sequence[int]) -> bool:
        """w⁻¹β ∈ R⁺."""
        root = self.require_root(root)
        return self.is_positive(self.inverse(w).act_on_root(root))

    def fundamental_weight(self, j: int) -> Tuple[Fraction, ...]:
        """ω_j in simple-root coordinates: ⟨ω_j, α_i∨⟩ = δ_ij."""
        return tuple(_inverse_cartan(self.kind, self.rank)[j])

    @property
    def longest_element(self) -> SphericalWeylElement:
        return self.elements[-1]

    def opposition(self, j: int) -> int:
        """The index σ(j) with −w₀α_j = α_σ(j)."""
        image = tuple(-c for c in self.longest_element.act_on_root(tuple(int(i == j) for i in range(self.rank))))
        return image.index(1)

    def parabolic(self, generators: Iterable[int]) -> Tuple[SphericalWeylElement, ...]:
        """The standard parabolic subgroup generated by the given simple reflections."""
        allowed = frozenset(generators)
        if allowed not in self._parabolics:
            self._parabolics[allowed] = tuple(w for w in self.elements if set(w.word) <= allowed)
        return self._parabolics[allowed]

    def minimal_coset_representative(self, w: SphericalWeylElement, stabilizer: FrozenSet[int]) -> SphericalWeylElement:
        """Shortest element of w·W_K for K = ``stabilizer``."""
        coset = (self.product(w, u) for u in self.parabolic(stabilizer))
        return min(coset, key=lambda v: (v.length, v.word))


@lru_cache(maxsize=None)
def _inverse_cartan(kind: str, rank: int) -> Tuple[Tuple[Fraction, ...], ...]:
    # x^T C = e_j^T, so ω_j is row j of C⁻¹
    return tuple(tuple(row) for row in _invert(cartan_matrix(kind, rank)))


@lru_cache(maxsize=None)
def build(kind: str, rank: int) -> RootSystem:
    kind = kind.upper()
    if kind == "G2":
        kind = "G"
    return RootSystem(kind, rank)


def weyl_group(rs: RootSystem) -> List[SphericalWeylElement]:
    """All elements, identity first, in breadth-first order of reduced words."""
    return list(rs.elements)


def pairing(rs: RootSystem, x: Sequence[GroupValue], beta: Sequence[int]) -> GroupValue:
    return rs.pairing(x, beta)


def is_positive_after(rs: RootSystem, w: SphericalWeylElement, beta: Sequence[int]) -> bool:
    return rs.is_positive_after(w, beta)
