import math

import pytest

from buildings.errors import NotARootError, UnsupportedRootSystemError
from buildings.ordered_groups import GroupValue
from buildings.root_systems import build, is_positive_after, pairing, weyl_group


def weyl_order(kind, rank):
    if kind == "A":
        return math.factorial(rank + 1)
    if kind in ("B", "C"):
        return 2 ** rank * math.factorial(rank)
    if kind == "D":
        return 2 ** (rank - 1) * math.factorial(rank)
    return 12


@pytest.mark.parametrize(
    "kind, rank",
    [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 3), ("C", 4), ("D", 4), ("G", 2)],
)
def test_weyl_group_order(kind, rank):
    rs = build(kind, rank)
    assert len(weyl_group(rs)) == weyl_order(kind, rank)
    assert len(rs.roots) == 2 * len(rs.positive_roots)


def test_small_group_orders():
    assert len(build("A", 1).elements) == 2
    assert len(build("A", 2).elements) == 6
    assert len(build("B", 2).elements) == 8
    assert len(build("G2", 2).elements) == 12
    assert len(build("G", 2).positive_roots) == 6


def test_unsupported_root_system():
    with pytest.raises(UnsupportedRootSystemError):
        build("E", 6)
    with pytest.raises(UnsupportedRootSystemError):
        build("A", 5)


def test_coroot_pairings_match_cartan_matrix():
    rs = build("A", 2)
    assert rs.coroot((1, 0)) == (2, -1)
    assert rs.coroot((0, 1)) == (-1, 2)
    g2 = build("G", 2)
    assert g2.coroot((1, 0))[1] == g2.cartan[1][0]
    for rs in (build("B", 3), build("C", 3), g2):
        for i in range(rs.rank):
            simple = tuple(int(k == i) for k in range(rs.rank))
            for j in range(rs.rank):
                assert rs.coroot(simple)[j] == rs.cartan[j][i]


def test_pairing_examples():
    rs = build("A", 2)
    one = GroupValue.of(1)
    zero = GroupValue.of(0)
    assert pairing(rs, (one, zero), (1, 0)) == GroupValue.of(2)
    assert pairing(rs, (one, zero), (0, 1)) == GroupValue.of(-1)
    assert pairing(rs, (one, zero), (1, 1)) == GroupValue.of(1)


def test_not_a_root():
    rs = build("A", 2)
    with pytest.raises(NotARootError):
        rs.coroot((1, -1))


def test_is_positive_after():
    rs = build("A", 1)
    assert is_positive_after(rs, rs.identity, (1,))
    assert not is_positive_after(rs, rs.from_word([0]), (1,))
    a2 = build("A", 2)
    s1 = a2.from_word([0])
    assert not is_positive_after(a2, s1, (1, 0))
    assert is_positive_after(a2, s1, (0, 1))
    assert is_positive_after(a2, s1, (1, 1))


def test_reduced_words_have_minimal_length():
    rs = build("B", 3)
    for w in rs.elements:
        inversions = sum(1 for root in rs.positive_roots if not rs.is_positive(w.inverse().act_on_root(root)))
        assert len(w.word) == inversions
        assert rs.from_word(w.word) == w


def test_reflections_are_involutions_negating_their_root():
    rs = build("C", 3)
    for root in rs.positive_roots:
        r = rs.reflection(root)
        assert rs.product(r, r).is_identity
        assert r.act_on_root(root) == tuple(-c for c in root)


def test_longest_element_and_opposition():
    a2 = build("A", 2)
    assert a2.longest_element.length == 3
    assert (a2.opposition(0), a2.opposition(1)) == (1, 0)
    b2 = build("B", 2)
    assert (b2.opposition(0), b2.opposition(1)) == (0, 1)


def test_fundamental_weights_are_dual_to_simple_coroots():
    from fractions import Fraction

    rs = build("A", 2)
    assert rs.fundamental_weight(0) == (Fraction(2, 3), Fraction(1, 3))
    for j in range(rs.rank):
        weight = rs.fundamental_weight(j)
        for i in range(rs.rank):
            coroot = rs.coroot(tuple(int(k == i) for k in range(rs.rank)))
            assert sum(c * x for c, x in zip(coroot, weight)) == int(i == j)


def test_parabolic_and_coset_representative():
    rs = build("A", 2)
    assert len(rs.parabolic([0])) == 2
    s1 = rs.from_word([0])
    assert rs.minimal_coset_representative(s1, frozenset({0})).is_identity
    assert rs.element(((1, 0), (0, 1))).is_identity
    assert rs.element(((2, 0), (0, 1))) is None


@pytest.mark.parametrize("kind, rank, ratio", [("A", 3, 1), ("B", 2, 2), ("C", 3, 2), ("D", 4, 1), ("G", 2, 3)])
def test_root_lengths(kind, rank, ratio):
    rs = build(kind, rank)
    lengths = {rs.squared_length(root) for root in rs.roots}
    assert max(lengths) / min(lengths) == ratio
    assert len(lengths) == (1 if ratio == 1 else 2)
