from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from ucfamily.errors import FamilyError, NotUnionClosedError, ParseError
from ucfamily.family import (
    SetFamily,
    abundant_elements,
    close_masks,
    format_family,
    frequency_vector,
    from_masks,
    is_union_closed,
    parse_family,
    require_union_closed,
    union_closure,
)
from ucfamily.oracle import enumerate_all_families

from conftest import fam, power_set_family


def test_parse_simple():
    f, report = parse_family("1 2\n1\n")
    assert f.n == 2
    assert f.members == (0b01, 0b11)
    assert f.labels == (1, 2)
    assert report.duplicates_removed == 0


def test_parse_counts_duplicates():
    f, report = parse_family("1 1 2\n1 2\n")
    assert f.n == 2
    assert f.members == (0b11,)
    assert report.duplicates_removed == 1


def test_parse_compacts_labels():
    f, _ = parse_family("7 9\n7\n9\n")
    assert f.n == 2
    assert f.labels == (7, 9)
    assert f.members == (0b01, 0b10, 0b11)


def test_parse_commas_comments_blanks():
    f, report = parse_family("# a family\n\n1,2\n 2 , 3\n1, 2,3\n")
    assert f.label_sets() == [[1, 2], [2, 3], [1, 2, 3]]
    assert report.comment_lines == 1
    assert report.blank_lines == 1


@pytest.mark.parametrize("text", ["", "# only a comment\n", "\n\n"])
def test_parse_rejects_no_sets(text):
    with pytest.raises(ParseError):
        parse_family(text)


@pytest.mark.parametrize("text", ["1 x\n", "1 -2\n", "1.5\n", "0\n", "1 ²\n"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ParseError):
        parse_family(text)


def test_parse_rejects_empty_set_line():
    with pytest.raises(ParseError, match="line 2"):
        parse_family("1 2\n,\n")


def test_parse_rejects_too_many_labels():
    parse_family(" ".join(str(i) for i in range(1, 65)) + "\n")
    with pytest.raises(ParseError):
        parse_family(" ".join(str(i) for i in range(1, 66)) + "\n")


def test_format():
    assert format_family(fam([1], [1, 2])) == "1\n1 2\n"
    f, _ = parse_family("2 1\n")
    assert format_family(f) == "1 2\n"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_round_trip_enumerated(n):
    for f in enumerate_all_families(n):
        assert parse_family(format_family(f))[0] == f


@given(st.lists(st.frozensets(st.integers(1, 200), min_size=1, max_size=6), min_size=1, max_size=10))
def test_round_trip_arbitrary_labels(sets):
    f = fam(*sets)
    assert parse_family(format_family(f))[0] == f
    assert sorted(map(sorted, set(sets))) == sorted(f.label_sets())


def test_setfamily_invariants():
    with pytest.raises(FamilyError):
        SetFamily(2, (0b01,), (1, 2))  # union is not the universe
    with pytest.raises(FamilyError):
        SetFamily(1, (0, 1), (1,))
    with pytest.raises(FamilyError):
        SetFamily(2, (0b11, 0b01), (1, 2))
    with pytest.raises(FamilyError):
        from_masks([])


def test_is_union_closed_examples(power3):
    assert is_union_closed(fam([1], [2], [1, 2]))
    assert not is_union_closed(fam([1], [2]))
    assert is_union_closed(power3)


def test_require_union_closed_reports_pair():
    f = fam([1], [2])
    with pytest.raises(NotUnionClosedError) as info:
        require_union_closed(f)
    assert info.value.pair == (0b01, 0b10)


def brute_closure(sets):
    """Union closure by adding every pairwise union until nothing changes."""
    family = {frozenset(s) for s in sets}
    while True:
        extra = {a | b for a, b in combinations(family, 2)} - family
        if not extra:
            return family
        family |= extra


def test_union_closure_examples():
    assert union_closure([0b01, 0b10], 2).label_sets() == [[1], [2], [1, 2]]
    assert union_closure([0b11], 2).label_sets() == [[1, 2]]
    assert union_closure([1, 2, 4], 3) == power_set_family(3)


def test_union_closure_errors():
    with pytest.raises(FamilyError):
        union_closure([], 3)
    with pytest.raises(FamilyError):
        union_closure([0, 1], 3)
    with pytest.raises(FamilyError):
        union_closure([8], 3)


@given(st.lists(st.integers(1, 2**6 - 1), min_size=1, max_size=6))
def test_union_closure_matches_brute(gens):
    f = union_closure(gens, 6)
    assert is_union_closed(f)
    expected = brute_closure([{i + 1 for i in range(6) if g >> i & 1} for g in gens])
    assert {frozenset(s) for s in f.label_sets()} == expected
    assert union_closure(f.members, f.n, f.labels) == f
    top = 0
    for g in gens:
        top |= g
    assert bin(top).count("1") == f.n


def test_close_masks_fixpoint():
    assert close_masks([1, 2, 4]) == set(range(1, 8))


def test_frequency_vector_examples(power3):
    assert frequency_vector(fam([1], [1, 2])).counts == (2, 1)
    assert frequency_vector(power3).counts == (4, 4, 4)
    assert frequency_vector(fam([1, 2, 3])).counts == (1, 1, 1)


@given(st.lists(st.frozensets(st.integers(1, 8), min_size=1), min_size=1, max_size=12))
def test_frequency_totals(sets):
    f = fam(*sets)
    fv = frequency_vector(f)
    assert sum(fv.counts) == sum(bin(mask).count("1") for mask in f.members)
    assert all(1 <= c <= f.m for c in fv.counts)


def test_abundant_elements_examples(power3):
    assert abundant_elements(fam([1], [1, 2])) == [1]
    assert abundant_elements(power3) == [1, 2, 3]
    assert abundant_elements(fam([1], [2], [1, 2])) == [1, 2]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_every_small_family_has_abundant_element(n):
    for f in enumerate_all_families(n):
        assert abundant_elements(f)
