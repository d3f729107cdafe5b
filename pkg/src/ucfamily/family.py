"""Set families over a universe of at most 64 elements.

Each member set is stored as an int bitmask over internal indices
``0..n-1``.  External labels (the positive integers found in input files)
are compacted to internal indices in ascending label order, so bit ``i``
always stands for ``labels[i]``.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import FamilyError, NotUnionClosedError, ParseError

MAX_ELEMENTS = 64

_TOKEN_SPLIT = re.compile(r"[,\s]+")


def popcount(mask: int) -> int:
    return mask.bit_count()


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


@dataclass(frozen=True)
class SetFamily:
    """A deduplicated family of nonempty sets whose union is the universe.

    ``members`` is strictly ascending by mask value; ``labels[i]`` is the
    external label of element ``i``.
    """

    n: int
    members: tuple[int, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ELEMENTS:
            raise FamilyError(f"universe size {self.n} outside 1..{MAX_ELEMENTS}")
        if not self.members:
            raise FamilyError("a family needs at least one member")
        if len(self.labels) != self.n:
            raise FamilyError("labels must name every element exactly once")
        if any(b <= a for a, b in zip(self.labels, self.labels[1:])):
            raise FamilyError("labels must be strictly ascending")
        if self.labels[0] < 1:
            raise FamilyError("labels must be positive integers")
        if any(b <= a for a, b in zip(self.members, self.members[1:])):
            raise FamilyError("members must be strictly ascending")
        if self.members[0] == 0:
            raise FamilyError("the empty set is not allowed as a member")
        union = 0
        for mask in self.members:
            union |= mask
        if union != self.universe:
            raise FamilyError("union of members must be exactly the universe")

    @property
    def m(self) -> int:
        return len(self.members)

    @property
    def universe(self) -> int:
        return (1 << self.n) - 1

    def index_of(self, mask: int) -> int:
        """Position of ``mask`` in ``members``, or -1."""
        i = bisect_left(self.members, mask)
        if i < len(self.members) and self.members[i] == mask:
            return i
        return -1

    def __contains__(self, mask) -> bool:
        return self.index_of(mask) >= 0

    def label_list(self, mask: int) -> list[int]:
        return [self.labels[i] for i in bits(mask)]

    def mask_of(self, labels: Iterable[int]) -> int:
        lookup = {lab: i for i, lab in enumerate(self.labels)}
        mask = 0
        for lab in labels:
            if lab not in lookup:
                raise FamilyError(f"label {lab} is not in the universe")
            mask |= 1 << lookup[lab]
        return mask

    def label_sets(self) -> list[list[int]]:
        return [self.label_list(mask) for mask in self.members]

    def element_index(self, label: int) -> int:
        i = bisect_left(self.labels, label)
        if i == len(self.labels) or self.labels[i] != label:
            raise FamilyError(f"label {label} is not in the universe")
        return i


@dataclass(frozen=True)
class ParseReport:
    duplicates_removed: int = 0
    comment_lines: int = 0
    blank_lines: int = 0
    set_lines: int = 0


@dataclass(frozen=True)
class FrequencyVector:
    """``counts[i]`` is the number of members containing element ``i``."""

    counts: tuple[int, ...]
    m: int

    def is_abundant(self, index: int) -> bool:
        return 2 * self.counts[index] > self.m


def from_masks(masks: Iterable[int], labels: Sequence[int] | None = None) -> SetFamily:
    """Build a family from raw masks, dropping duplicates and unused bits.

    ``labels[i]`` names bit ``i`` of the input masks (default ``i + 1``).
    Bits that occur in no mask are removed and the rest compacted, keeping
    their labels.
    """
    masks = set(masks)
    if not masks:
        raise FamilyError("a family needs at least one member")
    if 0 in masks:
        raise FamilyError("the empty set is not allowed as a member")
    union = 0
    for mask in masks:
        union |= mask
    used = bits(union)
    if labels is None:
        labels = range(1, union.bit_length() + 1)
    if len(used) > MAX_ELEMENTS:
        raise FamilyError(f"more than {MAX_ELEMENTS} distinct elements")
    if used == list(range(len(used))):
        compact = masks
    else:
        remap = {old: new for new, old in enumerate(used)}
        compact = set()
        for mask in masks:
            out = 0
            for b in bits(mask):
                out |= 1 << remap[b]
            compact.add(out)
    return SetFamily(len(used), tuple(sorted(compact)), tuple(labels[b] for b in used))


def from_label_sets(sets: Iterable[Iterable[int]]) -> SetFamily:
    """Build a family from sets of external labels, e.g. ``[[1], [1, 2]]``."""
    sets = [frozenset(s) for s in sets]
    if any(not s for s in sets):
        raise FamilyError("the empty set is not allowed as a member")
    labels = sorted(set().union(*sets)) if sets else []
    if labels and labels[0] < 1:
        raise FamilyError("labels must be positive integers")
    if len(labels) > MAX_ELEMENTS:
        raise FamilyError(f"more than {MAX_ELEMENTS} distinct elements")
    index = {lab: i for i, lab in enumerate(labels)}
    masks = []
    for s in sets:
        mask = 0
        for lab in s:
            mask |= 1 << index[lab]
        masks.append(mask)
    return from_masks(masks, labels)


def parse_family(text: str) -> tuple[SetFamily, ParseReport]:
    """Parse the line-per-set text format.

    Elements are positive base-10 integers separated by spaces and/or
    commas.  Blank lines and lines starting with ``#`` are skipped.
    """
    raw_sets = []
    comments = blanks = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            blanks += 1
            continue
        if stripped.startswith("#"):
            comments += 1
            continue
        elems = set()
        for tok in _TOKEN_SPLIT.split(stripped):
            if not tok:
                continue
            if not tok.isdigit() or not tok.isascii():
                raise ParseError(f"malformed token {tok!r}", lineno)
            value = int(tok)
            if value < 1:
                raise ParseError(f"labels must be positive, got {tok!r}", lineno)
            elems.add(value)
        if not elems:
            raise ParseError("empty set is not allowed", lineno)
        raw_sets.append(frozenset(elems))
    if not raw_sets:
        raise ParseError("no sets found")
    distinct = set(raw_sets)
    n_labels = len(set().union(*distinct))
    if n_labels > MAX_ELEMENTS:
        raise ParseError(f"{n_labels} distinct labels exceeds the limit of {MAX_ELEMENTS}")
    family = from_label_sets(distinct)
    report = ParseReport(
        duplicates_removed=len(raw_sets) - len(distinct),
        comment_lines=comments,
        blank_lines=blanks,
        set_lines=len(raw_sets),
    )
    return family, report


def format_family(f: SetFamily) -> str:
    return "".join(" ".join(map(str, f.label_list(mask))) + "\n" for mask in f.members)


def find_unclosed_pair(f: SetFamily) -> tuple[int, int] | None:
    """First pair of members (as masks) whose union is not a member."""
    members = f.members
    present = set(members)
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if a | b not in present:
                return a, b
    return None


def is_union_closed(f: SetFamily) -> bool:
    return find_unclosed_pair(f) is None


def require_union_closed(f: SetFamily) -> None:
    pair = find_unclosed_pair(f)
    if pair is not None:
        a, b = pair
        raise NotUnionClosedError(
            f"family is not union-closed: {f.label_list(a)} | {f.label_list(b)} is missing",
            pair=pair,
        )


def close_masks(masks: Iterable[int]) -> set[int]:
    """Union closure of raw masks by fixpoint iteration."""
    closed = set(masks)
    frontier = list(closed)
    while frontier:
        fresh = []
        snapshot = list(closed)
        for a in frontier:
            for b in snapshot:
                u = a | b
                if u not in closed:
                    closed.add(u)
                    fresh.append(u)
        frontier = fresh
    return closed


def union_closure(gens: Iterable[int], n: int, labels: Sequence[int] | None = None) -> SetFamily:
    """Smallest union-closed family containing the generator masks.

    ``n`` bounds the generator masks; elements that no generator uses are
    dropped from the universe.
    """
    gens = list(gens)
    if not gens:
        raise FamilyError("union_closure needs at least one generator")
    if not 1 <= n <= MAX_ELEMENTS:
        raise FamilyError(f"universe size {n} outside 1..{MAX_ELEMENTS}")
    for g in gens:
        if g == 0:
            raise FamilyError("generators must be nonempty")
        if g >> n:
            raise FamilyError(f"generator {g:#x} has bits beyond n={n}")
    return from_masks(close_masks(gens), labels)


def frequency_vector(f: SetFamily) -> FrequencyVector:
    counts = [0] * f.n
    for mask in f.members:
        for i in bits(mask):
            counts[i] += 1
    return FrequencyVector(tuple(counts), f.m)


def abundant_elements(f: SetFamily) -> list[int]:
    freq = frequency_vector(f)
    return [f.labels[i] for i in range(f.n) if freq.is_abundant(i)]
