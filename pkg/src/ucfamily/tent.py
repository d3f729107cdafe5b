"""Tents: an apex set together with the sets just below it.

The base of the tent induced by a member is every member of the
immediately lower peel layer contained in it.  For a union-closed family
any two distinct base sets union to the apex, and two apexes in the same
layer share at most one base set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import PreconditionError
from .family import SetFamily, from_masks, is_union_closed
from .height import HeightDecomposition, height_decomposition


@dataclass(frozen=True)
class Tent:
    apex: int
    base: tuple[int, ...]

    @property
    def size(self) -> int:
        return 1 + len(self.base)

    def indices(self) -> tuple[int, ...]:
        return (self.apex,) + self.base


def _check_index(f: SetFamily, index: int) -> None:
    if not 0 <= index < f.m:
        raise IndexError(f"member index {index} out of range for m={f.m}")


def tent_of(f: SetFamily, d: HeightDecomposition, apex: int) -> Tent:
    """Tent induced by member ``apex``.

    A member of the first peel layer has an empty base.
    """
    _check_index(f, apex)
    peel = d.peel_index[apex]
    if peel == 1:
        return Tent(apex, ())
    top = f.members[apex]
    base = tuple(i for i in d.layer(peel - 1) if f.members[i] & ~top == 0)
    return Tent(apex, base)


def tent_family(f: SetFamily, t: Tent) -> SetFamily:
    """The tent as a family in its own right, over the apex's elements."""
    return from_masks((f.members[i] for i in t.indices()), f.labels)


def intersection_number(f: SetFamily, d: HeightDecomposition, a: int, b: int) -> int:
    """Number of base sets shared by the tents of two same-layer apexes."""
    _check_index(f, a)
    _check_index(f, b)
    if a == b:
        raise PreconditionError("intersection number needs two distinct apexes")
    if d.peel_index[a] != d.peel_index[b]:
        raise PreconditionError("apexes lie in different layers")
    if d.peel_index[a] < 2:
        raise PreconditionError("apexes in the first peel layer have no base")
    return len(set(tent_of(f, d, a).base) & set(tent_of(f, d, b).base))


def eligible_pairs(d: HeightDecomposition):
    """Same-layer apex pairs with a layer below them."""
    for layer in d.layers[1:]:
        yield from combinations(layer, 2)


def is_tent(f: SetFamily) -> bool:
    return is_union_closed(f) and height_decomposition(f).H == 2


def tent_violations(f: SetFamily, t: Tent) -> list[str]:
    """Structural claims about a tent that fail, as messages.

    Empty list when the tent is well-formed.  Checked: base sets are proper
    subsets of the apex and form an antichain, any two union to the apex,
    every apex element misses at most one base set, and a nonempty base
    gives a union-closed family of height 2.
    """
    members = f.members
    top = members[t.apex]
    base = [members[i] for i in t.base]
    problems = []
    for s in base:
        if s & ~top or s == top:
            problems.append(f"base set {f.label_list(s)} is not a proper subset of the apex")
    for a, b in combinations(base, 2):
        if a & ~b == 0 or b & ~a == 0:
            problems.append(f"base sets {f.label_list(a)}, {f.label_list(b)} are comparable")
        if a | b != top:
            problems.append(f"base sets {f.label_list(a)}, {f.label_list(b)} do not union to the apex")
    if base:
        for i in range(f.n):
            if top >> i & 1:
                missing = sum(1 for s in base if not s >> i & 1)
                if missing > 1:
                    problems.append(f"element {f.labels[i]} misses {missing} base sets")
        sub = tent_family(f, t)
        if not is_tent(sub):
            problems.append("apex plus base is not a union-closed family of height 2")
    return problems
