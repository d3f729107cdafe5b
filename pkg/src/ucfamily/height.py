"""Height decomposition: peeling a union-closed family into antichains.

Two coordinate systems are in play.  The *peel index* counts bottom-up:
layer 1 holds the inclusion-minimal members, and the last layer holds only
the universe.  The *height number* counts top-down, so the universe has
height number 1 and ``height_number = H + 1 - peel_index``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import FamilyError
from .family import SetFamily, bits, popcount, require_union_closed


@dataclass(frozen=True)
class HeightDecomposition:
    """``layers[0]`` is the first peeled layer (peel index 1).

    Layers and ``peel_index`` refer to members by their position in
    ``SetFamily.members``.
    """

    layers: tuple[tuple[int, ...], ...]
    peel_index: tuple[int, ...]

    @property
    def H(self) -> int:
        return len(self.layers)

    def layer(self, peel: int) -> tuple[int, ...]:
        """Members with the given 1-based peel index."""
        if not 1 <= peel <= self.H:
            raise IndexError(f"peel index {peel} outside 1..{self.H}")
        return self.layers[peel - 1]

    def height(self, k: int) -> tuple[int, ...]:
        """Members of the k-th height, counted from the top."""
        return self.layer(self.H + 1 - k)

    def layer_sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)


def peel(masks) -> list[tuple[int, ...]]:
    """Layers of repeatedly removed minimal sets, as positions in ``masks``.

    ``masks`` must be distinct and ascending; closure is not required.
    """
    m = len(masks)
    # A proper subset always has a smaller mask, so only earlier positions
    # need testing.
    supersets: list[list[int]] = [[] for _ in range(m)]
    below = [0] * m
    for i, a in enumerate(masks):
        for j in range(i):
            if masks[j] & ~a == 0:
                supersets[j].append(i)
                below[i] += 1

    layers = []
    current = [i for i in range(m) if below[i] == 0]
    while current:
        layers.append(tuple(current))
        nxt = []
        for i in current:
            for s in supersets[i]:
                below[s] -= 1
                if below[s] == 0:
                    nxt.append(s)
        current = sorted(nxt)
    return layers


def height_decomposition(f: SetFamily) -> HeightDecomposition:
    """Peel minimal members off the family until nothing is left.

    Raises NotUnionClosedError for families that are not union-closed.
    """
    require_union_closed(f)
    layers = peel(f.members)
    peel_index = [0] * f.m
    for k, layer in enumerate(layers, 1):
        for i in layer:
            peel_index[i] = k
    return HeightDecomposition(tuple(layers), tuple(peel_index))


def height_number_of_set(d: HeightDecomposition, index: int) -> int:
    if not 0 <= index < len(d.peel_index):
        raise IndexError(f"member index {index} out of range")
    return d.H + 1 - d.peel_index[index]


def longest_chain_height(f: SetFamily) -> int:
    """Number of sets in the longest strict-inclusion chain of members.

    Works on frozensets with memoized recursion, independently of the
    peeling code.
    """
    sets = [frozenset(bits(mask)) for mask in f.members]

    @lru_cache(maxsize=None)
    def longest_ending_at(i: int) -> int:
        top = sets[i]
        return 1 + max(
            (longest_ending_at(j) for j, s in enumerate(sets) if s < top),
            default=0,
        )

    return max(longest_ending_at(i) for i in range(len(sets)))


@dataclass
class PropertyCheck:
    passed: bool
    detail: str = ""
    counterexample: list = field(default_factory=list)

    def to_dict(self):
        out = {"passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        if self.counterexample:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class PropertyReport:
    checks: dict[str, PropertyCheck]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]

    def to_dict(self):
        return {name: c.to_dict() for name, c in self.checks.items()}


def verify_height_properties(f: SetFamily, d: HeightDecomposition) -> PropertyReport:
    """Check the six structural properties of a height decomposition.

    Keys are ``i`` through ``vi``.  Counterexamples are label lists.
    """
    m = f.m
    if len(d.peel_index) != m or sorted(i for layer in d.layers for i in layer) != list(range(m)):
        raise FamilyError("decomposition does not match the family")
    members = f.members
    n, H = f.n, d.H
    checks = {}

    # (i) the k-th height holds a set with at most n + 1 - k elements
    bad = []
    for k in range(1, H + 1):
        smallest = min(popcount(members[i]) for i in d.height(k))
        if smallest > n + 1 - k:
            bad.append(k)
    checks["i"] = PropertyCheck(
        not bad, "heights lacking a set of size <= n+1-k" if bad else "", bad
    )

    # (ii)
    ok = 1 <= H <= n
    checks["ii"] = PropertyCheck(ok, "" if ok else f"H={H}, n={n}")

    # (iii) one element meets every height
    common = f.universe
    for layer in d.layers:
        union = 0
        for i in layer:
            union |= members[i]
        common &= union
    ok = common != 0
    checks["iii"] = PropertyCheck(
        ok,
        f"witness element {f.labels[bits(common)[0]]}" if ok else "no element meets every height",
    )

    # (iv) layers are antichains
    bad = []
    for layer in d.layers:
        for x, i in enumerate(layer):
            for j in layer[x + 1:]:
                a, b = members[i], members[j]
                if a & ~b == 0 or b & ~a == 0:
                    bad = [f.label_list(a), f.label_list(b)]
                    break
            if bad:
                break
        if bad:
            break
    checks["iv"] = PropertyCheck(not bad, "comparable pair in one layer" if bad else "", bad)

    # (v) a proper superset sits in a strictly higher height
    bad = []
    for i, a in enumerate(members):
        for j in range(i):
            b = members[j]
            if b & ~a == 0 and not d.peel_index[j] < d.peel_index[i]:
                bad = [f.label_list(b), f.label_list(a)]
                break
        if bad:
            break
    checks["v"] = PropertyCheck(not bad, "superset not strictly higher" if bad else "", bad)

    # (vi) the 2nd height holds no universe-sized set
    bad = []
    if H >= 2:
        bad = [f.label_list(members[i]) for i in d.height(2) if popcount(members[i]) > n - 1]
    checks["vi"] = PropertyCheck(not bad, "oversized set in 2nd height" if bad else "", bad)

    return PropertyReport(checks)
