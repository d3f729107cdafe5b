"""Brute-force ground truth for small universes.

``enumerate_all_families`` walks every family of nonempty subsets of
``{1..n}`` for n <= 4.  ``check_family`` runs every structural check on one
family and ``verify_all`` aggregates those checks into a census.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import ConjectureViolation, FamilyError, InvariantViolation
from .family import SetFamily, bits, close_masks, format_family, from_masks, is_union_closed
from .height import height_decomposition, longest_chain_height, verify_height_properties
from .tent import eligible_pairs, intersection_number, tent_of, tent_violations
from .witness import Branch, find_witness

MAX_ENUM_N = 4


def _check_n(n):
    if not 1 <= n <= MAX_ENUM_N:
        raise FamilyError(f"exhaustive enumeration supports 1 <= n <= {MAX_ENUM_N}, got {n}")


def candidate_count(n: int) -> int:
    """Number of families of nonempty subsets of an n-set, the empty family included."""
    _check_n(n)
    return 2 ** (2**n - 1)


def _family_from_candidate(n: int, code: int) -> SetFamily | None:
    # bit s-1 of code selects subset mask s
    full = (1 << n) - 1
    members = []
    union = 0
    c = code
    while c:
        low = c & -c
        s = low.bit_length()
        members.append(s)
        union |= s
        c ^= low
    if union != full:  # also rejects the empty family, code 0
        return None
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if not code >> ((a | b) - 1) & 1:
                return None
    return SetFamily(n, tuple(members), tuple(range(1, n + 1)))


def enumerate_range(n: int, start: int, stop: int):
    """Union-closed covering families among candidate codes in [start, stop)."""
    _check_n(n)
    for code in range(start, stop):
        f = _family_from_candidate(n, code)
        if f is not None:
            yield f


def enumerate_all_families(n: int):
    """Every union-closed family covering ``{1..n}``, by ascending candidate code."""
    return enumerate_range(n, 0, candidate_count(n))


def random_family(n: int, generator_count: int, seed: int) -> SetFamily:
    """Union closure of random generators plus the full set.

    Deterministic in ``(n, generator_count, seed)``.
    """
    if not 1 <= n <= 64:
        raise FamilyError(f"n must lie in 1..64, got {n}")
    if generator_count < 1:
        raise FamilyError("generator_count must be at least 1")
    rng = random.Random(f"ucfamily:{n}:{generator_count}:{seed}")
    gens = set()
    for _ in range(generator_count):
        g = 0
        while g == 0:
            g = rng.getrandbits(n)
        gens.add(g)
    gens.add((1 << n) - 1)
    return from_masks(close_masks(gens), range(1, n + 1))


def brute_force_conjecture(f: SetFamily) -> tuple[int, int, bool]:
    """(best label, its frequency, whether it lies in more than half the sets).

    Counts directly over label sets; ties go to the smallest label.
    """
    sets = [set(s) for s in f.label_sets()]
    best, best_count = None, -1
    for label in sorted(set().union(*sets)):
        count = sum(1 for s in sets if label in s)
        if count > best_count:
            best, best_count = label, count
    return best, best_count, 2 * best_count > len(sets)


def h3_large_trace_holds(f: SetFamily, element: int, trace: dict) -> bool:
    """Recheck the large-m trace: the sets without ``element`` are M and its tent base."""
    sets = [frozenset(s) for s in f.label_sets()]
    missing = {s for s in sets if element not in s}
    claimed = {frozenset(trace["M"])} | {frozenset(b) for b in trace["tent_base"]}
    return missing == claimed and trace["tent_size"] == len(claimed) <= f.n


def check_family(f: SetFamily):
    """Run every check on one family.

    Returns ``(H, branch, violations)``; ``branch`` is None when the witness
    search raised.
    """
    problems = []
    if not is_union_closed(f):
        return None, None, ["not union-closed"]
    d = height_decomposition(f)
    chain = longest_chain_height(f)
    if chain != d.H:
        problems.append(f"peel height {d.H} != longest chain {chain}")
    props = verify_height_properties(f, d)
    for name in props.failures():
        problems.append(f"height property ({name}) failed")

    if d.H == 2:
        low = d.layer(1)
        for e in range(f.n):
            missing = sum(1 for i in low if not f.members[i] >> e & 1)
            if missing > 1:
                problems.append(f"H=2 but element {f.labels[e]} misses {missing} sets")
        if not 1 <= len(low) <= f.n:
            problems.append(f"H=2 with {len(low)} sets in the lower layer")

    for apex in range(f.m):
        for msg in tent_violations(f, tent_of(f, d, apex)):
            problems.append(f"tent at {f.label_list(f.members[apex])}: {msg}")
    for a, b in eligible_pairs(d):
        if intersection_number(f, d, a, b) > 1:
            problems.append(
                f"tents of {f.label_list(f.members[a])} and "
                f"{f.label_list(f.members[b])} share more than one base set"
            )

    branch = None
    try:
        report = find_witness(f, d)
    except (InvariantViolation, ConjectureViolation) as exc:
        problems.append(f"witness: {type(exc).__name__}: {exc}")
    else:
        branch = report.branch
        fv_count = sum(1 for mask in f.members
                       if mask >> f.element_index(report.element) & 1)
        if fv_count != report.frequency:
            problems.append("witness frequency is wrong")
        if report.guaranteed and not 2 * fv_count > f.m:
            problems.append("guaranteed witness is not abundant")
        covered = d.H <= 3 or d.H >= f.n - 1
        if covered and not report.guaranteed:
            problems.append("covered height but witness not guaranteed")
        if branch is Branch.H3_LARGE_M and "quotient" not in report.trace:
            if not h3_large_trace_holds(f, report.element, report.trace):
                problems.append("large-m trace does not match a brute scan")

    _, _, holds = brute_force_conjecture(f)
    if not holds:
        problems.append("no abundant element")
    return d.H, branch, problems


@dataclass
class FamilyCensus:
    n: int
    candidates: int = 0
    families: int = 0
    buckets: Counter = field(default_factory=Counter)
    branches: Counter = field(default_factory=Counter)
    violations: list = field(default_factory=list)

    def add(self, f: SetFamily) -> None:
        H, branch, problems = check_family(f)
        self.families += 1
        self.buckets[(f.m, H)] += 1
        if branch is not None:
            self.branches[branch.value] += 1
        if problems:
            self.violations.append({"family": format_family(f), "problems": problems})

    def merge(self, other: "FamilyCensus") -> None:
        self.candidates += other.candidates
        self.families += other.families
        self.buckets.update(other.buckets)
        self.branches.update(other.branches)
        self.violations.extend(other.violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "n": self.n,
            "candidates": self.candidates,
            "families": self.families,
            "buckets": [
                {"m": m, "H": H, "count": c} for (m, H), c in sorted(self.buckets.items())
            ],
            "branches": dict(sorted(self.branches.items())),
            "violations": self.violations,
        }


def census_range(n: int, start: int, stop: int) -> FamilyCensus:
    census = FamilyCensus(n, candidates=stop - start)
    for f in enumerate_range(n, start, stop):
        census.add(f)
    return census


def verify_all(n: int, workers: int = 1, chunks: int | None = None) -> FamilyCensus:
    """Census of every union-closed covering family on ``{1..n}``.

    With ``workers > 1`` the candidate range is split across processes;
    the merged census does not depend on the split.
    """
    total = candidate_count(n)
    chunks = chunks or max(1, workers)
    edges = [total * k // chunks for k in range(chunks + 1)]
    ranges = list(zip(edges, edges[1:]))
    result = FamilyCensus(n)
    if workers > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(census_range, [n] * len(ranges), *zip(*ranges)))
    else:
        parts = [census_range(n, a, b) for a, b in ranges]
    for part in parts:
        result.merge(part)
    # order violations as a single pass would
    result.violations.sort(key=lambda v: _candidate_code(v["family"]))
    return result


def _candidate_code(text: str) -> int:
    code = 0
    for line in text.splitlines():
        mask = 0
        for tok in line.split():
            mask |= 1 << (int(tok) - 1)
        code |= 1 << (mask - 1)
    return code


def duplicate_columns(f: SetFamily, copies) -> SetFamily:
    """Replace element i by ``copies[i]`` twin elements with identical incidence."""
    offsets = []
    total = 0
    for c in copies:
        offsets.append(total)
        total += c
    masks = []
    for mask in f.members:
        out = 0
        for i in bits(mask):
            out |= ((1 << copies[i]) - 1) << offsets[i]
        masks.append(out)
    return from_masks(masks, range(1, total + 1))
