"""Constructive abundant-element finder.

``find_witness`` dispatches on the height number H of a union-closed
family and runs a dedicated argument for each covered case:

* H = 1: the family is just the universe.
* H = 2: every element misses at most one set.
* H = 3, m > 2n: an element missing from exactly one set M of the second
  peel layer misses only M and the tent below it, at most n sets.
* H = 3, m <= 2n: merge twin elements; either the merged family has
  m > 2n' and the previous case applies, or it is a separating family
  with at most 2n' sets, where an abundant element is known to exist and
  a frequency scan finds it.
* H >= n - 1: a minimal member has one or two elements, and one of them
  is abundant.

Anything else falls back to a plain frequency scan with no guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import ConjectureViolation, InvariantViolation, PreconditionError
from .family import SetFamily, bits, frequency_vector, from_masks, popcount
from .height import HeightDecomposition, height_decomposition
from .tent import tent_of


class Branch(str, Enum):
    H1 = "H1"
    H2 = "H2"
    H3_LARGE_M = "H3-LargeM"
    H3_SEPARATING = "H3-Separating"
    HIGH_SINGLETON = "HighH-Singleton"
    HIGH_PAIR = "HighH-Pair"
    FALLBACK = "Fallback"


@dataclass
class WitnessReport:
    element: int
    frequency: int
    m: int
    branch: Branch
    guaranteed: bool
    trace: dict = field(default_factory=dict)

    @property
    def abundant(self) -> bool:
        return 2 * self.frequency > self.m

    def to_dict(self):
        return {
            "element": self.element,
            "frequency": self.frequency,
            "m": self.m,
            "branch": self.branch.value,
            "guaranteed": self.guaranteed,
            "trace": self.trace,
        }


def _report(f: SetFamily, index: int, branch: Branch, trace=None) -> WitnessReport:
    freq = frequency_vector(f).counts[index]
    report = WitnessReport(f.labels[index], freq, f.m, branch, True, trace or {})
    if not report.abundant:
        raise InvariantViolation(
            f"branch {branch.value} picked element {report.element} "
            f"with frequency {freq} of {f.m}"
        )
    return report


def _decomposition(f, d):
    return height_decomposition(f) if d is None else d


def witness_h1(f: SetFamily, d: HeightDecomposition | None = None) -> WitnessReport:
    d = _decomposition(f, d)
    if d.H != 1:
        raise PreconditionError(f"witness_h1 needs H=1, got H={d.H}")
    if f.m != 1 or f.members[0] != f.universe:
        raise InvariantViolation("a height-1 family must consist of the universe alone")
    return _report(f, 0, Branch.H1)


def witness_h2(f: SetFamily, d: HeightDecomposition | None = None) -> WitnessReport:
    d = _decomposition(f, d)
    if d.H != 2:
        raise PreconditionError(f"witness_h2 needs H=2, got H={d.H}")
    if f.m == 2:
        low = f.members[d.layer(1)[0]]
        return _report(f, bits(low)[0], Branch.H2)
    counts = frequency_vector(f).counts
    for i, c in enumerate(counts):
        if c >= f.m - 1:
            return _report(f, i, Branch.H2, {"min_frequency": min(counts)})
    raise InvariantViolation("height-2 family has an element missing from two sets")


def witness_h3_large(f: SetFamily, d: HeightDecomposition | None = None) -> WitnessReport:
    d = _decomposition(f, d)
    if d.H != 3:
        raise PreconditionError(f"witness_h3_large needs H=3, got H={d.H}")
    if not f.m > 2 * f.n:
        raise PreconditionError(f"witness_h3_large needs m > 2n, got m={f.m}, n={f.n}")
    members = f.members
    second = d.layer(2)
    target = len(second) - 1

    layer_counts = [0] * f.n
    for i in second:
        for e in bits(members[i]):
            layer_counts[e] += 1
    if min(layer_counts) < target:
        raise InvariantViolation("an element misses two sets of the second peel layer")
    x = next((e for e, c in enumerate(layer_counts) if c == target), None)
    if x is None:
        raise InvariantViolation("every second-layer set is the universe")

    lacking = [i for i in second if not members[i] >> x & 1]
    if len(lacking) != 1:
        raise InvariantViolation(f"{len(lacking)} second-layer sets miss the chosen element")
    apex = lacking[0]
    tent = tent_of(f, d, apex)

    missing_x = {i for i, mask in enumerate(members) if not mask >> x & 1}
    if missing_x != set(tent.indices()):
        raise InvariantViolation(
            "sets missing the chosen element differ from the tent below M"
        )
    if tent.size > f.n:
        raise InvariantViolation(f"tent below M has {tent.size} > n={f.n} sets")

    trace = {
        "M": f.label_list(members[apex]),
        "tent_size": tent.size,
        "tent_base": [f.label_list(members[i]) for i in tent.base],
        "second_layer_size": len(second),
    }
    report = _report(f, x, Branch.H3_LARGE_M, trace)
    if report.frequency != f.m - tent.size:
        raise InvariantViolation("frequency disagrees with m - |T(M)|")
    return report


def incidence_vectors(f: SetFamily) -> list[int]:
    """Bit j of entry i is set when member j contains element i."""
    vectors = [0] * f.n
    for j, mask in enumerate(f.members):
        for i in bits(mask):
            vectors[i] |= 1 << j
    return vectors


def is_separating(f: SetFamily) -> bool:
    """True when every pair of elements is split by some member."""
    vectors = incidence_vectors(f)
    return len(set(vectors)) == len(vectors)


@dataclass(frozen=True)
class Quotient:
    """A family with twin elements merged.

    ``element_map`` sends each original label to its new label (new labels
    are ``1..n'`` in order of first occurrence).  ``representatives[k]`` is
    the smallest original label merged into new label ``k + 1``, and
    ``member_map[j]`` is the new position of original member ``j``.
    """

    family: SetFamily
    element_map: dict[int, int]
    representatives: tuple[int, ...]
    member_map: tuple[int, ...]

    def original_label(self, new_label: int) -> int:
        return self.representatives[new_label - 1]


def separation_quotient(f: SetFamily) -> Quotient:
    vectors = incidence_vectors(f)
    cls_of_vector: dict[int, int] = {}
    cls = []
    reps = []
    for i, v in enumerate(vectors):
        if v not in cls_of_vector:
            cls_of_vector[v] = len(reps)
            reps.append(f.labels[i])
        cls.append(cls_of_vector[v])
    new_masks = []
    for mask in f.members:
        out = 0
        for i in bits(mask):
            out |= 1 << cls[i]
        new_masks.append(out)
    q = from_masks(new_masks, range(1, len(reps) + 1))
    if q.m != f.m:
        raise InvariantViolation("merging twin elements collapsed member sets")
    return Quotient(
        family=q,
        element_map={f.labels[i]: cls[i] + 1 for i in range(f.n)},
        representatives=tuple(reps),
        member_map=tuple(q.index_of(mask) for mask in new_masks),
    )


def _lift(report: WitnessReport, q: Quotient, original: SetFamily) -> WitnessReport:
    label = q.original_label(report.element)
    freq = frequency_vector(original).counts[original.element_index(label)]
    if freq != report.frequency:
        raise InvariantViolation("quotient changed an element frequency")
    trace = dict(report.trace)
    if q.family.n < original.n:
        trace["quotient"] = {
            "n": q.family.n,
            "element_map": {str(k): v for k, v in sorted(q.element_map.items())},
        }
    return WitnessReport(label, freq, original.m, report.branch, report.guaranteed, trace)


def witness_h3(f: SetFamily, d: HeightDecomposition | None = None) -> WitnessReport:
    d = _decomposition(f, d)
    if d.H != 3:
        raise PreconditionError(f"witness_h3 needs H=3, got H={d.H}")
    if f.m > 2 * f.n:
        return witness_h3_large(f, d)
    q = separation_quotient(f)
    qf = q.family
    if qf.m > 2 * qf.n:
        return _lift(witness_h3_large(qf), q, f)
    counts = frequency_vector(qf).counts
    best = max(range(qf.n), key=lambda i: (counts[i], -i))
    report = WitnessReport(
        qf.labels[best], counts[best], qf.m, Branch.H3_SEPARATING, True,
        {"separating_n": qf.n},
    )
    if not report.abundant:
        raise ConjectureViolation(
            f"separating family with m={qf.m} <= 2n={2 * qf.n} has no abundant element",
            family=f, report=report,
        )
    return _lift(report, q, f)


def witness_high(f: SetFamily, d: HeightDecomposition | None = None) -> WitnessReport:
    d = _decomposition(f, d)
    if d.H < f.n - 1:
        raise PreconditionError(f"witness_high needs H >= n-1, got H={d.H}, n={f.n}")
    smallest = min(f.members, key=lambda mask: (popcount(mask), mask))
    if d.peel_index[f.index_of(smallest)] != 1:
        raise InvariantViolation("a minimum-size member is not in the first peel layer")
    size = popcount(smallest)
    if size == 1:
        return _report(f, bits(smallest)[0], Branch.HIGH_SINGLETON,
                       {"S": f.label_list(smallest)})
    if size != 2:
        raise InvariantViolation(f"H >= n-1 but the smallest member has {size} elements")
    counts = frequency_vector(f).counts
    x, y = bits(smallest)
    pick = x if counts[x] >= counts[y] else y
    report = WitnessReport(
        f.labels[pick], counts[pick], f.m, Branch.HIGH_PAIR, True,
        {"S": f.label_list(smallest)},
    )
    if not report.abundant:
        raise ConjectureViolation(
            f"neither element of the pair {f.label_list(smallest)} is abundant",
            family=f, report=report,
        )
    return report


def witness_fallback(f: SetFamily) -> WitnessReport:
    """Frequency scan for heights no case covers.

    The report is guaranteed only when the scan finds an abundant element;
    otherwise a ConjectureViolation carries the unguaranteed report.
    """
    counts = frequency_vector(f).counts
    best = max(range(f.n), key=lambda i: (counts[i], -i))
    report = WitnessReport(f.labels[best], counts[best], f.m, Branch.FALLBACK, False)
    if report.abundant:
        report.guaranteed = True
        return report
    report.trace["potential_counterexample"] = True
    raise ConjectureViolation(
        f"frequency scan found no abundant element (best {counts[best]} of {f.m})",
        family=f, report=report,
    )


def find_witness(f: SetFamily, d: HeightDecomposition | None = None) -> WitnessReport:
    d = _decomposition(f, d)
    H = d.H
    if H == 1:
        return witness_h1(f, d)
    if H == 2:
        return witness_h2(f, d)
    if H == 3:
        return witness_h3(f, d)
    if H >= f.n - 1:
        return witness_high(f, d)
    return witness_fallback(f)
