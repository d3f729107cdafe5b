"""Height decomposition and abundant elements of union-closed set families."""

from .errors import (
    ConjectureViolation,
    FamilyError,
    InvariantViolation,
    NotUnionClosedError,
    ParseError,
    PreconditionError,
)
from .family import (
    FrequencyVector,
    ParseReport,
    SetFamily,
    abundant_elements,
    format_family,
    frequency_vector,
    from_label_sets,
    from_masks,
    is_union_closed,
    parse_family,
    union_closure,
)
from .height import (
    HeightDecomposition,
    height_decomposition,
    height_number_of_set,
    longest_chain_height,
    verify_height_properties,
)
from .tent import Tent, intersection_number, is_tent, tent_of
from .witness import (
    Branch,
    WitnessReport,
    find_witness,
    is_separating,
    separation_quotient,
)

__version__ = "0.1.0"
