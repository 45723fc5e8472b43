"""Refute k-transitivity of rational-cover monodromy by point counting."""

from .certify import (
    Certificate,
    build_certificate,
    certificate_from_json,
    hasse_weil_upper,
    hw_violates,
)
from .errors import (
    BadReduction,
    CheckpointMismatch,
    CycleTypeError,
    InconsistencyError,
    KcoverError,
    NotAPrimeIdeal,
    PrimalityError,
    SpecFileError,
)
from .frobcount import ScanResult, scan_parallel, scan_range
from .modarith import FPoly, PrimeField, distinct_degree_counts, is_prime_u64
from .numfield import (
    CoverSpec,
    NFElement,
    NumberFieldSpec,
    PrimeIdealSpec,
    reduce_cover,
    reduce_element,
    validate_prime,
)
from .permcomb import (
    CycleType,
    GenusReport,
    RamificationType,
    cycle_type_power,
    genus_Ck,
    induced_cycle_count,
    parse_cycle_type,
    pi_k,
)
from .specfile import ParsedSpec, load_spec

__version__ = "0.1.0"

__all__ = [
    "BadReduction",
    "Certificate",
    "CheckpointMismatch",
    "CoverSpec",
    "CycleType",
    "CycleTypeError",
    "FPoly",
    "GenusReport",
    "InconsistencyError",
    "KcoverError",
    "NFElement",
    "NotAPrimeIdeal",
    "NumberFieldSpec",
    "ParsedSpec",
    "PrimalityError",
    "PrimeField",
    "PrimeIdealSpec",
    "RamificationType",
    "ScanResult",
    "SpecFileError",
    "build_certificate",
    "certificate_from_json",
    "cycle_type_power",
    "distinct_degree_counts",
    "genus_Ck",
    "hasse_weil_upper",
    "hw_violates",
    "induced_cycle_count",
    "is_prime_u64",
    "load_spec",
    "parse_cycle_type",
    "pi_k",
    "reduce_cover",
    "reduce_element",
    "scan_parallel",
    "scan_range",
    "validate_prime",
]
