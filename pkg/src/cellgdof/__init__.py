"""Exact GDoF region computations for multi-cell TIN in cellular networks.

The package models K-cell interference networks with rational channel
strength exponents, decides the CTIN / TIN strength regimes, builds the
cycle-bound GDoF polytope with exact membership and support queries, and
cross-checks it against an independent power-control achievability oracle
for both uplink and downlink.
"""

from .network import (
    CellNetwork,
    GdofPoint,
    NetworkFormatError,
    NotCanonicalError,
    UserId,
    as_rational,
    canonicalize,
    parse_network,
    serialize_network,
    symmetric_two_cell,
)
from .cycles import (
    Cycle,
    cycle_count,
    enumerate_cycles,
    predecessor,
    rank_tuples,
    successor,
)
from .regimes import (
    CTIN_CROSS,
    CTIN_INTRA,
    TIN_CROSS,
    TIN_INTRA,
    ConverseCheck,
    ConverseReport,
    RegimeReport,
    Violation,
    is_ctin,
    is_tin,
    recompute_violation,
    verify_converse_steps,
)
from .polytope import (
    ConstraintSet,
    CycleBound,
    EmptyRegionError,
    LinearConstraint,
    MembershipReport,
    SingleCell,
    build_constraints,
    is_member,
    max_weighted,
    sum_gdof,
)
from .oracle import (
    IBC,
    IMAC,
    GridTooLargeError,
    PointCloud,
    PowerAllocation,
    check_duality,
    check_inclusion,
    check_support_match,
    cloud_to_csv,
    default_directions,
    default_floor,
    ibc_gdof,
    imac_gdof,
    sample_region,
)

__version__ = "0.1.0"

__all__ = [
    "CellNetwork",
    "ConstraintSet",
    "ConverseCheck",
    "ConverseReport",
    "Cycle",
    "CycleBound",
    "EmptyRegionError",
    "GdofPoint",
    "GridTooLargeError",
    "IBC",
    "IMAC",
    "LinearConstraint",
    "MembershipReport",
    "NetworkFormatError",
    "NotCanonicalError",
    "PointCloud",
    "PowerAllocation",
    "RegimeReport",
    "SingleCell",
    "UserId",
    "Violation",
    "CTIN_CROSS",
    "CTIN_INTRA",
    "TIN_CROSS",
    "TIN_INTRA",
    "recompute_violation",
    "as_rational",
    "build_constraints",
    "canonicalize",
    "check_duality",
    "check_inclusion",
    "check_support_match",
    "cloud_to_csv",
    "cycle_count",
    "default_directions",
    "default_floor",
    "enumerate_cycles",
    "ibc_gdof",
    "imac_gdof",
    "is_ctin",
    "is_member",
    "is_tin",
    "max_weighted",
    "parse_network",
    "predecessor",
    "successor",
    "rank_tuples",
    "sample_region",
    "serialize_network",
    "sum_gdof",
    "symmetric_two_cell",
    "verify_converse_steps",
]
