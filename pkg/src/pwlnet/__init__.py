"""pwlnet: exact region-form compilation of ReLU networks with clamped outputs.

The core objects are exact rational affine functions and half-space
regions; the compiler turns a network into explicit (piece, region)
pairs covering the input cube, the lattice module audits and repairs the
dominance property that enables the min/max evaluation form, and the
experiments module measures region counts over seeded random populations.
"""

__version__ = "0.1.0"

from .errors import (
    DimensionError,
    DomainError,
    EmptyRegionError,
    InternalCheckError,
    LatticeError,
    ParseError,
    PwlnetError,
)
from .lattice import (
    AboveCertificate,
    LatticeAudit,
    LatticeRepresentation,
    RepairReport,
    audit,
    build_lattice,
    eval_lattice,
    is_above,
    repair_split,
)
from .lp import LinearProgram, LpOutcome, LpStatus, Relation, Sense, is_feasible, solve
from .network import (
    GeneratorConfig,
    Network,
    generate,
    parse_network,
    serialize_network,
)
from .polyhedra import HalfSpace, Polyhedron, unit_cube
from .rationals import (
    AffineFunc,
    Point,
    Rational,
    format_decimal,
    format_rational,
    parse_point,
    parse_rational,
)
from .regional import (
    RegionalRepresentation,
    RegionPiece,
    Symbol,
    SymbolTrace,
    evaluate_regional,
    from_document,
    parse_regional,
    serialize_regional,
    to_document,
)
from .translator import (
    NodeClassification,
    TranslationOptions,
    classify_layer,
    classify_node,
    expand_layer,
    full_pair_count,
    translate,
)

__all__ = [
    "AboveCertificate",
    "AffineFunc",
    "DimensionError",
    "DomainError",
    "EmptyRegionError",
    "GeneratorConfig",
    "HalfSpace",
    "InternalCheckError",
    "LatticeAudit",
    "LatticeError",
    "LatticeRepresentation",
    "LinearProgram",
    "LpOutcome",
    "LpStatus",
    "Network",
    "NodeClassification",
    "ParseError",
    "Point",
    "Polyhedron",
    "PwlnetError",
    "Rational",
    "RegionPiece",
    "RegionalRepresentation",
    "Relation",
    "RepairReport",
    "Sense",
    "Symbol",
    "SymbolTrace",
    "TranslationOptions",
    "audit",
    "build_lattice",
    "classify_layer",
    "classify_node",
    "eval_lattice",
    "evaluate_regional",
    "expand_layer",
    "format_decimal",
    "format_rational",
    "from_document",
    "full_pair_count",
    "generate",
    "is_above",
    "is_feasible",
    "parse_network",
    "parse_point",
    "parse_rational",
    "parse_regional",
    "repair_split",
    "serialize_network",
    "serialize_regional",
    "solve",
    "to_document",
    "translate",
    "unit_cube",
]
