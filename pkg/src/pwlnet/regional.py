"""The compiled region form: pieces, regions, traces, and its JSON document.

One compiled output is a list of (piece, region) pairs: the piece is the
affine function the network computes on that region. Every pair carries
the symbol trace that produced it: one branch sign per hidden node (which
side of the node's zero hyperplane) and one output case among "<=" (the
clamp pins the value to 0), "<>" (the affine value passes through) and
">=" (pinned to 1). Traces give each pair a canonical position, so
documents are diffable across runs.

All rationals in documents are exact "a/b" strings; parse and serialize
round trip bit-exactly.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import DimensionError, DomainError, InternalCheckError, ParseError
from .lp import Relation
from .polyhedra import HalfSpace, Polyhedron
from .rationals import AffineFunc, format_rational, parse_rational

DOCUMENT_FORMAT = "pwlnet-regional-v1"


class Symbol(enum.Enum):
    LE = "<="
    BETWEEN = "<>"
    GE = ">="

    @property
    def rank(self) -> int:
        return _SYMBOL_RANK[self]

    @classmethod
    def parse(cls, token: str) -> "Symbol":
        try:
            return cls(token)
        except ValueError:
            raise ParseError(f"unknown symbol token {token!r}") from None


_SYMBOL_RANK = {Symbol.LE: 0, Symbol.BETWEEN: 1, Symbol.GE: 2}
HIDDEN_SYMBOLS = (Symbol.LE, Symbol.GE)
OUTPUT_SYMBOLS = (Symbol.LE, Symbol.BETWEEN, Symbol.GE)


@dataclass(frozen=True)
class SymbolTrace:
    """Per-hidden-layer branch signs plus the output case."""

    hidden: tuple[tuple[Symbol, ...], ...]
    output: Symbol

    def __post_init__(self) -> None:
        for layer in self.hidden:
            for sym in layer:
                if sym is Symbol.BETWEEN:
                    raise DomainError("hidden trace symbols are <= or >= only")

    def sort_key(self) -> tuple[int, ...]:
        flat = [sym.rank for layer in self.hidden for sym in layer]
        flat.append(self.output.rank)
        return tuple(flat)


@dataclass(frozen=True)
class RegionPiece:
    piece: AffineFunc
    region: Polyhedron
    trace: SymbolTrace
    region_empty: bool = False

    def __post_init__(self) -> None:
        if self.piece.arity != self.region.dim:
            raise DimensionError("piece arity differs from region dimension")


@dataclass(frozen=True)
class RegionalRepresentation:
    """One pair list per output node, plus the flags it was compiled with."""

    input_dim: int
    outputs: tuple[tuple[RegionPiece, ...], ...]
    prune_empty: bool = True
    classify_hyperplanes: bool = True

    @property
    def output_count(self) -> int:
        return len(self.outputs)

    def pair_counts(self) -> list[int]:
        return [len(pairs) for pairs in self.outputs]

    def nonempty_counts(self) -> list[int]:
        return [sum(1 for p in pairs if not p.region_empty) for pairs in self.outputs]


def evaluate_regional(
    rep: RegionalRepresentation, x: Sequence[Fraction]
) -> tuple[Fraction, ...]:
    """Evaluate via the region form: pick a pair whose region contains x.

    All containing pairs must agree on the value (they do for anything the
    compiler emits); disagreement or a hole in the coverage means the
    document is inconsistent and raises InternalCheckError.
    """
    if len(x) != rep.input_dim:
        raise DimensionError(
            f"point of length {len(x)} against input dimension {rep.input_dim}"
        )
    for v in x:
        if v < 0 or v > 1:
            raise DomainError(f"input coordinate {v} outside [0,1]")
    results = []
    for k, pairs in enumerate(rep.outputs):
        value: Fraction | None = None
        for pair in pairs:
            if pair.region_empty or not pair.region.contains(x):
                continue
            candidate = pair.piece(x)
            if value is None:
                value = candidate
            elif candidate != value:
                raise InternalCheckError(
                    f"output {k}: overlapping regions disagree at {x}: "
                    f"{value} vs {candidate}"
                )
        if value is None:
            raise InternalCheckError(f"output {k}: no region contains {x}")
        results.append(value)
    return tuple(results)


def _affine_payload(func: AffineFunc) -> dict[str, Any]:
    return {
        "bias": format_rational(func.bias),
        "coeffs": [format_rational(c) for c in func.coeffs],
    }


def _affine_from(payload: dict[str, Any]) -> AffineFunc:
    try:
        bias = parse_rational(payload["bias"])
        coeffs = tuple(parse_rational(c) for c in payload["coeffs"])
    except (KeyError, TypeError):
        raise ParseError(f"malformed affine payload: {payload!r}") from None
    return AffineFunc(bias, coeffs)


def _halfspace_payload(hs: HalfSpace) -> dict[str, Any]:
    return {
        "coeffs": [format_rational(c) for c in hs.func.coeffs],
        "bias": format_rational(hs.func.bias),
        "relation": hs.relation.value,
    }


def _halfspace_from(payload: dict[str, Any]) -> HalfSpace:
    try:
        func = AffineFunc(
            parse_rational(payload["bias"]),
            tuple(parse_rational(c) for c in payload["coeffs"]),
        )
        relation = Relation(payload["relation"])
    except (KeyError, TypeError, ValueError):
        raise ParseError(f"malformed half-space payload: {payload!r}") from None
    if relation is Relation.EQ:
        raise ParseError("regions use inequality half-spaces only")
    return HalfSpace(func, relation)


def _trace_payload(trace: SymbolTrace) -> dict[str, Any]:
    return {
        "hidden": [[sym.value for sym in layer] for layer in trace.hidden],
        "output": trace.output.value,
    }


def _trace_from(payload: dict[str, Any]) -> SymbolTrace:
    try:
        hidden = tuple(
            tuple(Symbol.parse(tok) for tok in layer) for layer in payload["hidden"]
        )
        output = Symbol.parse(payload["output"])
    except (KeyError, TypeError):
        raise ParseError(f"malformed trace payload: {payload!r}") from None
    return SymbolTrace(hidden, output)


def to_document(rep: RegionalRepresentation) -> dict[str, Any]:
    return {
        "format": DOCUMENT_FORMAT,
        "input_dim": rep.input_dim,
        "output_count": rep.output_count,
        "prune_empty": rep.prune_empty,
        "classify_hyperplanes": rep.classify_hyperplanes,
        "outputs": [
            {
                "pairs": [
                    {
                        "piece": _affine_payload(pair.piece),
                        "region": [
                            _halfspace_payload(hs) for hs in pair.region.halfspaces
                        ],
                        "symbol_trace": _trace_payload(pair.trace),
                        "region_empty": pair.region_empty,
                    }
                    for pair in pairs
                ]
            }
            for pairs in rep.outputs
        ],
    }


def from_document(doc: dict[str, Any]) -> RegionalRepresentation:
    if not isinstance(doc, dict) or doc.get("format") != DOCUMENT_FORMAT:
        raise ParseError(f"not a {DOCUMENT_FORMAT} document")
    try:
        input_dim = int(doc["input_dim"])
        outputs_payload = doc["outputs"]
        prune_empty = bool(doc["prune_empty"])
        classify = bool(doc["classify_hyperplanes"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("regional document missing required fields") from None
    outputs = []
    for entry in outputs_payload:
        pairs = []
        for item in entry["pairs"]:
            piece = _affine_from(item["piece"])
            region = Polyhedron(
                input_dim, [_halfspace_from(h) for h in item["region"]]
            )
            trace = _trace_from(item["symbol_trace"])
            pairs.append(
                RegionPiece(piece, region, trace, bool(item.get("region_empty", False)))
            )
        outputs.append(tuple(pairs))
    rep = RegionalRepresentation(input_dim, tuple(outputs), prune_empty, classify)
    if int(doc["output_count"]) != rep.output_count:
        raise ParseError("output_count disagrees with the number of output entries")
    return rep


def serialize_regional(rep: RegionalRepresentation) -> str:
    return json.dumps(to_document(rep), indent=1) + "\n"


def parse_regional(text: str) -> RegionalRepresentation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return from_document(doc)
