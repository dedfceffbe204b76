"""Pydantic request/response models for the HTTP service.

Rationals travel as exact "a/b" strings; the wire format of a regional
representation is byte-compatible with the JSON document the library
reads and writes, so clients can save a response body straight to disk.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..network import Network
from ..rationals import AffineFunc, format_rational, parse_rational
from ..regional import DOCUMENT_FORMAT


class AffinePayload(BaseModel):
    bias: str
    coeffs: list[str]

    @classmethod
    def from_core(cls, func: AffineFunc) -> "AffinePayload":
        return cls(
            bias=format_rational(func.bias),
            coeffs=[format_rational(c) for c in func.coeffs],
        )

    def to_core(self) -> AffineFunc:
        return AffineFunc(
            parse_rational(self.bias), tuple(parse_rational(c) for c in self.coeffs)
        )


class NetworkPayload(BaseModel):
    layer_sizes: list[int]
    layers: list[list[AffinePayload]]

    @classmethod
    def from_core(cls, net: Network) -> "NetworkPayload":
        return cls(
            layer_sizes=list(net.layer_sizes),
            layers=[[AffinePayload.from_core(f) for f in layer] for layer in net.layers],
        )

    def to_core(self) -> Network:
        return Network(
            tuple(tuple(f.to_core() for f in layer) for layer in self.layers)
        )


class HalfSpacePayload(BaseModel):
    coeffs: list[str]
    bias: str
    relation: Literal[">=0", "<=0"]


class TracePayload(BaseModel):
    hidden: list[list[str]]
    output: str


class PairPayload(BaseModel):
    piece: AffinePayload
    region: list[HalfSpacePayload]
    symbol_trace: TracePayload
    region_empty: bool = False


class OutputPairsPayload(BaseModel):
    pairs: list[PairPayload]


class RegionalPayload(BaseModel):
    format: str = DOCUMENT_FORMAT
    input_dim: int
    output_count: int
    prune_empty: bool
    classify_hyperplanes: bool
    outputs: list[OutputPairsPayload]


class TranslateRequest(BaseModel):
    network: NetworkPayload
    prune_empty: bool = True
    classify_hyperplanes: bool = True
    parallel: bool = False


class TranslateResponse(BaseModel):
    regional: RegionalPayload
    pair_counts: list[int]
    nonempty_counts: list[int]


class EvalNetworkRequest(BaseModel):
    network: NetworkPayload
    point: list[str]


class EvalNetworkResponse(BaseModel):
    outputs: list[str]
    layers: list[list[str]] = Field(
        default_factory=list, description="post-activation values, layer by layer"
    )


class EvalRegionalRequest(BaseModel):
    regional: RegionalPayload
    point: list[str]


class EvalRegionalResponse(BaseModel):
    outputs: list[str]


class GenerateRequest(BaseModel):
    inputs: int
    hidden_layers: int
    hidden_width: int
    outputs: int
    seed: int
    grid: int = 2**16


class GenerateResponse(BaseModel):
    network: NetworkPayload
    text: str


class StatsRequest(BaseModel):
    regional: RegionalPayload


class StatsResponse(BaseModel):
    input_dim: int
    output_count: int
    pair_counts: list[int]
    nonempty_counts: list[int]


class AuditPayload(BaseModel):
    region_count: int
    violation_count: int
    violating_pairs: list[list[int]]
    violating_pairs_unordered: int
    satisfies_lattice_property: bool
    above_matrix: Optional[list[list[bool]]] = None
    k_sets: Optional[list[list[int]]] = None


class RepairReportPayload(BaseModel):
    iterations: int
    final_violation_count: int
    stalled: bool


class LatticeCheckRequest(BaseModel):
    regional: RegionalPayload
    repair: bool = False
    max_iterations: int = 1000
    include_matrix: bool = True


class LatticeCheckResponse(BaseModel):
    outputs: list[AuditPayload]
    repair_reports: Optional[list[RepairReportPayload]] = None
    repaired: Optional[RegionalPayload] = None


class ExperimentRequest(BaseModel):
    mode: Literal["layers", "width"]
    fixed: int
    classes: int
    per_class: int
    seed: int
    grid: int = 2**16
    workers: int = 1


class ViolatorPayload(BaseModel):
    index: int
    seed: int
    regions: int
    violating_pairs: int
    violating_pairs_unordered: int


class ClassStatsPayload(BaseModel):
    mode: str
    fixed: int
    class_value: int
    region_counts: list[int]
    avg_regions: str
    max_regions: int
    min_regions: int
    violators: list[ViolatorPayload]


class ExperimentResponse(BaseModel):
    classes: list[ClassStatsPayload]
    classes_csv: str
    violators_csv: str
    plot_script: str


class HealthResponse(BaseModel):
    status: str
    version: str
