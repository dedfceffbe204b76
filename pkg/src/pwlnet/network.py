"""Feedforward network model: parsing, exact evaluation, random generation.

A network here is fully connected, takes inputs from [0,1]^n, applies
ReLU (max(0, t)) in every hidden layer and the clamp to [0,1]
(max(0, min(1, t))) in the output layer. Evaluation is exact rational
arithmetic; it is the ground truth the compiled region form is checked
against.

Interchange format (line oriented, '#' comments and blank lines ignored):

    2 2 1            <- layer sizes, inputs first
    4/3 -1 0         <- layer 1, node 1: coefficients then bias
    1 -1 1/2         <- layer 1, node 2
    1 1 1/2          <- layer 2, node 1

Tokens are decimals or "a/b" fractions; serialization writes "a/b", so a
parse/serialize round trip is bit-exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, DomainError, ParseError
from .rationals import AffineFunc, format_rational, parse_rational

_RELU_MIN = Fraction(0)
_TID_MAX = Fraction(1)


def relu(value: Fraction) -> Fraction:
    return value if value > 0 else _RELU_MIN


def truncated_identity(value: Fraction) -> Fraction:
    if value < 0:
        return _RELU_MIN
    if value > 1:
        return _TID_MAX
    return value


@dataclass(frozen=True)
class Network:
    """Layered model; layers[i] holds the affine functions of layer i+1."""

    layers: tuple[tuple[AffineFunc, ...], ...]

    def __post_init__(self) -> None:
        if not self.layers or any(not layer for layer in self.layers):
            raise DimensionError("network needs at least one nonempty layer")
        prev = self.layers[0][0].arity
        if prev < 1:
            raise DimensionError("network needs at least one input")
        for depth, layer in enumerate(self.layers, start=1):
            for func in layer:
                if func.arity != prev:
                    raise DimensionError(
                        f"layer {depth} function arity {func.arity}, expected {prev}"
                    )
            prev = len(layer)

    @property
    def input_dim(self) -> int:
        return self.layers[0][0].arity

    @property
    def output_dim(self) -> int:
        return len(self.layers[-1])

    @property
    def depth(self) -> int:
        """Number of computing layers (hidden layers plus the output layer)."""
        return len(self.layers)

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.input_dim,) + tuple(len(layer) for layer in self.layers)

    def _check_input(self, x: Sequence[Fraction]) -> None:
        if len(x) != self.input_dim:
            raise DimensionError(
                f"network expects {self.input_dim} inputs, got {len(x)}"
            )
        for v in x:
            if v < 0 or v > 1:
                raise DomainError(f"input coordinate {v} outside [0,1]")

    def forward_trace(self, x: Sequence[Fraction]) -> list[tuple[Fraction, ...]]:
        """Post-activation outputs of every layer, last entry the network output."""
        self._check_input(x)
        current: tuple[Fraction, ...] = tuple(x)
        trace = []
        last = self.depth - 1
        for i, layer in enumerate(self.layers):
            activation = truncated_identity if i == last else relu
            current = tuple(activation(func(current)) for func in layer)
            trace.append(current)
        return trace

    def forward(self, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return self.forward_trace(x)[-1]


def parse_network(text: str) -> Network:
    """Parse the interchange format; raises ParseError on malformed input."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, stripped))
    if not lines:
        raise ParseError("empty network document")
    header_lineno, header = lines[0]
    try:
        sizes = [int(tok) for tok in header.split()]
    except ValueError:
        raise ParseError(f"line {header_lineno}: layer sizes must be integers") from None
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise ParseError(f"line {header_lineno}: need at least two positive layer sizes")
    node_lines = lines[1:]
    expected = sum(sizes[1:])
    if len(node_lines) != expected:
        raise ParseError(
            f"expected {expected} node lines for layer sizes {sizes}, got {len(node_lines)}"
        )
    layers = []
    cursor = 0
    for depth in range(1, len(sizes)):
        fan_in = sizes[depth - 1]
        nodes = []
        for j in range(sizes[depth]):
            lineno, line = node_lines[cursor]
            cursor += 1
            tokens = line.split()
            if len(tokens) != fan_in + 1:
                raise ParseError(
                    f"line {lineno}: layer {depth} node {j + 1} needs "
                    f"{fan_in} coefficients plus a bias, got {len(tokens)} tokens"
                )
            values = [parse_rational(tok) for tok in tokens]
            nodes.append(AffineFunc(values[-1], tuple(values[:-1])))
        layers.append(tuple(nodes))
    return Network(tuple(layers))


def serialize_network(net: Network) -> str:
    out = [" ".join(str(s) for s in net.layer_sizes)]
    for layer in net.layers:
        for func in layer:
            tokens = [format_rational(c) for c in func.coeffs]
            tokens.append(format_rational(func.bias))
            out.append(" ".join(tokens))
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class GeneratorConfig:
    """Random model: every weight and bias is i + k/grid with i uniform in
    {-1, 0, 1} and k uniform in {0, ..., grid-1}."""

    inputs: int
    hidden_layers: int
    hidden_width: int
    outputs: int
    seed: int
    grid: int = 2**16

    def __post_init__(self) -> None:
        if min(self.inputs, self.hidden_layers, self.hidden_width, self.outputs) < 1:
            raise DomainError("all generator counts must be at least 1")
        if self.grid < 2:
            raise DomainError("generator grid must be at least 2")

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (
            (self.inputs,)
            + (self.hidden_width,) * self.hidden_layers
            + (self.outputs,)
        )


def generate(cfg: GeneratorConfig) -> Network:
    """Deterministic for a fixed config; weights drawn node by node,
    coefficients before the bias."""
    rng = random.Random(cfg.seed)

    def draw() -> Fraction:
        integer = rng.randrange(-1, 2)
        return integer + Fraction(rng.randrange(cfg.grid), cfg.grid)

    sizes = cfg.layer_sizes
    layers = []
    for depth in range(1, len(sizes)):
        fan_in = sizes[depth - 1]
        nodes = []
        for _ in range(sizes[depth]):
            coeffs = tuple(draw() for _ in range(fan_in))
            nodes.append(AffineFunc(draw(), coeffs))
        layers.append(tuple(nodes))
    return Network(tuple(layers))
