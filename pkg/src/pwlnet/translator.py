"""Compile a network into explicit (piece, region) pairs.

The compiler walks the tree of branch-sign assignments: each hidden node
either outputs 0 (its pre-activation is <= 0 on the branch) or passes its
affine value through (>= 0), and the output clamp contributes the three
cases 0 / pass-through / 1. A branch accumulates the defining half-spaces
into the region and substitutes the chosen behavior into the running
composition, so by the output layer the pair is fully determined.

Two independent accelerations:

  * prune_empty        - drop a branch as soon as its region has no points
                         (exact LP feasibility), and drop empty output
                         cases instead of emitting them.
  * classify_hyperplanes - per branch, bound each hidden node's composed
                         pre-activation over the whole input cube with a
                         pair of LPs; when one sign cannot occur, do not
                         enumerate it.

With both off, the output is the full enumeration: 3 * outputs *
2^(hidden node count) pairs, empty regions included (flagged). Output
order is canonical (sorted by symbol trace) whether or not branches were
explored in parallel.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lp import Relation
from .network import Network
from .polyhedra import HalfSpace, Polyhedron, unit_cube
from .rationals import AffineFunc
from .regional import (
    HIDDEN_SYMBOLS,
    RegionPiece,
    RegionalRepresentation,
    Symbol,
    SymbolTrace,
)


@dataclass(frozen=True)
class TranslationOptions:
    prune_empty: bool = True
    classify_hyperplanes: bool = True
    parallel: bool = False
    max_workers: int | None = None


@dataclass(frozen=True)
class NodeClassification:
    """Signs a hidden node can take over the input cube, with the LP bounds."""

    symbols: tuple[Symbol, ...]
    minimum: Fraction
    maximum: Fraction


def classify_node(func: AffineFunc) -> NodeClassification:
    """Bound func over the cube and keep only the signs that can occur.

    A sign is dropped only when its half-space misses the cube outright
    (strict bound), never when the zero hyperplane merely touches the
    boundary: a touching branch still owns a nonempty face of the cube,
    and dropping it would change the set of nonempty pairs the compiler
    emits. The identically-zero function is the one exception: both of
    its branches are the same set, so it keeps the >= sign alone and the
    surviving branch carries the composed function.
    """
    cube = unit_cube(func.arity)
    minimum = cube.minimize(func).optimum
    maximum = cube.maximize(func).optimum
    if minimum == 0 and maximum == 0:
        symbols: tuple[Symbol, ...] = (Symbol.GE,)
    elif minimum > 0:
        symbols = (Symbol.GE,)
    elif maximum < 0:
        symbols = (Symbol.LE,)
    else:
        symbols = HIDDEN_SYMBOLS
    return NodeClassification(symbols, minimum, maximum)


def classify_layer(funcs: Sequence[AffineFunc]) -> list[NodeClassification]:
    """Classification of one layer's composed node functions."""
    return [classify_node(f) for f in funcs]


def expand_layer(
    net: Network,
    layer_idx: int,
    region: Polyhedron,
    funcs: tuple[AffineFunc, ...],
    hidden_trace: tuple[tuple[Symbol, ...], ...],
    options: TranslationOptions,
    sinks: list[list[RegionPiece]],
) -> None:
    """Recursive branch expansion; appends finished pairs into `sinks`.

    Precondition: for x in `region`, `funcs` evaluates to the outputs of
    the layers below `layer_idx`.
    """
    dim = net.input_dim
    if layer_idx == net.depth - 1:
        for k, node in enumerate(net.layers[layer_idx]):
            composed = node.compose(funcs)
            cases = (
                (Symbol.LE, (HalfSpace(composed, Relation.LE),), AffineFunc.zero(dim)),
                (
                    Symbol.BETWEEN,
                    (
                        HalfSpace(composed, Relation.GE),
                        HalfSpace(composed.shift(-1), Relation.LE),
                    ),
                    composed,
                ),
                (Symbol.GE, (HalfSpace(composed.shift(-1), Relation.GE),), AffineFunc.one(dim)),
            )
            for case, halfspaces, piece in cases:
                candidate = region.extend(halfspaces)
                if options.prune_empty:
                    if candidate.is_empty():
                        continue
                    empty = False
                else:
                    empty = candidate.is_empty()
                sinks[k].append(
                    RegionPiece(piece, candidate, SymbolTrace(hidden_trace, case), empty)
                )
        return

    layer = net.layers[layer_idx]
    composed = [node.compose(funcs) for node in layer]
    if options.classify_hyperplanes:
        choices: list[tuple[Symbol, ...]] = [classify_node(g).symbols for g in composed]
    else:
        choices = [HIDDEN_SYMBOLS] * len(layer)
    zero = AffineFunc.zero(dim)
    for assignment in itertools.product(*choices):
        halfspaces = [
            HalfSpace(g, Relation.GE if sym is Symbol.GE else Relation.LE)
            for g, sym in zip(composed, assignment)
        ]
        branch_region = region.extend(halfspaces)
        if options.prune_empty and branch_region.is_empty():
            continue
        branch_funcs = tuple(
            g if sym is Symbol.GE else zero for g, sym in zip(composed, assignment)
        )
        expand_layer(
            net,
            layer_idx + 1,
            branch_region,
            branch_funcs,
            hidden_trace + (assignment,),
            options,
            sinks,
        )


def _sorted_outputs(sinks: list[list[RegionPiece]]) -> tuple[tuple[RegionPiece, ...], ...]:
    return tuple(
        tuple(sorted(pairs, key=lambda p: p.trace.sort_key())) for pairs in sinks
    )


def translate(
    net: Network, options: TranslationOptions = TranslationOptions()
) -> RegionalRepresentation:
    """Compile `net`; each output node gets its own pair list."""
    dim = net.input_dim
    base = unit_cube(dim)
    projections = tuple(AffineFunc.projection(i, dim) for i in range(dim))
    sinks: list[list[RegionPiece]] = [[] for _ in range(net.output_dim)]

    if options.parallel and net.depth > 1:
        layer = net.layers[0]
        composed = list(projections_apply(layer, projections))
        if options.classify_hyperplanes:
            choices: list[tuple[Symbol, ...]] = [
                classify_node(g).symbols for g in composed
            ]
        else:
            choices = [HIDDEN_SYMBOLS] * len(layer)
        zero = AffineFunc.zero(dim)
        tasks = []
        for assignment in itertools.product(*choices):
            halfspaces = [
                HalfSpace(g, Relation.GE if sym is Symbol.GE else Relation.LE)
                for g, sym in zip(composed, assignment)
            ]
            branch_region = base.extend(halfspaces)
            branch_funcs = tuple(
                g if sym is Symbol.GE else zero for g, sym in zip(composed, assignment)
            )
            tasks.append((branch_region, branch_funcs, (tuple(assignment),)))

        def run(task):
            branch_region, branch_funcs, trace = task
            local: list[list[RegionPiece]] = [[] for _ in range(net.output_dim)]
            if not (options.prune_empty and branch_region.is_empty()):
                expand_layer(net, 1, branch_region, branch_funcs, trace, options, local)
            return local

        with ThreadPoolExecutor(max_workers=options.max_workers) as pool:
            for local in pool.map(run, tasks):
                for k in range(net.output_dim):
                    sinks[k].extend(local[k])
    else:
        expand_layer(net, 0, base, projections, (), options, sinks)

    return RegionalRepresentation(
        dim, _sorted_outputs(sinks), options.prune_empty, options.classify_hyperplanes
    )


def projections_apply(
    layer: Sequence[AffineFunc], projections: tuple[AffineFunc, ...]
) -> list[AffineFunc]:
    """Compose a first layer with the projections (an identity composition)."""
    return [node.compose(projections) for node in layer]


def full_pair_count(net: Network) -> int:
    """Pairs the unaccelerated enumeration emits: 3*outputs*2^(hidden nodes)."""
    hidden = sum(len(layer) for layer in net.layers[:-1])
    return 3 * net.output_dim * 2**hidden
