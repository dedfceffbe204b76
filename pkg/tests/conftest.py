"""Shared test fixtures: the worked two-node network and the two hand-built
piecewise encodings used by the lattice tests."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from pwlnet import (
    AffineFunc,
    HalfSpace,
    Network,
    RegionPiece,
    Relation,
    Symbol,
    SymbolTrace,
    parse_network,
    unit_cube,
)

EXAMPLE_NET_TEXT = """\
# two inputs, two hidden nodes, one output
2 2 1
4/3 -1 0
1 -1 1/2
1 1 1/2
"""

_TRACE = SymbolTrace((), Symbol.BETWEEN)


def _pair(piece: AffineFunc, region) -> RegionPiece:
    return RegionPiece(piece, region, _TRACE)


@pytest.fixture(scope="session")
def example_net() -> Network:
    return parse_network(EXAMPLE_NET_TEXT)


def build_hill_pairs() -> list[RegionPiece]:
    """One-variable, four segments: gentle rise, steep rise, fall, steep rise.

    Built so that adjacent pieces agree on the segment endpoints; the
    min/max property holds and the per-region min-sets are
    {p1,p3}, {p2,p3}, {p2,p3}, {p2,p4} (0-based: see test assertions).
    """
    cube = unit_cube(1)
    x = AffineFunc.projection(0, 1)

    def segment(lo: F, hi: F):
        return cube.extend(
            [HalfSpace(x.shift(-lo), Relation.GE), HalfSpace(x.shift(-hi), Relation.LE)]
        )

    p1 = AffineFunc(F(1, 4), (F(3, 10),))
    p2 = AffineFunc(F(1, 40), (F(6, 5),))
    p3 = AffineFunc(F(11, 8), (F(-3, 2),))
    p4 = AffineFunc(F(-13, 8), (F(5, 2),))
    bounds = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1)]
    return [
        _pair(p, segment(lo, hi))
        for p, lo, hi in zip([p1, p2, p3, p4], bounds, bounds[1:])
    ]


def build_crossing_pairs() -> list[RegionPiece]:
    """Two variables, five regions; pieces 3 and 5 cross each other's regions.

    The surface rises from 1/4 at x2=0 to 1 at x2=1; the left half
    (x2 <= 1/2) is one region, the right half is cut into four triangles.
    The projection of where piece 3 (= x1) meets piece 5 (= x2/2 + 1/4)
    passes through the interiors of regions 3 and 5, so the ordered pair
    (2, 4) in 0-based indexing violates the dominance property.
    """
    cube = unit_cube(2)
    x1 = AffineFunc.projection(0, 2)
    x2 = AffineFunc.projection(1, 2)
    ge, le = Relation.GE, Relation.LE
    half = F(1, 2)
    regions = [
        cube.extend([HalfSpace(x2.shift(-half), ge), HalfSpace((x1 + x2).shift(-1), le)]),
        cube.extend(
            [
                HalfSpace(x2.shift(-half), ge),
                HalfSpace((x1 + x2).shift(-1), ge),
                HalfSpace(x1.shift(-half), le),
            ]
        ),
        cube.extend([HalfSpace(x1.shift(-half), ge), HalfSpace(x2 - x1, ge)]),
        cube.extend([HalfSpace(x2.shift(-half), ge), HalfSpace(x1 - x2, ge)]),
        cube.extend([HalfSpace(x2.shift(-half), le)]),
    ]
    pieces = [
        x2,
        (-x1).shift(1),
        x1,
        x2,
        AffineFunc(F(1, 4), (F(0), F(1, 2))),
    ]
    return [_pair(p, r) for p, r in zip(pieces, regions)]


@pytest.fixture()
def hill_pairs() -> list[RegionPiece]:
    return build_hill_pairs()


@pytest.fixture()
def crossing_pairs() -> list[RegionPiece]:
    return build_crossing_pairs()
