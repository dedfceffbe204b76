"""Dominance audit and min/max form of a compiled region encoding.

A piece p is "above" q over a region when p - q is nonnegative there,
decided exactly by minimizing p - q over the region. An encoding admits
the min/max evaluation form

    f(x) = max_j min_{k in K_j} p_k(x),   K_j = {k : p_k above p_j over region j}

exactly when every ordered pair of regions (i, j) has some piece k that is
below p_i on region i and above p_j on region j. The audit counts the
ordered pairs where no such k exists; zero means the form is valid.

Auditing an m-pair encoding needs on the order of m^2 minimizations, so
the audit keeps per-region witness points and rejects most "above" queries
by evaluating the difference at a few known points before paying for an
LP (a negative value at any point of the region is an exact refutation).

`repair_split` drives the count to zero by splitting the second region of
a violating pair along the difference of its piece with the first pair's
piece. Splitting never changes the encoded function: each half keeps the
parent's piece. Termination is not guaranteed in general, hence the
iteration cap, and a pair whose split hyperplane does not pass through
both open sides of the region is skipped as unproductive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import EmptyRegionError, LatticeError
from .lp import Relation
from .polyhedra import HalfSpace, Polyhedron
from .rationals import AffineFunc, Point, format_rational
from .regional import RegionPiece

AUDIT_FORMAT = "pwlnet-lattice-audit-v1"
LATTICE_FORMAT = "pwlnet-lattice-representation-v1"


@dataclass(frozen=True)
class AboveCertificate:
    """Exact minimum of p - q over the region, and the verdict it implies."""

    minimum: Fraction

    @property
    def holds(self) -> bool:
        return self.minimum >= 0


def is_above(p: AffineFunc, q: AffineFunc, region: Polyhedron) -> AboveCertificate:
    """Decide whether p >= q everywhere on `region` (which must be nonempty)."""
    if region.is_empty():
        raise EmptyRegionError("'above' is undefined over an empty region")
    outcome = region.minimize(p - q)
    return AboveCertificate(outcome.optimum)


class _RegionOracle:
    """Nonnegativity checks of affine functions over one fixed region."""

    def __init__(self, region: Polyhedron) -> None:
        if region.is_empty():
            raise EmptyRegionError("audit requires nonempty regions")
        self.region = region
        witness = region.witness()
        self._samples: list[Point] = [witness]
        self._sample_set = {witness}

    def add_sample(self, point: Point) -> None:
        if point not in self._sample_set:
            self._sample_set.add(point)
            self._samples.append(point)

    def nonnegative(self, func: AffineFunc) -> bool:
        """True iff func >= 0 on the whole region."""
        for s in self._samples:
            if func(s) < 0:
                return False
        outcome = self.region.minimize(func)
        self.add_sample(outcome.witness)
        return outcome.optimum >= 0


@dataclass(frozen=True)
class LatticeAudit:
    """Result of the pairwise dominance scan over one output's encoding."""

    size: int
    above_matrix: tuple[tuple[bool, ...], ...]  # [a][b]: p_a above p_b over region b
    violating_pairs: tuple[tuple[int, int], ...]

    @property
    def violation_count(self) -> int:
        return len(self.violating_pairs)

    @property
    def unordered_violation_count(self) -> int:
        return len({frozenset(pair) for pair in self.violating_pairs})

    @property
    def satisfies_lattice_property(self) -> bool:
        return not self.violating_pairs

    def k_sets(self) -> tuple[tuple[int, ...], ...]:
        """K_j = indices of pieces above p_j over region j (always contains j)."""
        return tuple(
            tuple(k for k in range(self.size) if self.above_matrix[k][j])
            for j in range(self.size)
        )


def audit(pairs: Sequence[RegionPiece]) -> LatticeAudit:
    """Scan every ordered region pair for the dominance witness k."""
    m = len(pairs)
    oracles = [_RegionOracle(pair.region) for pair in pairs]
    pieces = [pair.piece for pair in pairs]

    above = [[False] * m for _ in range(m)]
    for b in range(m):
        oracle = oracles[b]
        for a in range(m):
            above[a][b] = True if a == b else oracle.nonnegative(pieces[a] - pieces[b])
    k_sets = [[k for k in range(m) if above[k][j]] for j in range(m)]

    own: dict[tuple[int, int], bool] = {}

    def above_over_own(i: int, k: int) -> bool:
        # p_i above p_k over region i
        if i == k:
            return True
        key = (i, k)
        if key not in own:
            own[key] = oracles[i].nonnegative(pieces[i] - pieces[k])
        return own[key]

    violating = []
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if not any(above_over_own(i, k) for k in k_sets[j]):
                violating.append((i, j))

    return LatticeAudit(
        m,
        tuple(tuple(row) for row in above),
        tuple(violating),
    )


@dataclass(frozen=True)
class LatticeRepresentation:
    """The K-sets of a property-satisfying encoding."""

    k_sets: tuple[tuple[int, ...], ...]


def build_lattice(
    pairs: Sequence[RegionPiece], audit_result: LatticeAudit | None = None
) -> LatticeRepresentation:
    """K-sets from the audit matrix; refuses encodings that violate the property."""
    if audit_result is None:
        audit_result = audit(pairs)
    if audit_result.violation_count:
        raise LatticeError(
            f"{audit_result.violation_count} region pairs violate the lattice "
            "property; the min/max form would not reproduce the function"
        )
    return LatticeRepresentation(audit_result.k_sets())


def eval_lattice(
    rep: LatticeRepresentation, pieces: Sequence[AffineFunc], x: Sequence[Fraction]
) -> Fraction:
    """max over regions of the min over that region's K-set, exactly."""
    best: Fraction | None = None
    for k_set in rep.k_sets:
        inner: Fraction | None = None
        for k in k_set:
            value = pieces[k](x)
            if inner is None or value < inner:
                inner = value
        if best is None or inner > best:
            best = inner
    if best is None:
        raise LatticeError("lattice representation has no regions")
    return best


@dataclass(frozen=True)
class RepairReport:
    iterations: int
    final_violation_count: int
    stalled: bool = False

    @property
    def clean(self) -> bool:
        return self.final_violation_count == 0


def _crosses(region: Polyhedron, func: AffineFunc) -> bool:
    """True when func takes both strictly negative and positive values on region."""
    if region.minimize(func).optimum >= 0:
        return False
    return region.maximize(func).optimum > 0


def repair_split(
    pairs: Sequence[RegionPiece], max_iterations: int = 1000
) -> tuple[tuple[RegionPiece, ...], RepairReport]:
    """Split regions until the lattice property holds or the cap is reached.

    For the first violating pair (i, j) whose difference p_j - p_i actually
    crosses region j, that region is replaced by its two closed halves, each
    keeping piece p_j (so the encoded function is unchanged). Pairs whose
    split would not subdivide anything are skipped; if no pair is
    splittable the repair stops early and reports the remaining count.
    """
    current = list(pairs)
    iterations = 0
    while True:
        result = audit(current)
        if result.violation_count == 0:
            return tuple(current), RepairReport(iterations, 0)
        if iterations >= max_iterations:
            return tuple(current), RepairReport(iterations, result.violation_count)
        split_done = False
        for i, j in result.violating_pairs:
            diff = current[j].piece - current[i].piece
            if not _crosses(current[j].region, diff):
                continue
            parent = current[j]
            halves = []
            for relation in (Relation.GE, Relation.LE):
                half = parent.region.extend([HalfSpace(diff, relation)])
                if not half.is_empty():
                    halves.append(
                        RegionPiece(parent.piece, half, parent.trace, False)
                    )
            current[j : j + 1] = halves
            iterations += 1
            split_done = True
            break
        if not split_done:
            return tuple(current), RepairReport(
                iterations, result.violation_count, stalled=True
            )


def audit_document(
    audit_result: LatticeAudit, include_matrix: bool = True
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format": AUDIT_FORMAT,
        "region_count": audit_result.size,
        "violation_count": audit_result.violation_count,
        "violating_pairs": [list(p) for p in audit_result.violating_pairs],
        "violating_pairs_unordered": audit_result.unordered_violation_count,
        "satisfies_lattice_property": audit_result.satisfies_lattice_property,
    }
    if include_matrix:
        doc["above_matrix"] = [list(row) for row in audit_result.above_matrix]
    return doc


def lattice_document(
    rep: LatticeRepresentation, pieces: Sequence[AffineFunc]
) -> dict[str, Any]:
    return {
        "format": LATTICE_FORMAT,
        "pieces": [
            {
                "bias": format_rational(p.bias),
                "coeffs": [format_rational(c) for c in p.coeffs],
            }
            for p in pieces
        ],
        "k_sets": [list(ks) for ks in rep.k_sets],
    }
