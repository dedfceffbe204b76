"""Half-space systems over the unit cube.

A region is a finite intersection of closed half-spaces, each written as
f(x) >= 0 or f(x) <= 0 for an affine f. Regions keep their construction
order (the compiler appends one layer's inequalities after another, and
that history is worth preserving for auditability), but compare and hash
by a normalized multiset of inequalities: two regions are equal when they
list the same constraints, regardless of order, scaling, or orientation
of each inequality. Geometric equality of differently-presented regions
is deliberately not provided; nothing here needs it.

Polyhedra are immutable; `extend` returns a new object. Emptiness and the
phase-1 simplex basis are cached per instance, so repeated optimization
over one region is cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionError, DomainError
from .lp import LpOutcome, Relation, Sense, SimplexSolver
from .rationals import AffineFunc, Point


def _primitive(values: Iterable[Fraction]) -> tuple[int, ...]:
    """Scale rationals by a positive factor to a primitive integer tuple."""
    vals = tuple(values)
    denom = 1
    for v in vals:
        denom = lcm(denom, v.denominator)
    ints = [int(v * denom) for v in vals]
    g = 0
    for i in ints:
        g = gcd(g, i)
    if g > 1:
        ints = [i // g for i in ints]
    return tuple(ints)


@dataclass(frozen=True)
class HalfSpace:
    """The closed set {x : func(x) >= 0} (or <= 0 for Relation.LE)."""

    func: AffineFunc
    relation: Relation

    def __post_init__(self) -> None:
        if self.relation is Relation.EQ:
            raise DomainError("half-spaces are the two closed inequality forms only")

    @property
    def arity(self) -> int:
        return self.func.arity

    def holds_at(self, point: Sequence[Fraction], strict: bool = False) -> bool:
        return self.relation.holds(self.func(point), strict=strict)

    def normalized_key(self) -> tuple[int, ...]:
        """Orientation- and scale-independent identity of the inequality."""
        f = self.func if self.relation is Relation.GE else -self.func
        return _primitive((f.bias, *f.coeffs))

    def __str__(self) -> str:
        op = ">=" if self.relation is Relation.GE else "<="
        return f"{self.func} {op} 0"


class Polyhedron:
    """An ordered list of half-spaces of one arity, treated as their intersection."""

    __slots__ = ("dim", "halfspaces", "_key", "_solver", "_empty")

    def __init__(self, dim: int, halfspaces: Iterable[HalfSpace] = ()) -> None:
        if dim < 1:
            raise DimensionError("polyhedron dimension must be at least 1")
        self.dim = dim
        self.halfspaces: tuple[HalfSpace, ...] = tuple(halfspaces)
        for hs in self.halfspaces:
            if hs.arity != dim:
                raise DimensionError(
                    f"half-space arity {hs.arity} in {dim}-dimensional polyhedron"
                )
        self._key: tuple | None = None
        self._solver: SimplexSolver | None = None
        self._empty: bool | None = None

    def canonical_key(self) -> tuple:
        if self._key is None:
            self._key = (self.dim, tuple(sorted(hs.normalized_key() for hs in self.halfspaces)))
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    def __repr__(self) -> str:
        return f"Polyhedron(dim={self.dim}, halfspaces={len(self.halfspaces)})"

    def extend(self, new: Iterable[HalfSpace]) -> "Polyhedron":
        """A new polyhedron with the given half-spaces appended."""
        return Polyhedron(self.dim, self.halfspaces + tuple(new))

    def dedupe(self) -> "Polyhedron":
        """Drop exact duplicate inequalities (same normalized form), keeping order."""
        seen: set[tuple[int, ...]] = set()
        kept = []
        for hs in self.halfspaces:
            key = hs.normalized_key()
            if key not in seen:
                seen.add(key)
                kept.append(hs)
        return Polyhedron(self.dim, kept)

    def contains(self, point: Sequence[Fraction], strict: bool = False) -> bool:
        """Closed membership, or strict membership of every inequality."""
        if len(point) != self.dim:
            raise DimensionError(
                f"point of length {len(point)} against {self.dim}-dimensional polyhedron"
            )
        return all(hs.holds_at(point, strict=strict) for hs in self.halfspaces)

    def solver(self) -> SimplexSolver:
        if self._solver is None:
            unique = self.dedupe().halfspaces
            constraints = tuple((hs.func, hs.relation) for hs in unique)
            self._solver = SimplexSolver(constraints, self.dim)
        return self._solver

    def is_empty(self) -> bool:
        if self._empty is None:
            self._empty = not self.solver().feasible
        return self._empty

    def witness(self) -> Point | None:
        """Some point of the polyhedron, or None when empty."""
        return self.solver().witness()

    def minimize(self, func: AffineFunc) -> LpOutcome:
        """Exact minimum of func over the polyhedron (infeasible when empty)."""
        if func.arity != self.dim:
            raise DimensionError("objective arity differs from polyhedron dimension")
        return self.solver().optimize(func, Sense.MINIMIZE)

    def maximize(self, func: AffineFunc) -> LpOutcome:
        if func.arity != self.dim:
            raise DimensionError("objective arity differs from polyhedron dimension")
        return self.solver().optimize(func, Sense.MAXIMIZE)


@lru_cache(maxsize=None)
def unit_cube(dim: int) -> Polyhedron:
    """[0,1]^dim as the 2*dim half-spaces x_i >= 0, x_i <= 1."""
    if dim < 1:
        raise DimensionError("unit cube needs dimension at least 1")
    halfspaces = []
    for i in range(dim):
        proj = AffineFunc.projection(i, dim)
        halfspaces.append(HalfSpace(proj, Relation.GE))
        halfspaces.append(HalfSpace(proj.shift(-1), Relation.LE))
    return Polyhedron(dim, halfspaces)
