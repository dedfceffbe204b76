"""Independent reference implementations used only by the tests.

Nothing here shares code paths with the library's decision logic: the
optimum oracle enumerates vertices by solving square subsystems with
Gaussian elimination, the enumeration oracle expands symbol assignments
iteratively (not recursively), and the dominance oracle scans (i, j, k)
triples directly. Agreement between these and the production paths is
what the tests assert.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from pwlnet.lp import Relation, is_feasible
from pwlnet.network import Network, relu, truncated_identity
from pwlnet.rationals import AffineFunc
from pwlnet.regional import RegionPiece

Constraint = tuple[AffineFunc, Relation]


def gaussian_solve(
    matrix: list[list[Fraction]], rhs: list[Fraction]
) -> list[Fraction] | None:
    """Solve a square exact system; None when singular."""
    n = len(matrix)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def satisfies(constraints: list[Constraint], point: tuple[Fraction, ...]) -> bool:
    return all(rel.holds(func(point)) for func, rel in constraints)


def enumerate_vertices(
    constraints: list[Constraint], arity: int
) -> list[tuple[Fraction, ...]]:
    """Feasible basic points: every arity-subset of constraints as equalities."""
    vertices = set()
    for subset in itertools.combinations(constraints, arity):
        matrix = [list(func.coeffs) for func, _ in subset]
        rhs = [-func.bias for func, _ in subset]
        solution = gaussian_solve(matrix, rhs)
        if solution is None:
            continue
        point = tuple(solution)
        if satisfies(constraints, point):
            vertices.add(point)
    return sorted(vertices)


def brute_force_optimum(
    constraints: list[Constraint], objective: AffineFunc, maximize: bool
) -> Fraction | None:
    """Best vertex value of a bounded system; None when there is no vertex."""
    vertices = enumerate_vertices(constraints, objective.arity)
    if not vertices:
        return None
    values = [objective(v) for v in vertices]
    return max(values) if maximize else min(values)


def rejection_sample(
    constraints: list[Constraint],
    arity: int,
    rng: random.Random,
    attempts: int,
    denominator: int = 64,
) -> list[tuple[Fraction, ...]]:
    """Random cube points that happen to satisfy the constraints."""
    found = []
    for _ in range(attempts):
        point = tuple(
            Fraction(rng.randrange(denominator + 1), denominator) for _ in range(arity)
        )
        if satisfies(constraints, point):
            found.append(point)
    return found


def random_cube_point(
    rng: random.Random, dim: int, denominator: int = 97
) -> tuple[Fraction, ...]:
    return tuple(
        Fraction(rng.randrange(denominator + 1), denominator) for _ in range(dim)
    )


def cube_constraints(arity: int) -> list[Constraint]:
    out = []
    for i in range(arity):
        proj = AffineFunc.projection(i, arity)
        out.append((proj, Relation.GE))
        out.append((proj.shift(-1), Relation.LE))
    return out


def enumerate_configurations(net: Network):
    """Iterative expansion of every symbol configuration of a small network.

    Yields (hidden_signs, output_index, output_case, piece, constraints)
    where hidden_signs is a tuple per hidden layer of "+"/"-" node signs,
    output_case is one of "zero", "affine", "one", and constraints is the
    full inequality list over the input cube. Deliberately structured as a
    flat product over all hidden nodes at once, unlike the compiler.
    """
    dim = net.input_dim
    hidden_layers = net.layers[:-1]
    signs_per_layer = [list(itertools.product("-+", repeat=len(l))) for l in hidden_layers]
    for combo in itertools.product(*signs_per_layer):
        constraints = cube_constraints(dim)
        funcs = [AffineFunc.projection(i, dim) for i in range(dim)]
        for layer, signs in zip(hidden_layers, combo):
            composed = [node.compose(funcs) for node in layer]
            next_funcs = []
            for g, sign in zip(composed, signs):
                if sign == "+":
                    constraints.append((g, Relation.GE))
                    next_funcs.append(g)
                else:
                    constraints.append((g, Relation.LE))
                    next_funcs.append(AffineFunc.zero(dim))
            funcs = next_funcs
        for k, node in enumerate(net.layers[-1]):
            g = node.compose(funcs)
            yield combo, k, "zero", AffineFunc.zero(dim), constraints + [(g, Relation.LE)]
            yield combo, k, "affine", g, constraints + [
                (g, Relation.GE),
                (g.shift(-1), Relation.LE),
            ]
            yield combo, k, "one", AffineFunc.one(dim), constraints + [
                (g.shift(-1), Relation.GE)
            ]


def count_nonempty_configurations(net: Network, output_index: int = 0) -> int:
    """LP-checked count of nonempty pairs for one output node."""
    count = 0
    for _, k, _, _, constraints in enumerate_configurations(net):
        if k == output_index and is_feasible(constraints, net.input_dim):
            count += 1
    return count


def forward_reference(net: Network, x) -> tuple[Fraction, ...]:
    """Straight-line reimplementation of the forward pass."""
    current = tuple(x)
    for i, layer in enumerate(net.layers):
        pre = [func(current) for func in layer]
        if i == net.depth - 1:
            current = tuple(truncated_identity(v) for v in pre)
        else:
            current = tuple(relu(v) for v in pre)
    return current


def triple_loop_violations(pairs: list[RegionPiece]) -> list[tuple[int, int]]:
    """Direct (i, j, k) scan of the dominance property via fresh LPs."""
    m = len(pairs)

    def above(p_idx: int, q_idx: int, region_idx: int) -> bool:
        region = pairs[region_idx].region
        diff = pairs[p_idx].piece - pairs[q_idx].piece
        return region.minimize(diff).optimum >= 0

    violating = []
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if not any(above(i, k, i) and above(k, j, j) for k in range(m)):
                violating.append((i, j))
    return violating
