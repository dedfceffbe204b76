"""The compiler: enumeration counts, worked branches, soundness of both
accelerations, and the coverage/evaluation guarantees."""

import random
from fractions import Fraction as F

import pytest

from pwlnet import (
    AffineFunc,
    GeneratorConfig,
    HalfSpace,
    Network,
    Relation,
    Symbol,
    SymbolTrace,
    TranslationOptions,
    classify_layer,
    classify_node,
    evaluate_regional,
    expand_layer,
    full_pair_count,
    generate,
    translate,
    unit_cube,
)
from oracles import (
    count_nonempty_configurations,
    forward_reference,
    random_cube_point,
)

ALL_OFF = TranslationOptions(prune_empty=False, classify_hyperplanes=False)
LE, BT, GE = Symbol.LE, Symbol.BETWEEN, Symbol.GE


def _by_trace(rep, output=0):
    return {p.trace: p for p in rep.outputs[output]}


def small_random_net(rng: random.Random, seed: int) -> Network:
    cfg = GeneratorConfig(
        inputs=rng.randrange(1, 4),
        hidden_layers=rng.randrange(1, 3),
        hidden_width=rng.randrange(1, 4),
        outputs=rng.randrange(1, 3),
        seed=seed,
        grid=64,
    )
    return generate(cfg)


def test_unaccelerated_count_matches_formula(example_net):
    rep = translate(example_net, ALL_OFF)
    assert rep.pair_counts() == [12]
    assert full_pair_count(example_net) == 12
    rng = random.Random(100)
    for seed in range(3):
        net = small_random_net(rng, seed)
        rep = translate(net, ALL_OFF)
        assert sum(rep.pair_counts()) == full_pair_count(net)


def test_contradictory_hidden_branch_is_empty(example_net):
    rep = translate(example_net, ALL_OFF)
    by_trace = _by_trace(rep)
    for case in (LE, BT, GE):
        assert by_trace[SymbolTrace(((GE, LE),), case)].region_empty


def test_mixed_branch_output_cases(example_net):
    """The worked branch: first hidden node clamped, second passing through."""
    rep = translate(example_net, ALL_OFF)
    by_trace = _by_trace(rep)
    le = by_trace[SymbolTrace(((LE, GE),), LE)]
    mid = by_trace[SymbolTrace(((LE, GE),), BT)]
    ge = by_trace[SymbolTrace(((LE, GE),), GE)]
    assert le.region_empty
    assert not mid.region_empty
    assert mid.piece == AffineFunc(F(1), (F(1), F(-1)))
    # exact closed-region geometry: the >= case is the single cube corner
    # (0,0), where the affine case takes the value 1 as well; it is a
    # nonempty (zero-area) region under exact feasibility
    assert not ge.region_empty
    assert ge.region.witness() == (F(0), F(0))
    assert mid.region.contains((F(0), F(0)))


def test_pruned_totals_match_enumeration_oracle(example_net):
    rep = translate(example_net)
    oracle = count_nonempty_configurations(example_net)
    assert len(rep.outputs[0]) == oracle == 5
    rng = random.Random(200)
    for seed in range(4):
        net = small_random_net(rng, 300 + seed)
        rep = translate(net)
        for k in range(net.output_dim):
            assert len(rep.outputs[k]) == count_nonempty_configurations(net, k)


def test_expand_layer_output_step(example_net):
    """Drive the recursion's output step directly with a known branch state."""
    cube = unit_cube(2)
    f11, f21 = example_net.layers[0]
    branch_region = cube.extend(
        [HalfSpace(f11, Relation.LE), HalfSpace(f21, Relation.GE)]
    )
    branch_funcs = (AffineFunc.zero(2), f21)
    sinks = [[]]
    expand_layer(
        example_net, 1, branch_region, branch_funcs, ((LE, GE),), ALL_OFF, sinks
    )
    assert [p.trace.output for p in sinks[0]] == [LE, BT, GE]
    pieces = [p.piece for p in sinks[0]]
    assert pieces[0] == AffineFunc.zero(2)
    assert pieces[1] == AffineFunc(F(1), (F(1), F(-1)))
    assert pieces[2] == AffineFunc.one(2)
    # regions extend the branch region by the case constraints
    assert len(sinks[0][0].region.halfspaces) == len(branch_region.halfspaces) + 1
    assert len(sinks[0][1].region.halfspaces) == len(branch_region.halfspaces) + 2


def test_classification_cases():
    below = AffineFunc(F(-3), (F(1), F(1)))  # strictly negative on the square
    res = classify_node(below)
    assert res.symbols == (LE,)
    assert res.maximum == -1 and res.minimum == -3
    crossing = AffineFunc(F(0), (F(1), F(-1)))
    assert classify_node(crossing).symbols == (LE, GE)
    zero = AffineFunc.zero(2)
    res = classify_node(zero)
    assert res.symbols == (GE,)
    assert res.minimum == 0 == res.maximum
    always_up = AffineFunc(F(1, 2), (F(1),))
    assert classify_node(always_up).symbols == (GE,)
    assert [c.symbols for c in classify_layer([below, crossing])] == [(LE,), (LE, GE)]


def test_classification_keeps_cube_touching_signs():
    # x1 + x2 - 2 is nonpositive on the square but its zero set touches the
    # corner (1,1): the >= branch owns that corner, a nonempty region, so
    # both signs stay enumerable and emptiness pruning (not classification)
    # decides each branch exactly
    touching = AffineFunc(F(-2), (F(1), F(1)))
    res = classify_node(touching)
    assert res.maximum == 0 and res.minimum == -2
    assert res.symbols == (LE, GE)
    facet = AffineFunc(F(0), (F(109, 64),))  # min over [0,1] is exactly 0
    res = classify_node(facet)
    assert res.minimum == 0 and res.maximum == F(109, 64)
    assert res.symbols == (LE, GE)


def test_zero_node_network_all_option_combos_agree_geometrically():
    zero = AffineFunc.zero(1)
    x = AffineFunc.projection(0, 1)
    net = Network(((zero, x), (AffineFunc(F(0), (F(1), F(1))),)))
    reference = None
    for prune in (False, True):
        for classify in (False, True):
            rep = translate(net, TranslationOptions(prune, classify))
            got = {
                (p.piece, p.region)
                for p in rep.outputs[0]
                if not p.region_empty
            }
            if reference is None:
                reference = got
            else:
                assert got == reference


@pytest.mark.parametrize("seed", [11, 12, 13, 14])
def test_acceleration_soundness_by_trace(seed):
    rng = random.Random(seed)
    net = small_random_net(rng, 1000 + seed)
    outputs = {}
    for prune in (False, True):
        for classify in (False, True):
            rep = translate(net, TranslationOptions(prune, classify))
            keyed = {}
            for k, pairs in enumerate(rep.outputs):
                for p in pairs:
                    if not p.region_empty:
                        keyed[(k, p.trace)] = (p.piece, p.region)
            outputs[(prune, classify)] = keyed
    reference = outputs[(False, False)]
    for combo, keyed in outputs.items():
        assert keyed == reference, f"options {combo} changed the nonempty pairs"


def test_classification_never_admits_a_sign_that_misses_the_cube():
    rng = random.Random(55)
    for seed in range(6):
        net = small_random_net(rng, 2000 + seed)
        projections = tuple(
            AffineFunc.projection(i, net.input_dim) for i in range(net.input_dim)
        )
        composed = [node.compose(projections) for node in net.layers[0]]
        cube = unit_cube(net.input_dim)
        for g, res in zip(composed, classify_layer(composed)):
            assert res.minimum == cube.minimize(g).optimum
            assert res.maximum == cube.maximize(g).optimum
            if GE in res.symbols:
                assert res.maximum >= 0
            if LE in res.symbols:
                assert res.minimum <= 0


def test_coverage_disjointness_and_evaluation():
    rng = random.Random(321)
    for seed in range(6):
        net = small_random_net(rng, 3000 + seed)
        rep = translate(net)
        for _ in range(120):
            x = random_cube_point(rng, net.input_dim)
            expected = forward_reference(net, x)
            assert evaluate_regional(rep, x) == expected
            for k in range(net.output_dim):
                containing = [p for p in rep.outputs[k] if p.region.contains(x)]
                assert containing, "every cube point lies in some region"
                strict = [p for p in containing if p.region.contains(x, strict=True)]
                assert len(strict) <= 1, "strict interiors are pairwise disjoint"


def test_regions_preserve_construction_history(example_net):
    """Half-spaces appear in build order: cube, then each layer, then the
    output case, so the per-layer construction is reconstructible."""
    rep = translate(example_net, ALL_OFF)
    mid = _by_trace(rep)[SymbolTrace(((LE, GE),), BT)]
    cube = unit_cube(2)
    halfspaces = mid.region.halfspaces
    assert halfspaces[:4] == cube.halfspaces
    f11, f21 = example_net.layers[0]
    assert halfspaces[4] == HalfSpace(f11, Relation.LE)
    assert halfspaces[5] == HalfSpace(f21, Relation.GE)
    out_func = AffineFunc(F(1), (F(1), F(-1)))
    assert halfspaces[6] == HalfSpace(out_func, Relation.GE)
    assert halfspaces[7] == HalfSpace(out_func.shift(-1), Relation.LE)
    assert len(halfspaces) == 8


def test_canonical_order_and_determinism(example_net):
    rep1 = translate(example_net)
    rep2 = translate(example_net)
    keys = [p.trace.sort_key() for p in rep1.outputs[0]]
    assert keys == sorted(keys)
    assert [(p.piece, p.region, p.trace) for p in rep1.outputs[0]] == [
        (p.piece, p.region, p.trace) for p in rep2.outputs[0]
    ]


def test_parallel_mode_is_identical():
    rng = random.Random(9)
    for seed in range(3):
        net = small_random_net(rng, 4000 + seed)
        seq = translate(net)
        par = translate(net, TranslationOptions(parallel=True, max_workers=3))
        for k in range(net.output_dim):
            assert [(p.piece, p.region, p.trace) for p in seq.outputs[k]] == [
                (p.piece, p.region, p.trace) for p in par.outputs[k]
            ]


def test_single_layer_network_translates():
    net = Network(((AffineFunc(F(-1, 4), (F(2),)),),))
    rep = translate(net, ALL_OFF)
    assert rep.pair_counts() == [3]
    rng = random.Random(3)
    for _ in range(50):
        x = random_cube_point(rng, 1)
        assert evaluate_regional(rep, x) == forward_reference(net, x)
