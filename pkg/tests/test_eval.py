import random

import pytest

from foldreg.calculus import (
    Compose,
    FLAVOR_LINEAR,
    FLAVOR_POLY,
    FLAVOR_QF,
    Prime,
    SafeFold,
    infer_type,
)
from foldreg.evaluator import (
    FRESH,
    QF_FRESH_EXCEPTIONS,
    EvalInternalError,
    eval_term,
    eval_traced,
    growth_profile,
)
from foldreg.finite import unit_variant
from foldreg.randgen import random_value
from foldreg.stdlib import catalog
from foldreg.termlib import constant_into, erase_bangs, seq_compose
from foldreg.types_values import (
    BangV,
    CoProd,
    InLV,
    InRV,
    ListOf,
    PairV,
    Prod,
    SeqV,
    UNIT,
    UnitLeaf,
    distinct_leaf_ids,
    leaf_count,
    leaf_ids,
    values_equal,
)

THREE = CoProd(UNIT, CoProd(UNIT, UNIT))


def word(*idxs):
    return SeqV(tuple(unit_variant(i, 3, pos) for pos, i in enumerate(idxs)))


def test_reverse_golden():
    out = eval_term(Prime("reverse", (THREE,)), word(0, 1, 2))
    assert values_equal(out, word(2, 1, 0))


def test_concat_golden():
    v = SeqV((SeqV((unit_variant(0, 3, 0),)),
              SeqV((unit_variant(1, 3, 1), unit_variant(2, 3, 2))),
              SeqV(())))
    out = eval_term(Prime("concat", (THREE,)), v)
    assert values_equal(out, word(0, 1, 2))


def test_squaring_golden():
    by_name = {d.name: d for d in catalog()}
    squaring = by_name["squaring"]
    out = eval_term(squaring.full_term(), word(0, 1, 2))
    assert values_equal(out, word(0, 1, 2, 0, 1, 2, 0, 1, 2))


def test_eval_respects_typing(rng):
    from foldreg.types_values import typecheck_value

    for d in catalog():
        full = d.full_term()
        sig = infer_type(full, d.flavor)
        for _ in range(5):
            v = random_value(sig.dom, rng, size=5)
            out = eval_term(full, v)
            assert typecheck_value(out, sig.cod)
            assert distinct_leaf_ids(out)


def test_traced_reverse_bijective():
    tr = eval_traced(Prime("reverse", (THREE,)), word(0, 1, 2, 0, 1))
    assert len(tr.leaf_origin) == 5
    origins = list(tr.leaf_origin.values())
    assert FRESH not in origins
    assert len(set(origins)) == 5


def test_traced_absorption_two_preimages():
    t = ListOf(UNIT)
    term = Prime("absorption", (t,))
    v = BangV(SeqV((UnitLeaf(0), UnitLeaf(1))))
    tr = eval_traced(term, v)
    preimages = {}
    for out_leaf, origin in tr.leaf_origin.items():
        preimages.setdefault(origin, []).append(out_leaf)
    assert all(len(v) == 2 for v in preimages.values())
    assert set(preimages) == {0, 1}


def test_qf_provenance_injective_no_fresh(rng):
    assert QF_FRESH_EXCEPTIONS == frozenset()
    for d in catalog():
        if d.flavor != FLAVOR_QF:
            continue
        full = d.full_term()
        sig = infer_type(full, d.flavor)
        for _ in range(50):
            v = random_value(sig.dom, rng, size=6)
            inputs = set(leaf_ids(v))
            tr = eval_traced(full, v)
            origins = list(tr.leaf_origin.values())
            assert FRESH not in origins
            assert len(set(origins)) == len(origins)
            assert set(origins) <= inputs


def test_fold_agrees_with_manual_composition(rng):
    """Fold evaluation equals the n-fold manual application of the step."""
    by_name = {d.name: d for d in catalog()}
    entry = by_name["group_mult"]
    fold = entry.term
    assert isinstance(fold, SafeFold)
    for n in range(21):
        v = SeqV(tuple(unit_variant(rng.randrange(2), 2, i)
                       for i in range(n)))
        direct = eval_term(entry.full_term(), v)
        state = eval_term(fold.init, BangV(UnitLeaf(999)))
        for item in v.items:
            state = eval_term(fold.step, PairV(state, item))
        assert values_equal(direct, state)


def test_zero_primes_do_not_evaluate():
    with pytest.raises(EvalInternalError):
        eval_term(Prime("add_zero", (UNIT,)), UnitLeaf(0))


def test_growth_profiles(rng):
    by_name = {d.name: d for d in catalog()}
    sq = growth_profile(by_name["squaring"].full_term(), FLAVOR_POLY,
                        range(5, 51, 5), seed=0)
    assert sq.degree == 2 and sq.residual < 0.15
    rv = growth_profile(by_name["reverse"].full_term(), FLAVOR_QF,
                        range(5, 51, 5), seed=0)
    assert rv.degree == 1 and rv.residual < 0.15
    const = seq_compose(Prime("const_unit", (ListOf(THREE),)),
                        constant_into(unit_variant(0, 2), CoProd(UNIT, UNIT)))
    cp = growth_profile(const, FLAVOR_POLY, range(5, 51, 5), seed=0)
    assert cp.degree == 0


def test_growth_needs_three_sizes():
    with pytest.raises(ValueError):
        growth_profile(Prime("reverse", (THREE,)), FLAVOR_QF, [5, 10], seed=0)


def test_linear_growth_bound(rng):
    """Linear entries: output leaves <= C x input leaves, C per entry."""
    for d in catalog():
        if d.flavor != FLAVOR_LINEAR:
            continue
        full = d.full_term()
        sig = infer_type(full, d.flavor)
        const = 2 if d.name == "duplicate" else 1
        for size in (0, 1, 7, 100, 10_000):
            v = SeqV(tuple(unit_variant(rng.randrange(2), 2, i)
                           for i in range(size)))
            out = eval_term(full, v)
            assert leaf_count(out) <= const * max(1, leaf_count(v))


def test_large_flat_inputs_no_recursion_issue():
    v = SeqV(tuple(unit_variant(i % 3, 3, i) for i in range(100_000)))
    out = eval_term(Prime("reverse", (THREE,)), v)
    assert leaf_count(out) == 100_000
