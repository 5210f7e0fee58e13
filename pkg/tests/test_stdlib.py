import random

import pytest

from foldreg.calculus import FLAVOR_LINEAR, FLAVOR_QF, infer_type
from foldreg.evaluator import eval_term, growth_profile
from foldreg.finite import unit_variant
from foldreg.stdlib import catalog, check_derivation, letters_of, word_value
from foldreg.types_values import (
    InLV,
    InRV,
    PairV,
    SeqV,
    UnitLeaf,
    values_equal,
)

BY_NAME = {d.name: d for d in catalog()}


def w3(*idxs):
    return word_value(idxs, 3)


def test_every_entry_typechecks():
    for d in catalog():
        sig = d.signature()
        assert sig is not None


def test_split_golden():
    term = BY_NAME["split"].full_term()
    out = eval_term(term, w3(0, 1, 2))
    want = SeqV((
        PairV(w3(), w3(0, 1, 2)),
        PairV(w3(0), w3(1, 2)),
        PairV(w3(0, 1), w3(2)),
        PairV(w3(0, 1, 2), w3()),
    ))
    assert values_equal(out, want)


def test_block_golden():
    # [1,2,a,3,4,5,b,c] with numbers on the left side and letters right
    term = BY_NAME["block"].full_term()
    item = lambda side, i, p: (InLV if side == 0 else InRV)(
        unit_variant(i, 2, p))
    v = SeqV((item(0, 0, 0), item(0, 1, 1), item(1, 0, 2), item(0, 0, 3),
              item(0, 1, 4), item(0, 0, 5), item(1, 1, 6), item(1, 0, 7)))
    out = eval_term(term, v)
    two = lambda *idxs: SeqV(tuple(unit_variant(i, 2, 0) for i in idxs))
    want = SeqV((InLV(two(0, 1)), InRV(two(0)), InLV(two(0, 1, 0)),
                 InRV(two(1, 0))))
    assert values_equal(out, want)


def test_prefixes_golden():
    term = BY_NAME["prefixes_rev"].full_term()
    out = eval_term(term, w3(0, 1, 2))
    want = SeqV((w3(2, 1, 0), w3(1, 0), w3(0)))
    assert values_equal(out, want)
    plain = BY_NAME["prefixes_plain"].full_term()
    out2 = eval_term(plain, w3(0, 1, 2))
    assert values_equal(out2, SeqV((w3(0), w3(0, 1), w3(0, 1, 2))))


def test_square_underline_golden():
    term = BY_NAME["square_underline"].full_term()
    v = word_value((0, 1, 0, 1), 2)
    out = eval_term(term, v)
    chunks = []
    for i in range(4):
        for j, x in enumerate((0, 1, 0, 1)):
            mark = InRV if i == j else InLV
            chunks.append(mark(unit_variant(x, 2, 0)))
    assert values_equal(out, SeqV(tuple(chunks)))


def test_squaring_golden():
    out = eval_term(BY_NAME["squaring"].full_term(), w3(0, 1, 2))
    assert values_equal(out, w3(0, 1, 2, 0, 1, 2, 0, 1, 2))


def test_reverse_golden():
    out = eval_term(BY_NAME["reverse"].full_term(), w3(0, 1, 2))
    assert values_equal(out, w3(2, 1, 0))


def test_duplicate_golden():
    two = lambda *idxs: word_value(idxs, 2)
    out = eval_term(BY_NAME["duplicate"].full_term(), two(0, 1, 0))
    assert values_equal(out, two(0, 1, 0, 0, 1, 0))


def test_list_destructor_empty():
    out = eval_term(BY_NAME["list_destructor"].full_term(), word_value((), 2))
    assert values_equal(out, InLV(UnitLeaf(0)))


def test_group_mult_identity_on_empty():
    out = eval_term(BY_NAME["group_mult"].full_term(), word_value((), 2))
    assert values_equal(out, unit_variant(0, 2))


def test_dfa_matches_direct_run(rng):
    d = BY_NAME["dfa_even_a"]
    term = d.full_term()
    for _ in range(200):
        word = [rng.randrange(2) for _ in range(rng.randint(0, 30))]
        out = eval_term(term, word_value(word, 2))
        parity = sum(1 for a in word if a == 0) % 2
        assert values_equal(out, unit_variant(parity, 2))


def test_full_budget_all_entries():
    """Default budget from the module contract: 1000 trials, size <= 50."""
    failures = []
    for d in catalog():
        rep = check_derivation(d, trials=1000, max_size=50, seed=11)
        if not rep.passed:
            failures.append((d.name, rep.counterexample))
    assert not failures, failures


def test_counterexample_reporting():
    d = BY_NAME["reverse"]
    broken = d.__class__(d.name, d.term, d.flavor, d.weak_k,
                         lambda v: SeqV(v.items))  # wrong reference
    rep = check_derivation(broken, trials=200, max_size=6, seed=0)
    assert not rep.passed
    assert rep.counterexample is not None
    v, got, want = rep.counterexample
    assert not values_equal(got, want)


def test_linear_entries_growth_degree_one():
    for d in catalog():
        if d.flavor != FLAVOR_LINEAR:
            continue
        profile = growth_profile(d.full_term(), d.flavor, range(5, 51, 5),
                                 seed=0)
        assert profile.degree == 1
        assert profile.residual < 0.15


def test_letters_word_roundtrip(rng):
    for _ in range(20):
        word = [rng.randrange(3) for _ in range(rng.randint(0, 10))]
        assert list(letters_of(word_value(word, 3), 3)) == word
