import itertools
import random

import pytest

from foldreg.delta_suite import (
    SIGMA,
    STATE_VOCAB,
    WORD,
    endo_suite,
    random_word_structure,
    reverse_interp,
)
from foldreg.finite import unit_variant
from foldreg.qf_logic import (
    ABSENT,
    And,
    Const,
    Eq,
    FALSE,
    Not,
    NotDnf,
    Or,
    QfInterp,
    Rel,
    TRUE,
    apply_interp,
    compose_interp,
    count_theory_bound,
    eval_formula,
    formula_to_text,
    identity_interp,
    interp_from_text,
    interp_to_text,
    is_dnf,
    pair_theory,
    parse_formula,
    project_theory,
    theory_of,
    theory_transition,
    type_restriction,
)
from foldreg.randgen import random_value
from foldreg.structures import encode, pair_structure, vocab_of
from foldreg.types_values import (
    Bang,
    CoProd,
    InLV,
    InRV,
    ListOf,
    Prod,
    SeqV,
    UNIT,
    UnitLeaf,
    ZERO,
    values_equal,
)

TWO = CoProd(UNIT, UNIT)


def word(*idxs):
    return SeqV(tuple(unit_variant(i, 2, pos) for pos, i in enumerate(idxs)))


def test_eval_formula_conventions():
    s = encode(InLV(UnitLeaf(0)), TWO)
    assert eval_formula(TRUE, s, ())
    assert eval_formula(Rel("tag@", ()), s, ())
    s2 = encode(InRV(UnitLeaf(0)), TWO)
    assert not eval_formula(Rel("tag@", ()), s2, ())
    w = encode(word(0, 1), ListOf(TWO))
    # absent arguments make atoms and equalities false
    assert not eval_formula(Rel("ord@", (1, 2)), w, (0, ABSENT))
    assert not eval_formula(Eq(1, 2), w, (0, ABSENT))
    assert not eval_formula(Eq(1, 1), w, (ABSENT,))
    assert eval_formula(Not(Eq(1, 1)), w, (ABSENT,))
    with pytest.raises(ValueError):
        eval_formula(Rel("ord@", (1, 2)), w, (0,))


def test_reverse_interp_golden():
    s = encode(word(0, 1, 1), WORD)
    out = apply_interp(reverse_interp(), s)
    from foldreg.structures import decode

    assert values_equal(decode(out, WORD), word(1, 1, 0))


def test_identity_interp(rng):
    ident = identity_interp(STATE_VOCAB)
    for _ in range(20):
        s = random_word_structure(rng)
        out = apply_interp(ident, s)
        from foldreg.structures import structures_isomorphic

        assert structures_isomorphic(out, s)


def test_concat_interp_matches_prime(rng):
    """Flattening lists of lists as an interpretation vs the prime."""
    from foldreg.calculus import Prime
    from foldreg.evaluator import eval_term
    from foldreg.structures import decode

    t_in = ListOf(ListOf(TWO))
    t_out = ListOf(TWO)
    vin, vout = vocab_of(t_in), vocab_of(t_out)
    # the outer and inner orders compose lexicographically; for flattening,
    # the inner order within items plus the outer order across items both
    # collapse into the single output order
    interp = QfInterp(vin, vout, TRUE, {
        "ord@": Or(And(Rel("ord@", (1, 2)), Not(Rel("ord@", (2, 1)))),
                   And(And(Rel("ord@", (1, 2)), Rel("ord@", (2, 1))),
                       Rel("ord@e", (1, 2)))),
        "tag@e": Rel("tag@ee", (1,)),
    })
    interp.validate()
    done = 0
    while done < 40:
        v = random_value(t_in, rng, size=3)
        if any(not item.items for item in v.items):
            continue  # encodable inputs only
        s = encode(v, t_in)
        out = apply_interp(interp, s)
        expect = eval_term(Prime("concat", (TWO,)), v)
        assert values_equal(decode(out, t_out), expect)
        done += 1


def test_compose_interp_semantics(rng):
    rev = reverse_interp()
    twice = compose_interp(rev, rev)
    for _ in range(100):
        s = random_word_structure(rng)
        out = apply_interp(twice, s)
        from foldreg.structures import structures_isomorphic

        assert structures_isomorphic(out, s)
    ident = identity_interp(STATE_VOCAB)
    with_id = compose_interp(rev, ident)
    for _ in range(30):
        s = random_word_structure(rng)
        assert apply_interp(with_id, s).dump() == apply_interp(rev, s).dump()


def test_compose_interp_associative(rng):
    from foldreg.delta_suite import keep_left_interp, swap_labels_interp

    f, g, h = reverse_interp(), swap_labels_interp(), keep_left_interp()
    left = compose_interp(compose_interp(f, g), h)
    right = compose_interp(f, compose_interp(g, h))
    for _ in range(50):
        s = random_word_structure(rng)
        assert apply_interp(left, s).dump() == apply_interp(right, s).dump()


def test_compose_vocab_mismatch():
    with pytest.raises(ValueError):
        compose_interp(reverse_interp(), identity_interp(vocab_of(TWO)))


def test_theory_of_examples():
    s = encode(InRV(UnitLeaf(0)), TWO)
    th = theory_of(s, ())
    assert th.nullary == frozenset()
    s2 = encode(word(0, 1), WORD)
    th2 = theory_of(s2, (0, 0))
    assert th2.eq_repr == (0, 0)
    th3 = theory_of(s2, (0,))
    assert ("ord@", (0, 0)) in th3.atoms
    assert ("tag@e", (0,)) in th3.atoms
    th4 = theory_of(s2, (1,))
    assert ("tag@e", (0,)) not in th4.atoms
    # ids outside the universe count as absent
    th5 = theory_of(s2, (99,))
    assert th5.present == (False,)


def test_theory_isomorphism_invariant(rng):
    for _ in range(40):
        s = random_word_structure(rng)
        if not s.universe:
            continue
        shift = 1000
        s2_relations = {
            n: frozenset(tuple(x + shift for x in tup) for tup in rel)
            for n, rel in s.relations.items()}
        from foldreg.structures import Structure

        s2 = Structure(s.vocab, tuple(x + shift for x in s.universe),
                       s2_relations, {x + shift: g for x, g in s.grades.items()})
        tup = tuple(rng.choice(s.universe) for _ in range(2))
        assert theory_of(s, tup) == theory_of(s2, tuple(x + shift for x in tup))


def test_congruence_500_per_interp(rng):
    for name, interp in endo_suite():
        for _ in range(500):
            s = random_word_structure(rng)
            k = rng.randint(0, 2)
            tup = tuple(
                rng.choice(s.universe)
                if s.universe and rng.random() < 0.85 else ABSENT
                for _ in range(k))
            via_transition = theory_transition(interp, theory_of(s, tup))
            direct = theory_of(apply_interp(interp, s), tup)
            assert via_transition == direct, (name, tup)


def test_theory_transition_identity(rng):
    ident = identity_interp(STATE_VOCAB)
    for _ in range(30):
        s = random_word_structure(rng)
        tup = tuple(rng.choice(s.universe) if s.universe else ABSENT
                    for _ in range(2))
        th = theory_of(s, tup)
        assert theory_transition(ident, th) == th


def test_theory_transition_universe_false_all_absent(rng):
    nothing = QfInterp(STATE_VOCAB, STATE_VOCAB, FALSE, {
        "ord@": FALSE, "tag@e": FALSE})
    s = random_word_structure(rng, max_len=4)
    tup = tuple(s.universe[:2])
    th = theory_transition(nothing, theory_of(s, tup))
    assert all(not p for p in th.present)


def test_pair_theory_oracle(rng):
    for _ in range(200):
        a = random_word_structure(rng, max_len=4)
        v = random_value(SIGMA, rng)
        from foldreg.types_values import LeafAllocator, relabel

        v = relabel(v, LeafAllocator(start=500))
        b = encode(v, SIGMA)
        k1 = rng.randint(0, 2)
        k2 = rng.randint(0, 1)
        tup_a = tuple(rng.choice(a.universe) if a.universe else ABSENT
                      for _ in range(k1))
        tup_b = tuple(rng.choice(b.universe) if b.universe else ABSENT
                      for _ in range(k2))
        sides = ["L"] * k1 + ["R"] * k2
        rng.shuffle(sides)
        sides = tuple(sides)
        ia, ib = iter(tup_a), iter(tup_b)
        combined = tuple(next(ia) if s == "L" else next(ib) for s in sides)
        via_pair = pair_theory(theory_of(a, tup_a), theory_of(b, tup_b), sides)
        direct = theory_of(pair_structure(a, b), combined)
        assert via_pair == direct


def test_pair_theory_one_side_absent(rng):
    a = random_word_structure(rng, max_len=4)
    b = encode(InLV(UnitLeaf(700)), SIGMA)
    tup_a = tuple(a.universe[:1]) or (ABSENT,)
    th = pair_theory(theory_of(a, tup_a), theory_of(b, (ABSENT,)),
                     ("L", "R"))
    sub = project_theory(th, (0,))
    # the L-side atoms survive unchanged modulo renaming
    base = theory_of(a, tup_a)
    for name, combo in base.atoms:
        from foldreg.structures import rename_prefixed

        assert (rename_prefixed(name, "L"), combo) in th.atoms


def test_theory_space_is_finite():
    bound = count_theory_bound(STATE_VOCAB, 2)
    assert bound > 0
    seen = set()
    rng = random.Random(5)
    for _ in range(300):
        s = random_word_structure(rng)
        tup = tuple(rng.choice(s.universe) if s.universe else ABSENT
                    for _ in range(2))
        seen.add(theory_of(s, tup))
    assert len(seen) <= bound


def test_interp_file_roundtrip():
    rev = reverse_interp()
    text = interp_to_text(rev)
    again = interp_from_text(text)
    assert again.in_vocab == rev.in_vocab
    assert again.out_vocab == rev.out_vocab
    assert interp_to_text(again) == text


def test_formula_parse_roundtrip():
    fs = [
        TRUE, FALSE, Rel("tag@", ()), Rel("ord@", (1, 2)), Eq(1, 2),
        Not(And(Rel("tag@e", (1,)), Or(Eq(1, 1), FALSE))),
    ]
    for f in fs:
        assert parse_formula(formula_to_text(f)) == f


# -- type restriction --------------------------------------------------------

def test_restriction_false_on_unit_gives_zero():
    out_t, proj = type_restriction(UNIT, FALSE)
    assert out_t == ZERO
    s = encode(UnitLeaf(0), UNIT)
    assert apply_interp(proj, s).universe == ()


def test_restriction_true_is_identity(rng):
    t = ListOf(Prod(UNIT, ListOf(TWO)))
    out_t, proj = type_restriction(t, TRUE)
    assert out_t == t
    for _ in range(20):
        v = random_value(t, rng, size=3)
        s = encode(v, t)
        out = apply_interp(proj, s)
        assert values_equal(decode_(out, t), v)


def decode_(s, t):
    from foldreg.structures import decode

    return decode(s, t)


def test_restriction_filter_oracle(rng):
    t = ListOf(TWO)
    out_t, proj = type_restriction(t, Rel("tag@e", (1,)))
    assert out_t == ListOf(CoProd(UNIT, ZERO))
    for _ in range(100):
        v = random_value(t, rng, size=6)
        s = encode(v, t)
        out = apply_interp(proj, s)
        got = decode_(out, out_t)
        want = SeqV(tuple(InLV(x.inner) for x in v.items
                          if isinstance(x, InLV)))
        assert values_equal(got, want)


def test_restriction_product_clause(rng):
    t = Prod(ListOf(UNIT), ListOf(UNIT))
    # keep only the first coordinate's elements
    out_t, proj = type_restriction(t, Rel("fst@", (1,)))
    assert out_t == Prod(ListOf(UNIT), ListOf(ZERO))
    for _ in range(30):
        v = random_value(t, rng, size=4)
        s = encode(v, t)
        out = apply_interp(proj, s)
        got = decode_(out, out_t)
        from foldreg.types_values import PairV

        assert values_equal(got, PairV(v.first, SeqV(())))


def test_restriction_requires_dnf():
    with pytest.raises(NotDnf):
        type_restriction(Prod(TWO, UNIT), TRUE)
    with pytest.raises(NotDnf):
        type_restriction(Bang(UNIT), TRUE)
    assert is_dnf(CoProd(Prod(UNIT, ListOf(TWO)), UNIT))


def test_restriction_nested_lists():
    """The formula correspondence applies itemwise through nested lists."""
    t = ListOf(ListOf(TWO))
    out_t, proj = type_restriction(t, Rel("tag@ee", (1,)))
    assert out_t == ListOf(ListOf(CoProd(UNIT, ZERO)))
    v = SeqV((SeqV((InLV(UnitLeaf(0)), InRV(UnitLeaf(1)))),
              SeqV((InLV(UnitLeaf(2)),))))
    s = encode(v, t)
    out = apply_interp(proj, s)
    assert set(out.universe) == {0, 2}
    # the survivors keep their item grouping and order
    assert (0, 2) in out.relations["ord@"]
    assert (2, 0) not in out.relations["ord@"]
    assert (0, 2) not in out.relations["ord@e"]
