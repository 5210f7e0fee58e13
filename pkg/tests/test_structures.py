import random

import pytest

from foldreg.finite import unit_variant
from foldreg.randgen import random_inhabited_type, random_value
from foldreg.structures import (
    NotEncodable,
    NotInImage,
    Structure,
    decode,
    encode,
    pair_structure,
    restrict,
    structures_isomorphic,
    vocab_of,
)
from foldreg.types_values import (
    Bang,
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
    relabel,
    LeafAllocator,
    typecheck_value,
    values_equal,
)

TWO = CoProd(UNIT, UNIT)


def test_vocab_examples():
    assert vocab_of(UNIT).rels == ()
    assert vocab_of(TWO).rels == (("tag@", 0),)
    assert vocab_of(ListOf(TWO)).rels == (("ord@", 2), ("tag@e", 1))


def test_encode_tag_true_on_left():
    s = encode(InLV(UnitLeaf(0)), TWO)
    assert s.nullary_true("tag@")
    s = encode(InRV(UnitLeaf(0)), TWO)
    assert not s.nullary_true("tag@")


def test_encode_order_six_pairs():
    v = SeqV((UnitLeaf(0), UnitLeaf(1), UnitLeaf(2)))
    s = encode(v, ListOf(UNIT))
    assert len(s.relations["ord@"]) == 6
    assert all(a <= b for a, b in s.relations["ord@"])


def test_encode_bang_increments_grades(rng):
    for _ in range(20):
        t = random_inhabited_type(rng, depth=3, graded=True)
        v = random_value(t, rng, size=3)
        s = encode(v, t)
        sb = encode(BangV(v), Bang(t))
        assert {x: g + 1 for x, g in s.grades.items()} == sb.grades


def test_decode_roundtrip(rng):
    done = 0
    while done < 200:
        t = random_inhabited_type(rng, depth=4, graded=True)
        v = random_value(t, rng, size=3)
        try:
            s = encode(v, t)
        except NotEncodable:
            continue
        assert values_equal(decode(s, t), v)
        done += 1


def test_decode_ids_are_preserved():
    v = SeqV((InLV(UnitLeaf(7)), InRV(UnitLeaf(3))))
    s = encode(v, ListOf(TWO))
    assert decode(s, ListOf(TWO)) == v  # ids come back exactly


def test_decode_rejects_non_total_order():
    v = SeqV((UnitLeaf(0), UnitLeaf(1)))
    s = encode(v, ListOf(UNIT))
    broken = Structure(s.vocab, s.universe,
                       {"ord@": frozenset({(0, 0), (1, 1)})}, dict(s.grades))
    with pytest.raises(NotInImage):
        decode(broken, ListOf(UNIT))


def test_decode_rejects_empty_universe_for_unit():
    s = Structure(vocab_of(UNIT), (), {}, {})
    with pytest.raises(NotInImage):
        decode(s, UNIT)


def test_footnote_empty_items_rejected():
    v = SeqV((SeqV(()), SeqV(())))
    assert typecheck_value(v, ListOf(ListOf(UNIT)))  # values allow it
    with pytest.raises(NotEncodable):
        encode(v, ListOf(ListOf(UNIT)))


def test_empty_list_encodes_to_empty_universe():
    s = encode(SeqV(()), ListOf(UNIT))
    assert s.universe == ()
    assert values_equal(decode(s, ListOf(UNIT)), SeqV(()))


def test_empty_variants_under_lists_roundtrip():
    t = ListOf(Prod(CoProd(ListOf(UNIT), ListOf(UNIT)), UNIT))
    for v in (SeqV((PairV(InLV(SeqV(())), UnitLeaf(0)),)),
              SeqV((PairV(InRV(SeqV(())), UnitLeaf(0)),))):
        assert values_equal(decode(encode(v, t), t), v)


def test_encode_injective_up_to_renaming(rng):
    seen = {}
    for _ in range(100):
        t = ListOf(TWO)
        v = random_value(t, rng, size=4)
        s = encode(v, t)
        key = s.dump()
        from foldreg.types_values import strip_ids

        if key in seen:
            assert seen[key] == strip_ids(v)
        seen[key] = strip_ids(v)


def test_isomorphic_inputs_isomorphic_structures(rng):
    t = ListOf(Prod(TWO, UNIT))
    v = random_value(t, rng, size=4)
    shifted = relabel(v, LeafAllocator(start=100))
    a, b = encode(v, t), encode(shifted, t)
    # same shape: dumps agree after renaming ids by order
    ids_a = sorted(a.universe)
    ids_b = sorted(b.universe)
    rename = dict(zip(ids_b, ids_a))
    renamed = Structure(
        b.vocab, tuple(sorted(rename[x] for x in b.universe)),
        {n: frozenset(tuple(rename[x] for x in tup) for tup in rel)
         for n, rel in b.relations.items()},
        {rename[x]: g for x, g in b.grades.items()})
    assert structures_isomorphic(a, renamed)


def test_restrict_laws(rng):
    t = Prod(Bang(Prod(UNIT, Bang(UNIT))), ListOf(UNIT))
    v = random_value(t, rng, size=3)
    s = encode(v, t)
    assert structures_isomorphic(restrict(s, 0), s)
    high = restrict(s, 99)
    assert high.universe == ()
    assert set(high.relations) == set(s.relations)
    for l1 in range(3):
        for l2 in range(3):
            a = restrict(restrict(s, l1), l2)
            b = restrict(s, max(l1, l2))
            assert structures_isomorphic(a, b)


def test_restrict_banged_pair_example():
    v = PairV(UnitLeaf(0), BangV(UnitLeaf(1)))
    s = encode(v, Prod(UNIT, Bang(UNIT)))
    r = restrict(s, 1)
    assert r.universe == (1,)


def test_dump_roundtrip(rng):
    for _ in range(30):
        t = random_inhabited_type(rng, depth=3, graded=True)
        v = random_value(t, rng, size=3)
        try:
            s = encode(v, t)
        except NotEncodable:
            continue
        again = Structure.parse_dump(s.dump())
        assert structures_isomorphic(s, again)
        assert again.dump() == s.dump()


def test_dump_deterministic():
    v = SeqV((InLV(UnitLeaf(5)), InRV(UnitLeaf(2))))
    s1 = encode(v, ListOf(TWO))
    s2 = encode(v, ListOf(TWO))
    assert s1.dump() == s2.dump()


def test_pair_structure_requires_disjoint_ids():
    a = encode(UnitLeaf(0), UNIT)
    b = encode(UnitLeaf(0), UNIT)
    with pytest.raises(ValueError):
        pair_structure(a, b)
