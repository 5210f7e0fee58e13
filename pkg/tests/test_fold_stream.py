import random
import time

import pytest

from foldreg.delta_suite import (
    LETTER_VOCAB,
    SIGMA,
    STATE_VOCAB,
    WORD,
    append_delta,
    delta_suite,
    endo_suite,
    random_word_structure,
    reverse_interp,
    word_instance,
)
from foldreg.finite import unit_variant
from foldreg.fold_stream import (
    FoldInstance,
    FoldStats,
    IterationStats,
    iterate_qf,
    mixed_tuple_theory,
    naive_fold,
    stream_fold,
)
from foldreg.qf_logic import apply_interp, count_theory_bound, theory_of
from foldreg.structures import decode, encode, structures_isomorphic
from foldreg.types_values import LeafAllocator, SeqV, values_equal


def test_empty_letters_returns_b0(rng):
    inst = word_instance(append_delta(), rng, 0)
    out = naive_fold(inst)
    assert structures_isomorphic(out, inst.b0)
    assert structures_isomorphic(stream_fold(inst), inst.b0)


def test_list_constructor_delta_builds_list(rng):
    alloc = LeafAllocator()
    b0 = encode(SeqV(()), WORD)
    letters = [encode(unit_variant(i, 2, alloc.fresh()), SIGMA)
               for i in (0, 1, 0)]
    inst = FoldInstance(append_delta(), b0, letters, STATE_VOCAB, LETTER_VOCAB)
    out = naive_fold(inst)
    got = decode(out, WORD)
    assert [0, 1, 0] == [0 if hasattr(x, "inner") and
                         x.__class__.__name__ == "InLV" else 1
                         for x in got.items]


def test_single_letter_equals_naive(rng):
    for name, delta, make in delta_suite():
        inst = make(rng, 1)
        assert structures_isomorphic(naive_fold(inst), stream_fold(inst))


def test_stream_equals_naive_300_instances(rng):
    t0 = time.time()
    count = 0
    suite = delta_suite()
    while count < 300:
        for name, delta, make in suite:
            inst = make(rng, rng.randint(0, 40))
            a = naive_fold(inst)
            b = stream_fold(inst)
            assert structures_isomorphic(a, b), name
            count += 1
    assert time.time() - t0 < 60


def test_stream_state_space_bounded(rng):
    """Distinct theories seen during propagation do not grow with n."""
    delta = append_delta()
    sizes = []
    for n in (10, 20, 30, 40):
        stats = FoldStats()
        rng2 = random.Random(7)
        inst = word_instance(delta, rng2, n)
        stream_fold(inst, stats)
        sizes.append(stats.distinct_theories)
        bound = count_theory_bound(STATE_VOCAB, 2)
        assert stats.distinct_theories <= bound
    assert sizes[-1] == sizes[-2]  # saturated well before n = 40


def test_mixed_tuple_theory_oracle(rng):
    samples = 0
    suite = delta_suite()
    while samples < 1000:
        for name, delta, make in suite:
            inst = make(rng, rng.randint(1, 12))
            final = naive_fold(inst)
            pool = [(0, x) for x in inst.b0.universe]
            for i, letter in enumerate(inst.letters, start=1):
                pool.extend((i, x) for x in letter.universe)
            if not pool:
                continue
            for _ in range(20):
                k = rng.randint(1, 2)
                tup = [rng.choice(pool) for _ in range(k)]
                got = mixed_tuple_theory(inst, tup)
                want = theory_of(final, tuple(x for _, x in tup))
                assert got == want, (name, tup)
                samples += 1


def test_mixed_tuple_all_b0(rng):
    inst = word_instance(append_delta(), rng, 5, init_len=3)
    if not inst.b0.universe:
        inst = word_instance(append_delta(), rng, 5, init_len=3)
    for x in inst.b0.universe:
        th = mixed_tuple_theory(inst, [(0, x)])
        assert th == theory_of(naive_fold(inst), (x,))


def test_deleted_element_has_false_membership(rng):
    from foldreg.delta_suite import forget_delta

    inst = word_instance(forget_delta(), rng, 3)
    if not inst.letters[0].universe:
        pytest.skip("empty letter")
    x = inst.letters[0].universe[0]
    th = mixed_tuple_theory(inst, [(1, x)])
    assert th.present == (False,)  # overwritten by later letters


def test_mixed_tuple_index_errors(rng):
    inst = word_instance(append_delta(), rng, 2)
    with pytest.raises(IndexError):
        mixed_tuple_theory(inst, [(5, 0)])
    with pytest.raises(IndexError):
        mixed_tuple_theory(inst, [(1, 424242)])


# -- iteration ----------------------------------------------------------------

def test_iterate_zero_is_identity(rng):
    s = random_word_structure(rng)
    out = iterate_qf(reverse_interp(), s, 0)
    assert structures_isomorphic(out, s)


def test_iterate_reverse_parity(rng):
    rev = reverse_interp()
    for _ in range(10):
        s = random_word_structure(rng)
        even = iterate_qf(rev, s, 10**6)
        assert structures_isomorphic(even, s)
        odd = iterate_qf(rev, s, 10**6 + 1)
        assert structures_isomorphic(odd, apply_interp(rev, s))


def test_iterate_matches_direct_iteration(rng):
    cases = 0
    while cases < 200:
        for name, interp in endo_suite():
            s = random_word_structure(rng)
            n = rng.randint(0, 12)
            fast = iterate_qf(interp, s, n)
            slow = s
            for _ in range(n):
                slow = apply_interp(interp, slow)
            assert structures_isomorphic(fast, slow), name
            cases += 1


def test_iterate_addition_law(rng):
    for name, interp in endo_suite():
        s = random_word_structure(rng)
        m, n = rng.randint(0, 9), rng.randint(0, 9)
        a = iterate_qf(interp, s, m + n)
        b = iterate_qf(interp, iterate_qf(interp, s, m), n)
        assert structures_isomorphic(a, b), name


def test_iterate_composition_budget(rng):
    import math

    s = random_word_structure(rng, max_len=5)
    n = 10**6
    stats = IterationStats()
    t0 = time.time()
    iterate_qf(reverse_interp(), s, n, stats)
    elapsed = time.time() - t0
    assert stats.compositions <= 2 * math.log2(n)
    assert elapsed < 1.0


def test_iterate_large_n_supported(rng):
    s = random_word_structure(rng, max_len=3)
    out = iterate_qf(reverse_interp(), s, 2**62)
    assert structures_isomorphic(out, s)  # even power


def test_iterate_rejects_non_endo():
    from foldreg.delta_suite import append_delta

    s = random_word_structure(random.Random(1))
    with pytest.raises(ValueError):
        iterate_qf(append_delta(), s, 3)


def test_stream_fold_linear_time_sanity(rng):
    """Wall clock grows roughly linearly in n (soft sanity bound)."""
    delta = append_delta()

    def run(n):
        rng2 = random.Random(3)
        inst = word_instance(delta, rng2, n)
        t0 = time.time()
        stream_fold(inst)
        return time.time() - t0

    run(8)  # warm the caches
    t_small, t_big = run(30), run(60)
    # quadratic pair tracking is unavoidable; guard against worse blowups
    assert t_big < 40 * max(t_small, 1e-4)


def test_transform_monoid_laws(rng):
    """Composition of theory transforms is associative; the identity
    interpretation induces the identity transform."""
    from foldreg.fold_stream import IterationStats, _compose_transform
    from foldreg.qf_logic import identity_interp, theory_transition

    theories = set()
    for _ in range(60):
        s = random_word_structure(rng)
        tup = tuple(rng.choice(s.universe) if s.universe else None
                    for _ in range(2))
        theories.add(theory_of(s, tup))
    ident = identity_interp(STATE_VOCAB)
    for th in theories:
        assert theory_transition(ident, th) == th
    from foldreg.delta_suite import keep_left_interp, swap_labels_interp

    interps = [reverse_interp(), swap_labels_interp(), keep_left_interp()]
    closed = set(theories)
    frontier = list(closed)
    while frontier:
        th = frontier.pop()
        for interp in interps:
            nxt = theory_transition(interp, th)
            if nxt not in closed:
                closed.add(nxt)
                frontier.append(nxt)
    transforms = [{th: theory_transition(interp, th) for th in closed}
                  for interp in interps]
    stats = IterationStats()
    f, g, h = transforms
    left = _compose_transform(_compose_transform(f, g, stats), h, stats)
    right = _compose_transform(f, _compose_transform(g, h, stats), stats)
    assert left == right
