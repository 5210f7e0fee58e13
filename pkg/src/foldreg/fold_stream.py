"""Streaming evaluation of folds of quantifier-free interpretations.

A fold instance is an initial state structure and a sequence of letter
structures, stepped by one quantifier-free interpretation over the pair
vocabulary.  The naive route materializes every intermediate state; the
streaming route tracks, for each small tuple of output candidates, only its
atomic theory, which is propagated left to right through the finite set of
theories.  Iterating an endo-interpretation rides the same finite monoid
with repeated squaring.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .qf_logic import (
    ABSENT,
    AtomicTheory,
    QfInterp,
    apply_interp,
    pair_theory,
    project_theory,
    theory_of,
    theory_transition,
)
from .structures import Structure, Vocabulary, pair_structure, pair_vocab


@dataclass(eq=False)
class FoldInstance:
    """delta : state x letter -> state, an initial state, and the letters."""

    delta: QfInterp
    b0: Structure
    letters: list
    state_vocab: Vocabulary
    letter_vocab: Vocabulary

    def validate(self) -> None:
        if self.delta.in_vocab != pair_vocab(self.state_vocab, self.letter_vocab):
            raise ValueError("delta input vocabulary is not the pair vocabulary")
        if self.delta.out_vocab != self.state_vocab:
            raise ValueError("delta output vocabulary is not the state vocabulary")
        if self.b0.vocab != self.state_vocab:
            raise ValueError("initial state vocabulary mismatch")
        seen = set(self.b0.universe)
        for i, letter in enumerate(self.letters):
            if letter.vocab != self.letter_vocab:
                raise ValueError(f"letter {i} vocabulary mismatch")
            if seen & set(letter.universe):
                raise ValueError("element ids must be globally distinct")
            seen.update(letter.universe)


@dataclass
class FoldStats:
    tuples_tracked: int = 0
    transitions: int = 0
    distinct_theories: int = 0


def naive_fold(inst: FoldInstance) -> Structure:
    """Fold by materializing every intermediate state; the oracle."""
    inst.validate()
    state = inst.b0
    for letter in inst.letters:
        state = apply_interp(inst.delta, pair_structure(state, letter))
    return state


def _letter_theory(cache, letter, ids):
    key = (id(letter), ids)
    th = cache.get(key)
    if th is None:
        th = theory_of(letter, ids)
        cache[key] = th
    return th


class _Propagator:
    """Shared machinery: theory of candidate tuples in the final state."""

    def __init__(self, inst: FoldInstance, stats: "FoldStats | None" = None):
        inst.validate()
        self.inst = inst
        self.stats = stats if stats is not None else FoldStats()
        self.letter_cache: dict = {}
        self.seen_theories: set = set()
        # void prefixes per arity: theory after the first i letters with all
        # positions absent
        self._voids: dict[int, list[AtomicTheory]] = {}

    def _note(self, th: AtomicTheory) -> None:
        self.seen_theories.add(th)

    def step(self, th: AtomicTheory, i: int, entering, ids) -> AtomicTheory:
        """One transition: th is the theory in state i-1; positions in
        ``entering`` pick up the letter elements ``ids``."""
        k = th.arity
        keep = tuple(p for p in range(k) if p not in entering)
        sides = tuple("R" if p in entering else "L" for p in range(k))
        th_state = project_theory(th, keep) if entering else th
        th_letter = _letter_theory(self.letter_cache, self.inst.letters[i - 1], ids)
        combined = pair_theory(th_state, th_letter, sides)
        out = theory_transition(self.inst.delta, combined)
        self.stats.transitions += 1
        self._note(out)
        return out

    def voids(self, arity: int):
        seq = self._voids.get(arity)
        if seq is None:
            th = theory_of(self.inst.b0, (ABSENT,) * arity)
            seq = [th]
            for i in range(1, len(self.inst.letters) + 1):
                th = self.step(th, i, frozenset(), ())
                seq.append(th)
            self._voids[arity] = seq
        return seq

    def final_theory(self, ids, srcs) -> AtomicTheory:
        """Theory of the tuple in the final state; srcs[i] is 0 for initial
        state elements and j for elements of letter j."""
        self.stats.tuples_tracked += 1
        n = len(self.inst.letters)
        k = len(ids)
        if 0 in srcs or k == 0:
            th = theory_of(
                self.inst.b0,
                tuple(x if s == 0 else ABSENT for x, s in zip(ids, srcs)))
            start = 1
        else:
            first = min(srcs)
            th = self.voids(k)[first - 1]
            start = first
        self._note(th)
        for i in range(start, n + 1):
            entering = frozenset(p for p in range(k) if srcs[p] == i)
            letter_ids = tuple(ids[p] for p in range(k) if srcs[p] == i)
            th = self.step(th, i, entering, letter_ids)
        return th


def stream_fold(inst: FoldInstance, stats: "FoldStats | None" = None) -> Structure:
    """The fold without materializing intermediate states.

    Output element ids reuse the candidate ids, so agreement with the naive
    fold is plain structure equality.  Tuples propagate independently of
    one another (the caches are shared read-only), so the per-tuple work
    could run data-parallel; the assembled result does not depend on the
    order tuples are processed in.
    """
    prop = _Propagator(inst, stats)
    candidates: list[tuple[int, int]] = [(x, 0) for x in inst.b0.universe]
    for j, letter in enumerate(inst.letters, start=1):
        candidates.extend((x, j) for x in letter.universe)
    grade_of = dict(inst.b0.grades)
    for letter in inst.letters:
        grade_of.update(letter.grades)

    # universe from singleton tuples
    survivors: list[tuple[int, int]] = []
    for x, src in candidates:
        th = prop.final_theory((x,), (src,))
        if th.present[0]:
            survivors.append((x, src))
    universe = tuple(sorted(x for x, _ in survivors))

    relations: dict[str, frozenset] = {}
    nullary_th = None
    for name, arity in inst.state_vocab.rels:
        if arity == 0:
            if nullary_th is None:
                nullary_th = prop.final_theory((), ())
            relations[name] = frozenset({()} if name in nullary_th.nullary
                                        else set())
        elif arity == 1:
            facts = set()
            for x, src in survivors:
                th = prop.final_theory((x,), (src,))
                if (name, (0,)) in th.atoms:
                    facts.add((x,))
            relations[name] = frozenset(facts)
        else:
            facts = set()
            for combo in itertools.product(survivors, repeat=arity):
                ids = tuple(x for x, _ in combo)
                srcs = tuple(s for _, s in combo)
                th = prop.final_theory(ids, srcs)
                if (name, tuple(range(arity))) in th.atoms:
                    facts.add(ids)
            relations[name] = frozenset(facts)
    if stats is not None:
        stats.distinct_theories = len(prop.seen_theories)
    grades = {x: grade_of[x] for x in universe}
    return Structure(inst.state_vocab, universe, relations, grades)


def mixed_tuple_theory(inst: FoldInstance, tup) -> AtomicTheory:
    """Theory in the final state of a tuple given as (index, id) pairs,
    index 0 meaning the initial state and i >= 1 the i-th letter.

    Recursion on the maximal index: the theory of the positions below it,
    one transition that lets the letter elements enter, then plain suffix
    propagation.
    """
    inst.validate()
    n = len(inst.letters)
    for index, x in tup:
        if index == 0:
            if x not in inst.b0.universe:
                raise IndexError(f"{x} is not an element of the initial state")
        elif not 1 <= index <= n:
            raise IndexError(f"letter index {index} out of range")
        elif x not in inst.letters[index - 1].universe:
            raise IndexError(f"{x} is not an element of letter {index}")
    letter_cache: dict = {}

    def through(th: AtomicTheory, start: int, end: int) -> AtomicTheory:
        k = th.arity
        for i in range(start, end + 1):
            sides = ("L",) * k
            th_letter = _letter_theory(letter_cache, inst.letters[i - 1], ())
            combined = pair_theory(th, th_letter, sides)
            th = theory_transition(inst.delta, combined)
        return th

    def rec(tup_part, upto: int) -> AtomicTheory:
        """Theory of tup_part in the state after ``upto`` letters."""
        indices = [i for i, _ in tup_part]
        i_max = max(indices, default=0)
        if i_max == 0:
            th = theory_of(inst.b0, tuple(x for _, x in tup_part))
            return through(th, 1, upto)
        below_positions = [p for p, (i, _) in enumerate(tup_part) if i < i_max]
        entering = [p for p, (i, _) in enumerate(tup_part) if i == i_max]
        th_below = rec([tup_part[p] for p in below_positions], i_max - 1)
        sides = tuple("R" if p in entering else "L" for p in range(len(tup_part)))
        th_letter = _letter_theory(
            letter_cache, inst.letters[i_max - 1],
            tuple(tup_part[p][1] for p in entering))
        combined = pair_theory(th_below, th_letter, sides)
        th = theory_transition(inst.delta, combined)
        return through(th, i_max + 1, upto)

    return rec(list(tup), n)


# ---------------------------------------------------------------------------
# Function iteration
# ---------------------------------------------------------------------------

# A theory transform is the action of an interpretation (or a power of one)
# on the finite set of atomic theories: a dict from theory to theory over a
# transition-closed domain.  Composition of two transforms is one monoid
# operation, whatever mix of arities the domain holds.
TheoryTransform = dict


@dataclass
class IterationStats:
    compositions: int = 0
    reachable: int = 0


def _compose_transform(first: dict, second: dict, stats: IterationStats) -> dict:
    stats.compositions += 1
    return {k: second[v] for k, v in first.items()}


def _transform_power(base: dict, n: int, stats: IterationStats) -> dict:
    """base^n over the finite monoid of theory transforms, by squaring."""
    result = None
    while n:
        if n & 1:
            result = (dict(base) if result is None
                      else _compose_transform(result, base, stats))
        n >>= 1
        if n:
            base = _compose_transform(base, base, stats)
    if result is None:
        return {}  # identity; handled by the caller
    return result


def iterate_qf(interp: QfInterp, s: Structure, n: int,
               stats: "IterationStats | None" = None) -> Structure:
    """f^n(A) for an endo-interpretation, in O(log n) monoid compositions."""
    if interp.in_vocab != interp.out_vocab:
        raise ValueError("iteration needs an endo-interpretation")
    if s.vocab != interp.in_vocab:
        raise ValueError("structure vocabulary mismatch")
    if n < 0:
        raise ValueError("iteration count must be nonnegative")
    if stats is None:
        stats = IterationStats()
    if n == 0:
        return s

    # one monoid element covers the action on theories of every needed arity
    arities = sorted({a for _, a in interp.out_vocab.rels} | {1})
    init: dict[int, dict] = {}
    reachable: set = set()
    for arity in arities:
        init[arity] = {}
        if arity == 0:
            init[arity][()] = theory_of(s, ())
        else:
            for tup in itertools.product(s.universe, repeat=arity):
                init[arity][tup] = theory_of(s, tup)
        reachable.update(init[arity].values())
    frontier = list(reachable)
    while frontier:
        th = frontier.pop()
        nxt = theory_transition(interp, th)
        if nxt not in reachable:
            reachable.add(nxt)
            frontier.append(nxt)
    stats.reachable = len(reachable)
    base = {th: theory_transition(interp, th) for th in reachable}
    power = _transform_power(base, n, stats)
    finals = {arity: {tup: power[th] for tup, th in table.items()}
              for arity, table in init.items()}

    universe = tuple(x for x in s.universe if finals[1][(x,)].present[0])
    kept = set(universe)
    relations: dict[str, frozenset] = {}
    for name, arity in interp.out_vocab.rels:
        if arity == 0:
            th = finals[0][()]
            relations[name] = frozenset({()} if name in th.nullary else set())
        else:
            facts = set()
            for tup, th in finals[arity].items():
                if all(x in kept for x in tup) and \
                        (name, tuple(range(arity))) in th.atoms:
                    facts.add(tup)
            relations[name] = frozenset(facts)
    grades = {x: s.grades[x] for x in universe}
    return Structure(interp.out_vocab, universe, relations, grades)
