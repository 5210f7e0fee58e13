"""Ill-typed encodings of the dangerous folds, for the rejection tests.

Iterated duplication and integer subtraction by folding are the two
standard functions the safe-fold discipline must reject; these builders
produce the natural candidate derivations, which the checker refuses with
a grade violation (when the state keeps its upgrades) or a domain mismatch
(when the step tries to duplicate or destruct without upgrades).
"""
from __future__ import annotations

from .calculus import (
    BangFunctor,
    Prime,
    ProdFunctor,
    SafeFold,
    Term,
)
from .stdlib import case_left, destructor_inner
from .termlib import (
    binconcat,
    cases,
    empty_list,
    erase_bangs,
    identity,
    seq_compose,
)
from .types_values import Bang, CoProd, ListOf, Prod, UNIT, bangs


def _bangf(term: Term, times: int) -> Term:
    for _ in range(times):
        term = BangFunctor(term)
    return term


def _init_counter(j: int, k: int) -> Term:
    """!^k 1 -> !^j 1*, erasing the spare upgrades (needs j <= k)."""
    return seq_compose(
        _bangf(erase_bangs(UNIT, k - j), j),
        _bangf(empty_list(UNIT), j),
    )


def duplication_term(j: int, k: int) -> Term:
    """The doubling fold with state !^j(1*): step absorbs a copy, erases the
    upgrades, and concatenates; the copies land below the state level, so
    the step cannot have the state type and the fold is rejected."""
    counter = ListOf(UNIT)
    state = bangs(counter, j)
    if j == 0:
        step = seq_compose(Prime("proj1", (counter, UNIT)),
                           Prime("absorption", (counter,)),
                           ProdFunctor(erase_bangs(counter, 1),
                                       identity(counter)),
                           binconcat(UNIT))
    else:
        step = seq_compose(
            Prime("proj1", (state, UNIT)),
            Prime("absorption", (bangs(counter, j - 1),)),
            ProdFunctor(erase_bangs(counter, j), erase_bangs(counter, j - 1)),
            binconcat(UNIT),
        )
    return SafeFold(_init_counter(j, k), step, k)


def exp_duplication_term(k: int) -> Term:
    """The graded doubling fold: the state keeps its upgrades so copies can
    be absorbed every step, and the grade side condition fires."""
    counter = ListOf(UNIT)
    state = bangs(counter, k)
    if k == 0:
        step = Prime("proj1", (state, UNIT))
    else:
        step = seq_compose(
            Prime("proj1", (state, UNIT)),
            Prime("absorption", (bangs(counter, k - 1),)),
            Prime("proj1", (state, bangs(counter, k - 1))),
        )
    return SafeFold(_init_counter(k, k), step, k)


def fold_tail_term(k: int) -> Term:
    """Folding increment/decrement over the integers as 1* + 1*: the
    decrement branch needs the list destructor, whose derivation wants an
    upgraded argument, so the natural step does not compose."""
    counter = ListOf(UNIT)
    z = CoProd(counter, counter)
    letter = CoProd(UNIT, UNIT)
    init = seq_compose(erase_bangs(UNIT, k), empty_list(UNIT),
                       Prime("coproj2", (counter, counter)))
    inc = case_left(counter, counter, UNIT,
                    seq_compose(Prime("append", (UNIT,)),
                                Prime("coproj1", (counter, counter))),
                    seq_compose(Prime("append", (UNIT,)),
                                Prime("coproj2", (counter, counter))),
                    z)
    tail_attempt = seq_compose(
        identity(counter),
        destructor_inner(UNIT),  # wants !(1*) but only 1* is available
        cases(empty_list(UNIT), Prime("proj1", (counter, UNIT)), counter),
    )
    dec = seq_compose(
        Prime("proj1", (z, UNIT)),
        cases(seq_compose(tail_attempt, Prime("coproj1", (counter, counter))),
              seq_compose(tail_attempt, Prime("coproj2", (counter, counter))),
              z),
    )
    step = seq_compose(Prime("dist_fwd", (z, UNIT, UNIT)),
                       cases(inc, dec, z))
    return SafeFold(init, step, k)
