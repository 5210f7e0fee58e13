"""Named derivations: each pairs a term with a directly-coded reference.

The catalog instantiates every derivation at small fixed alphabets; the
builders are generic in the element types.  check_derivation evaluates the
weakened term against the reference on random inputs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .calculus import (
    BangFunctor,
    Compose,
    CoProdFunctor,
    FLAVOR_LINEAR,
    FLAVOR_POLY,
    FLAVOR_QF,
    FLAVOR_REDUCED,
    MapFunctor,
    Prime,
    ProdFunctor,
    SafeFold,
    SystemFlavor,
    Term,
    infer_type,
    make_weak,
)
from .evaluator import eval_term
from .finite import unit_variant, units_coprod, variant_of
from .termlib import (
    binconcat,
    cases,
    constant_into,
    empty_list,
    erase_bangs,
    identity,
    prepend,
    seq_compose,
    shuffle,
)
from .types_values import (
    Bang,
    CoProd,
    GradedType,
    InLV,
    InRV,
    ListOf,
    PairV,
    Prod,
    SeqV,
    UNIT,
    Unit,
    UnitLeaf,
    Value,
    bangs,
    values_equal,
)


@dataclass
class NamedDerivation:
    name: str
    term: Term              # the strong derivation (domain may carry !s)
    flavor: SystemFlavor
    weak_k: int
    reference: object       # Value -> Value
    note: str = ""

    def full_term(self) -> Term:
        return make_weak(self.term, self.weak_k, self.flavor)

    def signature(self):
        return infer_type(self.full_term(), self.flavor)


# ---------------------------------------------------------------------------
# Small case-analysis helpers
# ---------------------------------------------------------------------------

def inject_term(i: int, parts) -> Term:
    """parts[i] -> right-comb co-product of parts."""
    parts = list(parts)
    n = len(parts)

    def comb(js):
        t = parts[js[-1]]
        for j in reversed(js[:-1]):
            t = CoProd(parts[j], t)
        return t

    term = None
    if i < n - 1:
        term = Prime("coproj1", (parts[i], comb(list(range(i + 1, n)))))
    for j in range(i - 1, -1, -1):
        step = Prime("coproj2", (parts[j], comb(list(range(j + 1, n)))))
        term = step if term is None else Compose(term, step)
    return term if term is not None else identity(parts[-1])


def case_left(left_t: GradedType, right_t: GradedType, payload: GradedType,
              branch_l: Term, branch_r: Term, cod: GradedType) -> Term:
    """((left_t + right_t) x payload) -> cod by case analysis on the left."""
    return seq_compose(
        Prime("comm_prod_fwd", (CoProd(left_t, right_t), payload)),
        Prime("dist_fwd", (payload, left_t, right_t)),
        CoProdFunctor(Prime("comm_prod_fwd", (payload, left_t)),
                      Prime("comm_prod_fwd", (payload, right_t))),
        cases(branch_l, branch_r, cod),
    )


def comb_case_with_payload(parts, payload: GradedType, branches,
                           cod: GradedType) -> Term:
    """(comb(parts) x payload) -> cod; branches[i]: (parts[i] x payload) -> cod."""
    parts = list(parts)
    branches = list(branches)
    if len(parts) == 1:
        return branches[0]
    rest_t = parts[-1]
    for p in reversed(parts[1:-1]):
        rest_t = CoProd(p, rest_t)
    rest_term = comb_case_with_payload(parts[1:], payload, branches[1:], cod)
    return case_left(parts[0], rest_t, payload, branches[0], rest_term, cod)


def case_over_finite(payload: GradedType, fin: GradedType, branch,
                     cod: GradedType, _wrap=None) -> Term:
    """(payload x fin) -> cod for a finite fin; branch(letter_value) yields
    the per-letter term of type (payload x 1) -> cod."""
    if _wrap is None:
        _wrap = lambda v: v
    if isinstance(fin, Unit):
        return branch(_wrap(UnitLeaf(0)))
    if isinstance(fin, CoProd):
        lt = case_over_finite(payload, fin.left, branch, cod,
                              lambda v: _wrap(InLV(v)))
        rt = case_over_finite(payload, fin.right, branch, cod,
                              lambda v: _wrap(InRV(v)))
        return seq_compose(Prime("dist_fwd", (payload, fin.left, fin.right)),
                           cases(lt, rt, cod))
    raise ValueError(f"not a finite type: {fin!r}")


# ---------------------------------------------------------------------------
# Letter/value conversions for the references
# ---------------------------------------------------------------------------

def letters_of(v: Value, n: int):
    """Word (tuple of variant indices) from a value of (1+..+1)*."""
    return tuple(variant_of(item, n)[0] for item in v.items)


def word_value(word, n: int) -> SeqV:
    return SeqV(tuple(unit_variant(i, n, pos) for pos, i in enumerate(word)))


# ---------------------------------------------------------------------------
# Fold-based building blocks shared between derivations
# ---------------------------------------------------------------------------

def destructor_inner(sigma: GradedType) -> Term:
    """!(sigma*) -> 1 + sigma* x sigma, splitting off the last element."""
    state = CoProd(UNIT, Prod(ListOf(sigma), sigma))
    init = seq_compose(erase_bangs(UNIT, 1),
                       Prime("coproj1", (UNIT, Prod(ListOf(sigma), sigma))))
    branch_empty = seq_compose(
        ProdFunctor(empty_list(sigma, UNIT), identity(sigma)),
        Prime("coproj2", (UNIT, Prod(ListOf(sigma), sigma))))
    branch_snoc = seq_compose(
        ProdFunctor(Prime("append", (sigma,)), identity(sigma)),
        Prime("coproj2", (UNIT, Prod(ListOf(sigma), sigma))))
    step = case_left(UNIT, Prod(ListOf(sigma), sigma), sigma,
                     branch_empty, branch_snoc, state)
    return SafeFold(init, step, 1)


def last_inner(sigma: GradedType, fallback: Value) -> Term:
    """!(sigma*) -> sigma; ``fallback`` is returned for the empty list."""
    state = CoProd(UNIT, Prod(ListOf(sigma), sigma))
    return seq_compose(
        destructor_inner(sigma),
        cases(constant_into(fallback, sigma),
              Prime("proj2", (ListOf(sigma), sigma)), sigma))


def tail_of_reversed_inner(pi: GradedType) -> Term:
    """!(pi*) -> pi*, dropping the first element (empty stays empty)."""
    return seq_compose(
        BangFunctor(Prime("reverse", (pi,))),
        destructor_inner(pi),
        cases(empty_list(pi, UNIT), Prime("proj1", (ListOf(pi), pi)),
              ListOf(pi)),
        Prime("reverse", (pi,)),
    )


def prefixes_inner(sigma: GradedType, reverse_prefixes: bool) -> Term:
    """!!(sigma*) -> sigma**.

    With reverse_prefixes the result is [[an..a1],[a(n-1)..a1],...,[a1]];
    otherwise the plain [[a1],[a1,a2],...,[a1..an]].
    """
    slist = ListOf(sigma)
    state = Prod(ListOf(slist), Bang(slist))
    # initial state: a pair of empty lists, the second one upgraded
    init = seq_compose(
        Prime("absorption", (UNIT,)),
        ProdFunctor(BangFunctor(empty_list(sigma, UNIT)),
                    empty_list(slist, UNIT)),
        Prime("comm_prod_fwd", (Bang(slist), ListOf(slist))),
    )
    # step: extend the stored word inside the upgrade, absorb a copy of it,
    # and push the copy onto the prefix list
    if reverse_prefixes:
        extend = seq_compose(Prime("comm_prod_fwd", (slist, sigma)),
                             prepend(sigma))
        push = prepend(slist)
    else:
        extend = Prime("append", (sigma,))
        push = seq_compose(Prime("comm_prod_fwd", (slist, ListOf(slist))),
                           Prime("append", (slist,)))
    dom = Prod(state, Bang(sigma))
    pre, _ = shuffle(dom, ((0, 0), ((0, 1), (1,))))
    inner = seq_compose(
        Prime("bang_prod_bwd", (slist, sigma)),
        BangFunctor(extend),
        Prime("absorption", (slist,)),
    )
    mid = Prod(ListOf(slist), Prod(Bang(slist), slist))
    post, _ = shuffle(mid, (((1, 1), (0,)), (1, 0)))
    step = seq_compose(
        pre,
        ProdFunctor(identity(ListOf(slist)), inner),
        post,
        ProdFunctor(push, identity(Bang(slist))),
    )
    fold = SafeFold(init, step, 1)
    return seq_compose(
        BangFunctor(Prime("bang_list_fwd", (sigma,))),
        fold,
        Prime("proj1", (ListOf(slist), Bang(slist))),
    )


def split_inner(sigma: GradedType) -> Term:
    """!^6(sigma*) -> (sigma* x sigma*)*, all cut points of the input."""
    slist = ListOf(sigma)
    pair_t = Prod(slist, slist)
    fallback = unit_variant(0, _width(sigma), 0)

    # per item X = [pre_n,...,pre_j]: (pre_j, the letters after the cut)
    item = seq_compose(
        BangFunctor(destructor_inner(slist)),
        Prime("bang_coprod_fwd", (UNIT, Prod(ListOf(slist), slist))),
        cases(
            seq_compose(erase_bangs(UNIT, 1),
                        Prime("create_empty", (UNIT, sigma)),
                        ProdFunctor(empty_list(sigma, UNIT), identity(slist)),
                        ),
            seq_compose(
                Prime("bang_prod_fwd", (ListOf(slist), slist)),
                ProdFunctor(
                    seq_compose(
                        Prime("bang_list_fwd", (slist,)),
                        MapFunctor(last_inner(sigma, fallback)),
                        Prime("reverse", (sigma,)),
                    ),
                    erase_bangs(slist, 1),
                ),
                Prime("comm_prod_fwd", (slist, slist)),
            ),
            pair_t),
    )
    # A = plain prefixes then reverse; B = plain prefixes over lists
    stage_a = seq_compose(prefixes_inner(sigma, False),
                          Prime("reverse", (slist,)))
    stage_b = prefixes_inner(slist, False)
    pipeline = seq_compose(
        BangFunctor(BangFunctor(seq_compose(
            BangFunctor(BangFunctor(stage_a)), stage_b))),
        BangFunctor(Prime("bang_list_fwd", (ListOf(slist),))),
        Prime("bang_list_fwd", (Bang(ListOf(slist)),)),
        MapFunctor(item),
        Prime("reverse", (pair_t,)),
    )
    top = Prod(Bang(bangs(slist, 5)), bangs(slist, 5))
    return seq_compose(
        Prime("absorption", (bangs(slist, 5),)),
        ProdFunctor(
            pipeline,
            seq_compose(erase_bangs(slist, 5),
                        Prime("create_empty", (slist, sigma)),
                        Prime("comm_prod_fwd", (slist, slist))),
        ),
        Prime("comm_prod_fwd", (ListOf(pair_t), pair_t)),
        prepend(pair_t),
    )


def _width(t: GradedType) -> int:
    """Number of variants of a finite co-product of units."""
    n = 1
    while isinstance(t, CoProd):
        n += 1
        t = t.right
    return n


# ---------------------------------------------------------------------------
# References
# ---------------------------------------------------------------------------

def _seq(v: Value) -> tuple:
    return v.items


def ref_reverse(v):
    return SeqV(v.items[::-1])


def ref_concat(v):
    return SeqV(tuple(x for item in v.items for x in item.items))


def ref_append(v):
    return SeqV(v.first.items + (v.second,))


def ref_list_distribute(v):
    return PairV(SeqV(tuple(p.first for p in v.items)),
                 SeqV(tuple(p.second for p in v.items)))


def ref_create_empty(v):
    return PairV(v, SeqV(()))


def ref_prefixes_plain(v):
    items = v.items
    return SeqV(tuple(SeqV(items[:i]) for i in range(1, len(items) + 1)))


def ref_prefixes_rev(v):
    items = v.items
    return SeqV(tuple(SeqV(items[:i][::-1])
                      for i in range(len(items), 0, -1)))


def ref_split(v):
    items = v.items
    return SeqV(tuple(PairV(SeqV(items[:i]), SeqV(items[i:]))
                      for i in range(len(items) + 1)))


def ref_squaring(v):
    return SeqV(v.items * len(v.items))


def ref_square_underline(v):
    items = v.items
    out = []
    for i in range(len(items)):
        for j, x in enumerate(items):
            out.append(InRV(x) if i == j else InLV(x))
    return SeqV(tuple(out))


def ref_reverse_linear(v):
    return SeqV(v.items[::-1])


def ref_identity_linear(v):
    return SeqV(v.items)


# ---------------------------------------------------------------------------
# The catalog
# ---------------------------------------------------------------------------

def _sigma(n: int) -> GradedType:
    return units_coprod(n)


def prime_entry(name: str, prime: Term, reference) -> NamedDerivation:
    return NamedDerivation(name, prime, FLAVOR_QF, 0, reference)


def build_group_mult() -> NamedDerivation:
    """Multiplication in Z/2 by folding the group operation."""
    g = _sigma(2)

    def op(v):
        x, _ = variant_of(v.first, 2)
        y, _ = variant_of(v.second, 2)
        return unit_variant((x + y) % 2, 2)

    from .termlib import finite_fun

    step = finite_fun(Prod(g, g), g, op)
    init = seq_compose(erase_bangs(UNIT, 1), constant_into(unit_variant(0, 2), g))
    term = SafeFold(init, step, 1)

    def reference(v):
        total = sum(variant_of(x, 2)[0] for x in v.items) % 2
        return unit_variant(total, 2)

    return NamedDerivation("group_mult", term, FLAVOR_POLY, 1, reference,
                           note="Z/2 under addition")


def build_finite_fun_entry() -> NamedDerivation:
    """Successor modulo 3 on a three-letter set."""
    three = _sigma(3)

    def succ(v):
        i, _ = variant_of(v, 3)
        return unit_variant((i + 1) % 3, 3)

    from .termlib import finite_fun

    term = finite_fun(three, three, succ)

    def reference(v):
        i, _ = variant_of(v, 3)
        return unit_variant((i + 1) % 3, 3)

    return NamedDerivation("finite_fun_succ3", term, FLAVOR_QF, 0, reference)


def build_dfa() -> NamedDerivation:
    """Acceptor for words with an even number of the first letter."""
    sigma = _sigma(2)
    q = _sigma(2)  # parity of letter-0 count

    def trans(v):
        state, _ = variant_of(v.first, 2)
        letter, _ = variant_of(v.second, 2)
        return unit_variant(state ^ (1 - letter) if letter == 0 else state, 2)

    from .termlib import finite_fun

    step = finite_fun(Prod(q, sigma), q, trans)
    init = seq_compose(erase_bangs(UNIT, 1), constant_into(unit_variant(0, 2), q))
    accept = finite_fun(q, _sigma(2),
                        lambda v: unit_variant(variant_of(v, 2)[0], 2))
    term = seq_compose(SafeFold(init, step, 1), accept)

    def reference(v):
        word = letters_of(v, 2)
        parity = sum(1 for a in word if a == 0) % 2
        return unit_variant(parity, 2)

    return NamedDerivation("dfa_even_a", term, FLAVOR_POLY, 1, reference,
                           note="0 = accept (even number of a's)")


def build_mealy() -> NamedDerivation:
    """A Mealy machine: outputs the previous letter (first letter echoes)."""
    n = 2
    sigma = _sigma(n)
    out_list = ListOf(sigma)
    parts = [out_list] * n  # state q_i remembers the last letter i
    state = CoProd(out_list, out_list)

    def branch(q_idx):
        def per_letter(letter_value):
            a_idx, _ = variant_of(letter_value, n)
            # output the remembered letter, move to state a_idx
            emitted = q_idx
            return seq_compose(
                ProdFunctor(identity(out_list),
                            constant_into(unit_variant(emitted, n),
                                          sigma)),
                Prime("append", (sigma,)),
                inject_term(a_idx, parts),
            )
        return case_over_finite(out_list, sigma, per_letter, state)

    step = comb_case_with_payload(parts, sigma, [branch(i) for i in range(n)],
                                  state)
    init = seq_compose(erase_bangs(UNIT, 1), empty_list(sigma, UNIT),
                       inject_term(0, parts))
    collect = cases(identity(out_list), identity(out_list), out_list)
    term = seq_compose(SafeFold(init, step, 1), collect)

    def reference(v):
        word = letters_of(v, n)
        out = []
        last = 0
        for a in word:
            out.append(last)
            last = a
        return word_value(out, n)

    return NamedDerivation("mealy_delay", term, FLAVOR_POLY, 1, reference,
                           note="emits the previous letter, 0 first")


def build_list_destructor() -> NamedDerivation:
    sigma = _sigma(2)

    def reference(v):
        if not v.items:
            return InLV(UnitLeaf(0))
        return InRV(PairV(SeqV(v.items[:-1]), v.items[-1]))

    return NamedDerivation("list_destructor", destructor_inner(sigma),
                           FLAVOR_POLY, 1, reference)


def build_prefixes(reverse_prefixes: bool) -> NamedDerivation:
    sigma = _sigma(3)
    name = "prefixes_rev" if reverse_prefixes else "prefixes_plain"
    ref = ref_prefixes_rev if reverse_prefixes else ref_prefixes_plain
    return NamedDerivation(name, prefixes_inner(sigma, reverse_prefixes),
                           FLAVOR_POLY, 2, ref)


def build_split() -> NamedDerivation:
    sigma = _sigma(3)
    return NamedDerivation("split", split_inner(sigma), FLAVOR_POLY, 6,
                           ref_split)


def build_block() -> NamedDerivation:
    sigma, gamma = _sigma(2), _sigma(2)
    sides = (ListOf(sigma), ListOf(gamma))
    cur = CoProd(*sides)
    opt_cur = CoProd(UNIT, cur)
    blocks = ListOf(cur)
    state = Prod(blocks, opt_cur)

    def inj_side(which):
        return Prime("coproj1" if which == 0 else "coproj2", sides)

    def start_block(which, elem_t):
        """(blocks x elem) -> state: open a fresh current block [a]."""
        return ProdFunctor(
            identity(blocks),
            seq_compose(Prime("list_unit", (elem_t,)), inj_side(which),
                        Prime("coproj2", (UNIT, cur))))

    def same_side(which, elem_t):
        """(elem* x (blocks x elem)) -> state: extend the current block."""
        lst = ListOf(elem_t)
        rewire, _ = shuffle(Prod(lst, Prod(blocks, elem_t)),
                            ((1, 0), ((0,), (1, 1))))
        return seq_compose(
            rewire,
            ProdFunctor(identity(blocks),
                        seq_compose(Prime("append", (elem_t,)),
                                    inj_side(which),
                                    Prime("coproj2", (UNIT, cur)))))

    def other_side(which, elem_t, other_list):
        """(other* x (blocks x elem)) -> state: close the block, open a new one."""
        rewire, _ = shuffle(Prod(other_list, Prod(blocks, elem_t)),
                            (((1, 0), (0,)), (1, 1)))
        close_push = seq_compose(
            ProdFunctor(identity(blocks), inj_side(1 - which)),
            Prime("append", (cur,)))
        return seq_compose(rewire,
                           ProdFunctor(close_push, identity(elem_t)),
                           start_block(which, elem_t))

    def on_letter(which):
        elem_t = sigma if which == 0 else gamma
        lhs = Prod(blocks, elem_t)
        rewire, _ = shuffle(Prod(state, elem_t), ((0, 1), ((0, 0), (1,))))
        no_cur = seq_compose(Prime("proj2", (UNIT, lhs)),
                             start_block(which, elem_t))
        if which == 0:
            with_cur = case_left(sides[0], sides[1], lhs,
                                 same_side(0, sigma),
                                 other_side(0, sigma, sides[1]), state)
        else:
            with_cur = case_left(sides[0], sides[1], lhs,
                                 other_side(1, gamma, sides[0]),
                                 same_side(1, gamma), state)
        return seq_compose(rewire,
                           case_left(UNIT, cur, lhs, no_cur, with_cur, state))

    step = seq_compose(
        Prime("dist_fwd", (state, sigma, gamma)),
        cases(on_letter(0), on_letter(1), state),
    )

    init = seq_compose(
        erase_bangs(UNIT, 1),
        Prime("create_empty", (UNIT, cur)),
        Prime("comm_prod_fwd", (UNIT, blocks)),
        ProdFunctor(identity(blocks), Prime("coproj1", (UNIT, cur))),
    )
    close = case_left(UNIT, cur, blocks,
                      Prime("proj2", (UNIT, blocks)),
                      seq_compose(Prime("comm_prod_fwd", (cur, blocks)),
                                  Prime("append", (cur,))),
                      blocks)
    post = seq_compose(Prime("comm_prod_fwd", (blocks, opt_cur)), close)
    term = seq_compose(SafeFold(init, step, 1), post)

    def reference(v):
        groups = []
        cur_side, cur_items = None, []
        for item in v.items:
            side = 0 if isinstance(item, InLV) else 1
            if side != cur_side and cur_side is not None:
                groups.append((cur_side, cur_items))
                cur_items = []
            cur_side = side
            cur_items.append(item.inner)
        if cur_side is not None:
            groups.append((cur_side, cur_items))
        wrap = lambda side, xs: (InLV if side == 0 else InRV)(SeqV(tuple(xs)))
        return SeqV(tuple(wrap(s, xs) for s, xs in groups))

    return NamedDerivation("block", term, FLAVOR_POLY, 1, reference)


def build_square_underline() -> NamedDerivation:
    sigma = _sigma(2)
    slist = ListOf(sigma)
    marked = CoProd(sigma, sigma)
    fallback = unit_variant(0, 2, 0)

    head_chunk = seq_compose(
        ProdFunctor(MapFunctor(Prime("coproj1", (sigma, sigma))),
                    Prime("coproj2", (sigma, sigma))),
        Prime("append", (marked,)))
    per_item = seq_compose(
        BangFunctor(destructor_inner(slist)),
        Prime("bang_coprod_fwd", (UNIT, Prod(ListOf(slist), slist))),
        cases(
            seq_compose(erase_bangs(UNIT, 1), empty_list(marked, UNIT)),
            seq_compose(
                Prime("bang_prod_fwd", (ListOf(slist), slist)),
                ProdFunctor(
                    seq_compose(
                        Prime("bang_list_fwd", (slist,)),
                        MapFunctor(last_inner(sigma, fallback)),
                        Prime("reverse", (sigma,)),
                        MapFunctor(Prime("coproj1", (sigma, sigma))),
                    ),
                    seq_compose(destructor_inner(sigma),
                                cases(empty_list(marked, UNIT), head_chunk,
                                      ListOf(marked))),
                ),
                Prime("comm_prod_fwd", (ListOf(marked), ListOf(marked))),
                binconcat(marked),
            ),
            ListOf(marked)),
    )
    stage_a = seq_compose(prefixes_inner(sigma, False),
                          Prime("reverse", (slist,)))
    stage_b = seq_compose(prefixes_inner(slist, False),
                          Prime("reverse", (ListOf(slist),)))
    term = seq_compose(
        BangFunctor(BangFunctor(seq_compose(
            BangFunctor(BangFunctor(stage_a)), stage_b))),
        BangFunctor(Prime("bang_list_fwd", (ListOf(slist),))),
        Prime("bang_list_fwd", (Bang(ListOf(slist)),)),
        MapFunctor(per_item),
        Prime("concat", (marked,)),
    )
    return NamedDerivation("square_underline", term, FLAVOR_POLY, 6,
                           ref_square_underline)


def build_squaring() -> NamedDerivation:
    sigma = _sigma(3)
    pair_t = Prod(ListOf(sigma), ListOf(sigma))
    term = seq_compose(
        BangFunctor(split_inner(sigma)),
        tail_of_reversed_inner(pair_t),
        MapFunctor(binconcat(sigma)),
        Prime("concat", (sigma,)),
    )
    return NamedDerivation("squaring", term, FLAVOR_POLY, 7, ref_squaring)


def build_weak_map() -> NamedDerivation:
    """Reduced-system map: swap a two-letter alphabet letterwise."""
    two = _sigma(2)
    from .termlib import finite_fun

    f = finite_fun(two, two, lambda v: unit_variant(1 - variant_of(v, 2)[0], 2))
    state = ListOf(two)
    init = seq_compose(
        erase_bangs(UNIT, 1),
        Prime("coproj1", (UNIT, two)),
        Prime("opt_list", (two,)),
    )
    step = seq_compose(
        ProdFunctor(identity(state),
                    seq_compose(f, Prime("coproj2", (UNIT, two)),
                                Prime("opt_list", (two,)))),
        Prime("binary_concat", (two,)),
    )
    term = SafeFold(init, step, 1)

    def reference(v):
        return SeqV(tuple(unit_variant(1 - variant_of(x, 2)[0], 2)
                          for x in v.items))

    return NamedDerivation("weak_map_swap", term, FLAVOR_REDUCED, 1, reference)


def build_duplicate_linear() -> NamedDerivation:
    sigma = _sigma(2)
    slist = ListOf(sigma)
    state = Prod(slist, slist)
    init = seq_compose(
        Prime("lin_absorption", (UNIT,)),
        ProdFunctor(empty_list(sigma, UNIT), empty_list(sigma, UNIT)),
    )
    dom = Prod(state, Bang(sigma))
    rewire, _ = shuffle(Prod(state, Prod(sigma, sigma)),
                        (((0, 0), (1, 0)), ((0, 1), (1, 1))))
    step = seq_compose(
        ProdFunctor(identity(state), Prime("lin_absorption", (sigma,))),
        rewire,
        ProdFunctor(Prime("append", (sigma,)), Prime("append", (sigma,))),
    )
    term = seq_compose(
        BangFunctor(Prime("bang_list_fwd", (sigma,))),
        SafeFold(init, step, 1),
        binconcat(sigma),
    )

    def reference(v):
        return SeqV(v.items + v.items)

    return NamedDerivation("duplicate", term, FLAVOR_LINEAR, 2, reference)


def build_reverse_linear() -> NamedDerivation:
    sigma = _sigma(2)
    state = ListOf(sigma)
    init = seq_compose(Prime("lin_absorption", (UNIT,)),
                       Prime("proj1", (UNIT, UNIT)),
                       empty_list(sigma, UNIT))
    step = seq_compose(Prime("comm_prod_fwd", (state, sigma)), prepend(sigma))
    term = SafeFold(init, step, 1)
    return NamedDerivation("reverse_linear", term, FLAVOR_LINEAR, 1,
                           ref_reverse_linear)


def build_identity_linear() -> NamedDerivation:
    sigma = _sigma(2)
    init = seq_compose(Prime("lin_absorption", (UNIT,)),
                       Prime("proj1", (UNIT, UNIT)),
                       empty_list(sigma, UNIT))
    term = SafeFold(init, Prime("append", (sigma,)), 1)
    return NamedDerivation("identity_linear", term, FLAVOR_LINEAR, 1,
                           ref_identity_linear)


def catalog() -> "list[NamedDerivation]":
    sigma3 = _sigma(3)
    sigma2 = _sigma(2)
    entries = [
        prime_entry("reverse", Prime("reverse", (sigma3,)), ref_reverse),
        prime_entry("concat", Prime("concat", (sigma3,)), ref_concat),
        prime_entry("append", Prime("append", (sigma3,)), ref_append),
        prime_entry("list_distribute",
                    Prime("list_distribute", (sigma3, sigma2)),
                    ref_list_distribute),
        prime_entry("create_empty", Prime("create_empty", (sigma3, sigma2)),
                    ref_create_empty),
        build_finite_fun_entry(),
        build_group_mult(),
        build_mealy(),
        build_dfa(),
        build_list_destructor(),
        build_prefixes(True),
        build_prefixes(False),
        build_split(),
        build_block(),
        build_square_underline(),
        build_squaring(),
        build_weak_map(),
        build_duplicate_linear(),
        build_reverse_linear(),
        build_identity_linear(),
    ]
    return entries


@dataclass
class CheckReport:
    name: str
    trials: int
    passed: bool
    counterexample: object = None


def check_derivation(d: NamedDerivation, trials: int = 1000,
                     max_size: int = 50, seed: int = 0) -> CheckReport:
    """Evaluate the weakened term against the reference on random inputs."""
    from .randgen import random_value

    rng = random.Random(seed)
    full = d.full_term()
    sig = infer_type(full, d.flavor)
    for i in range(trials):
        size = rng.randint(0, max_size)
        v = random_value(sig.dom, rng, max(1, size))
        got = eval_term(full, v)
        want = d.reference(v)
        if not values_equal(got, want):
            return CheckReport(d.name, i + 1, False, (v, got, want))
    return CheckReport(d.name, trials, True)
