"""Seeded random types, values, structures, machines and trees for tests."""
from __future__ import annotations

import random

from .finite import unit_variant
from .sst import LIT, REG, RegisterUpdate, Sst
from .types_values import (
    Bang,
    BangV,
    CoProd,
    GradedType,
    InLV,
    InRV,
    LeafAllocator,
    ListOf,
    PairV,
    Prod,
    SeqV,
    TreeLeafV,
    TreeNodeV,
    UNIT,
    Unit,
    UnitLeaf,
    Value,
    Zero,
)


def random_type(rng: random.Random, depth: int = 3, graded: bool = False,
                allow_zero: bool = False) -> GradedType:
    """Random type; with graded=False the result has no ! constructor."""
    choices = ["unit", "prod", "coprod", "list"]
    if graded:
        choices.append("bang")
    if allow_zero:
        choices.append("zero")
    if depth <= 0:
        return UNIT
    kind = rng.choice(choices)
    if kind == "unit":
        return UNIT
    if kind == "zero":
        from .types_values import ZERO

        return ZERO
    if kind == "prod":
        return Prod(random_type(rng, depth - 1, graded, allow_zero),
                    random_type(rng, depth - 1, graded, allow_zero))
    if kind == "coprod":
        return CoProd(random_type(rng, depth - 1, graded, allow_zero),
                      random_type(rng, depth - 1, graded, allow_zero))
    if kind == "list":
        return ListOf(random_type(rng, depth - 1, graded, allow_zero))
    return Bang(random_type(rng, depth - 1, graded, allow_zero))


def inhabited(t: GradedType) -> bool:
    if isinstance(t, Zero):
        return False
    if isinstance(t, (Prod,)):
        return inhabited(t.left) and inhabited(t.right)
    if isinstance(t, CoProd):
        return inhabited(t.left) or inhabited(t.right)
    if isinstance(t, Bang):
        return inhabited(t.inner)
    return True  # unit, lists (empty list), trees (leaf)


def random_inhabited_type(rng: random.Random, depth: int = 3,
                          graded: bool = False) -> GradedType:
    while True:
        t = random_type(rng, depth, graded)
        if inhabited(t):
            return t


def random_value(t: GradedType, rng: random.Random, size: int = 3,
                 alloc: "LeafAllocator | None" = None) -> Value:
    """Random inhabitant; ``size`` bounds list lengths and tree growth."""
    if alloc is None:
        alloc = LeafAllocator()
    if isinstance(t, Unit):
        return UnitLeaf(alloc.fresh())
    if isinstance(t, Zero):
        raise ValueError("the type 0 has no values")
    if isinstance(t, Prod):
        return PairV(random_value(t.left, rng, size, alloc),
                     random_value(t.right, rng, size, alloc))
    if isinstance(t, CoProd):
        sides = [s for s in ("L", "R")
                 if inhabited(t.left if s == "L" else t.right)]
        side = rng.choice(sides)
        if side == "L":
            return InLV(random_value(t.left, rng, size, alloc))
        return InRV(random_value(t.right, rng, size, alloc))
    if isinstance(t, ListOf):
        if not inhabited(t.elem):
            return SeqV(())
        n = rng.randint(0, size)
        return SeqV(tuple(random_value(t.elem, rng, max(0, size - 1), alloc)
                          for _ in range(n)))
    if isinstance(t, Bang):
        return BangV(random_value(t.inner, rng, size, alloc))
    from .types_values import TreeOf

    if isinstance(t, TreeOf):
        if not inhabited(t.label):
            return TreeLeafV()
        return random_tree(t.label, rng, max_nodes=size, alloc=alloc)
    raise TypeError(f"not a type: {t!r}")


def random_tree(label_t: GradedType, rng: random.Random, max_nodes: int = 8,
                alloc: "LeafAllocator | None" = None) -> Value:
    if alloc is None:
        alloc = LeafAllocator()
    budget = rng.randint(0, max_nodes)

    def grow(n: int) -> Value:
        if n <= 0:
            return TreeLeafV()
        left = rng.randint(0, n - 1)
        label = random_value(label_t, rng, 2, alloc)
        return TreeNodeV(grow(left), label, grow(n - 1 - left))

    return grow(budget)


def value_with_leaf_target(t: GradedType, target: int,
                           rng: random.Random) -> Value:
    """A value with roughly ``target`` unit leaves (exact for flat lists)."""
    from .types_values import leaf_count

    alloc = LeafAllocator()
    if isinstance(t, ListOf):
        per_item = max(1, _min_leaves(t.elem))
        items = []
        total = 0
        while total + per_item <= target:
            item = _small_value(t.elem, rng, alloc)
            items.append(item)
            total += leaf_count(item)
        return SeqV(tuple(items))
    if isinstance(t, Bang):
        return BangV(value_with_leaf_target(t.inner, target, rng))
    return random_value(t, rng, max(1, target), alloc)


def _min_leaves(t: GradedType) -> int:
    if isinstance(t, Unit):
        return 1
    if isinstance(t, Prod):
        return _min_leaves(t.left) + _min_leaves(t.right)
    if isinstance(t, CoProd):
        return min(_min_leaves(t.left), _min_leaves(t.right))
    if isinstance(t, Bang):
        return _min_leaves(t.inner)
    return 0  # lists and trees can be empty


def _small_value(t: GradedType, rng: random.Random,
                 alloc: LeafAllocator) -> Value:
    """The smallest nonempty inhabitant, with random co-product choices."""
    if isinstance(t, Unit):
        return UnitLeaf(alloc.fresh())
    if isinstance(t, Prod):
        return PairV(_small_value(t.left, rng, alloc),
                     _small_value(t.right, rng, alloc))
    if isinstance(t, CoProd):
        if rng.random() < 0.5 and inhabited(t.left):
            return InLV(_small_value(t.left, rng, alloc))
        if inhabited(t.right):
            return InRV(_small_value(t.right, rng, alloc))
        return InLV(_small_value(t.left, rng, alloc))
    if isinstance(t, ListOf):
        return SeqV(())
    if isinstance(t, Bang):
        return BangV(_small_value(t.inner, rng, alloc))
    from .types_values import TreeOf

    if isinstance(t, TreeOf):
        return TreeLeafV()
    raise TypeError(f"not a type: {t!r}")


def random_letters(n_letters: int, rng: random.Random, length: int,
                   alloc: "LeafAllocator | None" = None) -> SeqV:
    """A random word as a value of (1+...+1)*."""
    if alloc is None:
        alloc = LeafAllocator()
    return SeqV(tuple(
        unit_variant(rng.randrange(n_letters), n_letters, alloc.fresh())
        for _ in range(length)))


def random_simple_sst(rng: random.Random, max_states: int = 3,
                      max_regs: int = 2, in_letters: int = 2,
                      out_letters: int = 2) -> Sst:
    """A random copyless machine creating at most one letter per step."""
    n_states = rng.randint(1, max_states)
    k = rng.randint(0, max_regs)
    states = tuple(f"q{i}" for i in range(n_states))
    sigma = tuple("ab"[:in_letters])
    gamma = tuple("xy"[:out_letters])
    trans = {(q, a): rng.choice(states) for q in states for a in sigma}
    updates = {}
    for q in states:
        regs = list(range(1, k + 1))
        rng.shuffle(regs)
        kept = [r for r in regs if rng.random() < 0.85]
        words: list[list] = [[] for _ in range(k)]
        for r in kept:
            words[rng.randrange(k)].append((REG, r))
        if k and rng.random() < 0.8:
            w = rng.randrange(k)
            pos = rng.randint(0, len(words[w]))
            words[w].insert(pos, (LIT, rng.choice(gamma)))
        updates[q] = RegisterUpdate(k, k, tuple(tuple(w) for w in words))
    out_word = []
    regs = list(range(1, k + 1))
    rng.shuffle(regs)
    for r in regs:
        if rng.random() < 0.9:
            out_word.append((REG, r))
        if rng.random() < 0.3:
            out_word.append((LIT, rng.choice(gamma)))
    out = RegisterUpdate(k, 1, (tuple(out_word),))
    return Sst(sigma, gamma, states, trans, updates, out, k)


def random_general_sst(rng: random.Random, max_states: int = 3,
                       max_regs: int = 2) -> Sst:
    """Like random_simple_sst but updates may create several letters."""
    m = random_simple_sst(rng, max_states, max_regs)
    updates = {}
    for q in m.states:
        words = [list(w) for w in m.updates[q].words]
        for _ in range(rng.randint(0, 3)):
            if not words:
                break
            w = rng.randrange(len(words))
            pos = rng.randint(0, len(words[w]))
            words[w].insert(pos, (LIT, rng.choice(m.output_alphabet)))
        updates[q] = RegisterUpdate(m.nregs, m.nregs,
                                    tuple(tuple(w) for w in words))
    return Sst(m.input_alphabet, m.output_alphabet, m.states, m.trans,
               updates, m.out, m.nregs)
