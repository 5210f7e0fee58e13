"""Disjunctive normal form of types, with derivable isomorphisms.

The returned pair of terms typechecks in the quantifier-free system (for
graded inputs: in the polyregular system, since the terms treat ! subtrees
as opaque) and evaluates to mutually inverse functions.
"""
from __future__ import annotations

from .calculus import (
    CoProdFunctor,
    MapFunctor,
    Prime,
    ProdFunctor,
    Term,
)
from .termlib import identity, seq_compose
from .types_values import Bang, CoProd, GradedType, ListOf, Prod, TreeOf


def has_prod_of_coprod(t: GradedType) -> bool:
    """True if some product has a co-pair child (outside opaque ! subtrees)."""
    if isinstance(t, Prod):
        if isinstance(t.left, CoProd) or isinstance(t.right, CoProd):
            return True
        return has_prod_of_coprod(t.left) or has_prod_of_coprod(t.right)
    if isinstance(t, CoProd):
        return has_prod_of_coprod(t.left) or has_prod_of_coprod(t.right)
    if isinstance(t, ListOf):
        return has_prod_of_coprod(t.elem)
    return False


def to_dnf(t: GradedType) -> tuple[GradedType, Term, Term]:
    """(normal form, forward iso, backward iso)."""
    out_t, fwd, bwd = _dnf(t)
    return out_t, fwd, bwd


def _dnf(t: GradedType):
    if isinstance(t, (Prod,)):
        lt, lf, lb = _dnf(t.left)
        rt, rf, rb = _dnf(t.right)
        mid = Prod(lt, rt)
        fwd0 = ProdFunctor(lf, rf)
        bwd0 = ProdFunctor(lb, rb)
        out_t, fwd1, bwd1 = _distribute(mid)
        return out_t, seq_compose(fwd0, fwd1), seq_compose(bwd1, bwd0)
    if isinstance(t, CoProd):
        lt, lf, lb = _dnf(t.left)
        rt, rf, rb = _dnf(t.right)
        return CoProd(lt, rt), CoProdFunctor(lf, rf), CoProdFunctor(lb, rb)
    if isinstance(t, ListOf):
        et, ef, eb = _dnf(t.elem)
        return ListOf(et), MapFunctor(ef), MapFunctor(eb)
    # 0, 1, ! and tree subtrees are atoms here
    return t, identity(t), identity(t)


def _distribute(t: GradedType):
    """Push products below co-pairs; children are already in normal form."""
    if not isinstance(t, Prod):
        return t, identity(t), identity(t)
    a, b = t.left, t.right
    if isinstance(b, CoProd):
        # a × (b1 + b2)  ->  (a × b1) + (a × b2)
        fwd0 = Prime("dist_fwd", (a, b.left, b.right))
        bwd0 = Prime("dist_bwd", (a, b.left, b.right))
        lt, lf, lb = _distribute(Prod(a, b.left))
        rt, rf, rb = _distribute(Prod(a, b.right))
        fwd = seq_compose(fwd0, CoProdFunctor(lf, rf))
        bwd = seq_compose(CoProdFunctor(lb, rb), bwd0)
        return CoProd(lt, rt), fwd, bwd
    if isinstance(a, CoProd):
        # (a1 + a2) × b  ->  swap, distribute, swap back inside the variants
        swap = Prime("comm_prod_fwd", (a, b))
        swap_back = Prime("comm_prod_bwd", (a, b))
        mid, mf, mb = _distribute(Prod(b, a))
        return mid, seq_compose(swap, mf), seq_compose(mb, swap_back)
    return t, identity(t), identity(t)

