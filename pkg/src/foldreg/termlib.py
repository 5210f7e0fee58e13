"""Derived terms: identities, cases, product rewiring, finite functions.

Everything here is built from the prime inventory, so the emitted terms
typecheck in whatever flavor admits the primes they mention.  The shuffle
compiler turns any copyless rearrangement (possibly dropping components) of
a product tree into a chain of commutativity/associativity/projection
primes, which removes the most error-prone wiring work from derivations.
"""
from __future__ import annotations

from .calculus import (
    Compose,
    CoProdFunctor,
    Prime,
    ProdFunctor,
    Term,
)
from .types_values import (
    Bang,
    GradedType,
    ListOf,
    Prod,
    UNIT,
    bangs,
)


def seq_compose(*terms: Term) -> Term:
    """Source-to-target chain f1;f2;...;fn."""
    terms = tuple(t for t in terms if t is not None)
    if not terms:
        raise ValueError("empty composition")
    out = terms[0]
    for t in terms[1:]:
        out = Compose(out, t)
    return out


def identity(t: GradedType) -> Term:
    """Identity as co-projection followed by co-diagonal."""
    return seq_compose(Prime("coproj1", (t, t)), Prime("codiag", (t,)))


def cases(f: Term, g: Term, cod: GradedType) -> Term:
    """From f: A -> C and g: B -> C, the case split A+B -> C."""
    return Compose(CoProdFunctor(f, g), Prime("codiag", (cod,)))


def erase_bang(t: GradedType, linear: bool = False) -> Term:
    """!t -> t via absorption (or linear absorption) and a projection."""
    if linear:
        return seq_compose(Prime("lin_absorption", (t,)),
                           Prime("proj2", (t, t)))
    return seq_compose(Prime("absorption", (t,)), Prime("proj2", (Bang(t), t)))


def erase_bangs(t: GradedType, k: int, linear: bool = False) -> Term:
    """!^k t -> t, erasing the outermost upgrade first."""
    if k == 0:
        return identity(t)
    parts = [erase_bang(bangs(t, j), linear) for j in range(k - 1, -1, -1)]
    return seq_compose(*parts)


def empty_list(elem: GradedType, dom: GradedType = UNIT) -> Term:
    """dom -> elem*, producing the empty list (consumes the input)."""
    return seq_compose(Prime("create_empty", (dom, elem)),
                       Prime("proj2", (dom, ListOf(elem))))


def binconcat(elem: GradedType) -> Term:
    """elem* x elem* -> elem*, derived as [u,v] then flatten."""
    return seq_compose(
        ProdFunctor(Prime("list_unit", (ListOf(elem),)), identity(ListOf(elem))),
        Prime("append", (ListOf(elem),)),
        Prime("concat", (elem,)),
    )


def prepend(elem: GradedType) -> Term:
    """elem x elem* -> elem*."""
    return seq_compose(
        ProdFunctor(Prime("list_unit", (elem,)), identity(ListOf(elem))),
        binconcat(elem),
    )


# ---------------------------------------------------------------------------
# Product rewiring
#
# A shuffle shape is either a leaf address (tuple of 0/1 steps into the
# domain's product tree) or a pair (left_shape, right_shape).  Each address
# may be used at most once; unused leaves are dropped by projections.
# ---------------------------------------------------------------------------

def _is_addr(shape) -> bool:
    return isinstance(shape, tuple) and all(isinstance(x, int) for x in shape)


def _shape_addrs(shape) -> list:
    if _is_addr(shape):
        return [shape]
    left, right = shape
    return _shape_addrs(left) + _shape_addrs(right)


class _VLeaf:
    def __init__(self, addr: tuple, t: GradedType):
        self.addr = addr
        self.t = t


class _VNode:
    def __init__(self, left, right):
        self.left = left
        self.right = right


def _vt_of(t: GradedType, addr: tuple = ()):
    if isinstance(t, Prod):
        return _VNode(_vt_of(t.left, addr + (0,)), _vt_of(t.right, addr + (1,)))
    return _VLeaf(addr, t)


def _vt_type(vt) -> GradedType:
    if isinstance(vt, _VLeaf):
        return vt.t
    return Prod(_vt_type(vt.left), _vt_type(vt.right))


def _vt_addrs(vt) -> set:
    if isinstance(vt, _VLeaf):
        return {vt.addr}
    return _vt_addrs(vt.left) | _vt_addrs(vt.right)


def shuffle(dom: GradedType, shape) -> tuple[Term, GradedType]:
    """A term rearranging the product tree ``dom`` into ``shape``."""
    vt = _vt_of(dom)
    available = _vt_addrs(vt)
    wanted = _shape_addrs(shape)
    if len(wanted) != len(set(wanted)):
        raise ValueError("a shuffle may use each leaf at most once")
    missing = [a for a in wanted if a not in available]
    if missing:
        raise ValueError(f"addresses {missing} are not leaves of {dom!r}")
    return _build(vt, shape)


def _build(vt, shape) -> tuple[Term, GradedType]:
    if _is_addr(shape):
        return _project_to(vt, shape)
    left_shape, right_shape = shape
    left_addrs = set(_shape_addrs(left_shape))
    if isinstance(vt, _VLeaf):
        raise ValueError("cannot split a single leaf into a pair")
    split_term, vt_left, vt_right = _separate(vt, left_addrs)
    lterm, ltype = _build(vt_left, left_shape)
    rterm, rtype = _build(vt_right, right_shape)
    term = seq_compose(split_term, ProdFunctor(lterm, rterm))
    return term, Prod(ltype, rtype)


def _project_to(vt, addr) -> tuple[Term, GradedType]:
    if isinstance(vt, _VLeaf):
        assert vt.addr == addr
        return identity(vt.t), vt.t
    lt, rt = _vt_type(vt.left), _vt_type(vt.right)
    if addr in _vt_addrs(vt.left):
        sub, out = _project_to(vt.left, addr)
        return seq_compose(Prime("proj1", (lt, rt)), sub), out
    sub, out = _project_to(vt.right, addr)
    return seq_compose(Prime("proj2", (lt, rt)), sub), out


def _coverage(vt, addrs: set) -> str:
    mine = _vt_addrs(vt)
    inside = mine & addrs
    if not inside:
        return "none"
    if inside == mine:
        return "all"
    return "mixed"


def _separate(vt, addrs: set):
    """Term vt -> A x B with A holding exactly the leaves in ``addrs``."""
    a, b = vt.left, vt.right
    ta, tb = _vt_type(a), _vt_type(b)
    ca, cb = _coverage(a, addrs), _coverage(b, addrs)
    if ca == "all" and cb == "none":
        return identity(Prod(ta, tb)), a, b
    if ca == "none" and cb == "all":
        return Prime("comm_prod_fwd", (ta, tb)), b, a
    if ca == "all" and cb == "mixed":
        bt, b_in, b_out = _separate(b, addrs)
        t_in, t_out = _vt_type(b_in), _vt_type(b_out)
        term = seq_compose(ProdFunctor(identity(ta), bt),
                           Prime("assoc_prod_fwd", (ta, t_in, t_out)))
        return term, _VNode(a, b_in), b_out
    if ca == "none" and cb == "mixed":
        bt, b_in, b_out = _separate(b, addrs)
        t_in, t_out = _vt_type(b_in), _vt_type(b_out)
        term = seq_compose(
            ProdFunctor(identity(ta), bt),
            Prime("assoc_prod_fwd", (ta, t_in, t_out)),
            ProdFunctor(Prime("comm_prod_fwd", (ta, t_in)), identity(t_out)),
            Prime("assoc_prod_bwd", (t_in, ta, t_out)),
        )
        return term, b_in, _VNode(a, b_out)
    if ca == "mixed" and cb == "all":
        at, a_in, a_out = _separate(a, addrs)
        t_in, t_out = _vt_type(a_in), _vt_type(a_out)
        term = seq_compose(
            ProdFunctor(at, identity(tb)),
            Prime("assoc_prod_bwd", (t_in, t_out, tb)),
            ProdFunctor(identity(t_in), Prime("comm_prod_fwd", (t_out, tb))),
            Prime("assoc_prod_fwd", (t_in, tb, t_out)),
        )
        return term, _VNode(a_in, b), a_out
    if ca == "mixed" and cb == "none":
        at, a_in, a_out = _separate(a, addrs)
        t_in, t_out = _vt_type(a_in), _vt_type(a_out)
        term = seq_compose(ProdFunctor(at, identity(tb)),
                           Prime("assoc_prod_bwd", (t_in, t_out, tb)))
        return term, a_in, _VNode(a_out, b)
    # both mixed
    at, a_in, a_out = _separate(a, addrs)
    bt, b_in, b_out = _separate(b, addrs)
    tai, tao = _vt_type(a_in), _vt_type(a_out)
    tbi, tbo = _vt_type(b_in), _vt_type(b_out)
    term = seq_compose(ProdFunctor(at, bt),
                       _middle_four(tai, tao, tbi, tbo))
    return term, _VNode(a_in, b_in), _VNode(a_out, b_out)


def _middle_four(al, ar, bl, br) -> Term:
    """(aL x aR) x (bL x bR) -> (aL x bL) x (aR x bR)."""
    inner = seq_compose(
        Prime("assoc_prod_fwd", (ar, bl, br)),
        ProdFunctor(Prime("comm_prod_fwd", (ar, bl)), identity(br)),
        Prime("assoc_prod_bwd", (bl, ar, br)),
    )
    return seq_compose(
        Prime("assoc_prod_bwd", (al, ar, Prod(bl, br))),
        ProdFunctor(identity(al), inner),
        Prime("assoc_prod_fwd", (al, bl, Prod(ar, br))),
    )


# ---------------------------------------------------------------------------
# Finite functions
# ---------------------------------------------------------------------------

def constant_into(value, cod: GradedType) -> Term:
    """1 -> cod for a finite co-product-of-units codomain element."""
    from .types_values import InLV, InRV, UnitLeaf, CoProd, Unit

    if isinstance(cod, Unit):
        if not isinstance(value, UnitLeaf):
            raise ValueError("value does not match the codomain")
        return identity(UNIT)
    if isinstance(cod, CoProd):
        if isinstance(value, InLV):
            return seq_compose(constant_into(value.inner, cod.left),
                               Prime("coproj1", (cod.left, cod.right)))
        if isinstance(value, InRV):
            return seq_compose(constant_into(value.inner, cod.right),
                               Prime("coproj2", (cod.left, cod.right)))
    raise ValueError(f"cannot build a constant of type {cod!r}")


def finite_fun(dom: GradedType, cod: GradedType, fn) -> Term:
    """The term computing ``fn`` between finite types.

    ``dom`` is built from 1, products, and co-products; ``cod`` from 1 and
    co-products.  ``fn`` maps values of ``dom`` to values of ``cod``.  The
    construction distributes products over co-products and rebuilds each
    case with co-projections, so it stays inside the quantifier-free system.
    """
    from .types_values import (
        CoProd, InLV, InRV, PairV, Prod as TProd, Unit, UnitLeaf,
    )

    if isinstance(dom, Unit):
        return constant_into(fn(UnitLeaf(0)), cod)
    if isinstance(dom, CoProd):
        left = finite_fun(dom.left, cod, lambda v: fn(InLV(v)))
        right = finite_fun(dom.right, cod, lambda v: fn(InRV(v)))
        return cases(left, right, cod)
    if isinstance(dom, TProd):
        a, b = dom.left, dom.right
        if isinstance(a, Unit):
            inner = finite_fun(b, cod, lambda v: fn(PairV(UnitLeaf(0), v)))
            return seq_compose(Prime("proj2", (a, b)), inner)
        if isinstance(b, Unit):
            inner = finite_fun(a, cod, lambda v: fn(PairV(v, UnitLeaf(0))))
            return seq_compose(Prime("proj1", (a, b)), inner)
        if isinstance(b, CoProd):
            # a x (b1+b2) -> (a x b1) + (a x b2), recurse per case
            left = finite_fun(TProd(a, b.left), cod,
                              lambda v: fn(PairV(v.first, InLV(v.second))))
            right = finite_fun(TProd(a, b.right), cod,
                               lambda v: fn(PairV(v.first, InRV(v.second))))
            return seq_compose(Prime("dist_fwd", (a, b.left, b.right)),
                               cases(left, right, cod))
        if isinstance(a, CoProd):
            swapped = finite_fun(TProd(b, a), cod,
                                 lambda v: fn(PairV(v.second, v.first)))
            return seq_compose(Prime("comm_prod_fwd", (a, b)), swapped)
        if isinstance(a, TProd):
            inner = finite_fun(
                TProd(a.left, TProd(a.right, b)), cod,
                lambda v: fn(PairV(PairV(v.first, v.second.first),
                                   v.second.second)))
            return seq_compose(Prime("assoc_prod_bwd", (a.left, a.right, b)),
                               inner)
        raise ValueError(f"not a finite domain: {dom!r}")
    raise ValueError(f"not a finite domain: {dom!r}")
