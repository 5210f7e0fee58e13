"""Big-step evaluation of well-typed terms, with leaf provenance.

Evaluation is structural on the term and never consults types; the caller
is responsible for typechecking (pass a flavor to have that done here).
Copies made by the absorption primes are relabelled with fresh leaf ids so
ids stay pairwise distinct inside every value, and every leaf of the output
can be traced back to the input leaf it was copied from, or to Fresh.
"""
from __future__ import annotations

from dataclasses import dataclass

from .calculus import (
    BangFunctor,
    Compose,
    CoProdFunctor,
    MapFunctor,
    Prime,
    ProdFunctor,
    SafeFold,
    SafeTreeFold,
    SystemFlavor,
    Term,
    Weak,
    infer_type,
)
from .types_values import (
    BangV,
    InLV,
    InRV,
    LeafAllocator,
    PairV,
    SeqV,
    TreeLeafV,
    TreeNodeV,
    UnitLeaf,
    Value,
    iter_leaves,
    leaf_count,
    relabel,
    typecheck_value,
)


class _FreshMarker:
    def __repr__(self):
        return "Fresh"


FRESH = _FreshMarker()

# Prime names whose evaluation may introduce Fresh leaves.  Everything in the
# quantifier-free fragment is relabelling only, so the quantifier-free
# exception list is empty; this is asserted by the provenance tests.
FRESH_PRODUCING_PRIMES = frozenset({"const_unit"})
QF_FRESH_EXCEPTIONS: frozenset = frozenset()


class EvalInternalError(RuntimeError):
    """Evaluator reached a state that well-typed terms cannot produce."""


@dataclass
class EvalTrace:
    output: Value
    leaf_origin: dict


class _Evaluator:
    def __init__(self):
        self.alloc = LeafAllocator()
        self.origin: dict[int, object] = {}

    def fresh_leaf(self) -> UnitLeaf:
        i = self.alloc.fresh()
        self.origin[i] = FRESH
        return UnitLeaf(i)

    def copy(self, v: Value) -> Value:
        new_to_old: dict[int, int] = {}
        out = relabel(v, self.alloc, new_to_old)
        for new, old in new_to_old.items():
            self.origin[new] = self.origin[old]
        return out

    # -- term dispatch ----------------------------------------------------

    def run(self, term: Term, v: Value) -> Value:
        if isinstance(term, Prime):
            return self.run_prime(term, v)
        if isinstance(term, Compose):
            return self.run(term.g, self.run(term.f, v))
        if isinstance(term, ProdFunctor):
            if not isinstance(v, PairV):
                raise EvalInternalError(f"expected a pair, got {v!r}")
            return PairV(self.run(term.f, v.first), self.run(term.g, v.second))
        if isinstance(term, CoProdFunctor):
            if isinstance(v, InLV):
                return InLV(self.run(term.f, v.inner))
            if isinstance(v, InRV):
                return InRV(self.run(term.g, v.inner))
            raise EvalInternalError(f"expected an injection, got {v!r}")
        if isinstance(term, MapFunctor):
            if not isinstance(v, SeqV):
                raise EvalInternalError(f"expected a list, got {v!r}")
            return SeqV(tuple(self.run(term.f, item) for item in v.items))
        if isinstance(term, BangFunctor):
            if not isinstance(v, BangV):
                raise EvalInternalError(f"expected a banged value, got {v!r}")
            return BangV(self.run(term.f, v.inner))
        if isinstance(term, SafeFold):
            return self.run_fold(term, v)
        if isinstance(term, SafeTreeFold):
            return self.run_tree_fold(term, v)
        if isinstance(term, Weak):
            for _ in range(term.k):
                v = BangV(v)
            return self.run(term.inner, v)
        raise EvalInternalError(f"not a term: {term!r}")

    def seed(self, k: int) -> Value:
        v: Value = self.fresh_leaf()
        for _ in range(k):
            v = BangV(v)
        return v

    def run_fold(self, term: SafeFold, v: Value) -> Value:
        for _ in range(term.k):
            if not isinstance(v, BangV):
                raise EvalInternalError("fold input missing upgrades")
            v = v.inner
        if not isinstance(v, SeqV):
            raise EvalInternalError(f"fold input must be a list, got {v!r}")
        state = self.run(term.init, self.seed(term.k))
        for letter in v.items:
            state = self.run(term.step, PairV(state, letter))
        return state

    def run_tree_fold(self, term: SafeTreeFold, v: Value) -> Value:
        for _ in range(term.k):
            if not isinstance(v, BangV):
                raise EvalInternalError("tree fold input missing upgrades")
            v = v.inner
        # bottom-up catamorphism with an explicit stack
        results: list[Value] = []
        stack: list[tuple[Value, bool]] = [(v, False)]
        while stack:
            node, expanded = stack.pop()
            if isinstance(node, TreeLeafV):
                results.append(self.run(term.init, self.seed(term.k)))
            elif isinstance(node, TreeNodeV):
                if expanded:
                    right = results.pop()
                    left = results.pop()
                    arg = PairV(left, PairV(node.label, right))
                    results.append(self.run(term.step, arg))
                else:
                    stack.append((node, True))
                    stack.append((node.right, False))
                    stack.append((node.left, False))
            else:
                raise EvalInternalError(f"expected a tree, got {node!r}")
        (result,) = results
        return result

    # -- primes -----------------------------------------------------------

    def run_prime(self, term: Prime, v: Value) -> Value:
        fn = _PRIME_EVAL.get(term.name)
        if fn is None:
            raise EvalInternalError(f"no evaluation rule for prime {term.name}")
        return fn(self, v)


def _pair(v: Value) -> PairV:
    if not isinstance(v, PairV):
        raise EvalInternalError(f"expected a pair, got {v!r}")
    return v


def _seqv(v: Value) -> SeqV:
    if not isinstance(v, SeqV):
        raise EvalInternalError(f"expected a list, got {v!r}")
    return v


def _bang(v: Value) -> BangV:
    if not isinstance(v, BangV):
        raise EvalInternalError(f"expected a banged value, got {v!r}")
    return v


def _comm(ev, v):
    p = _pair(v)
    return PairV(p.second, p.first)


def _comm_coprod(ev, v):
    if isinstance(v, InLV):
        return InRV(v.inner)
    if isinstance(v, InRV):
        return InLV(v.inner)
    raise EvalInternalError(f"expected an injection, got {v!r}")


def _assoc_prod_fwd(ev, v):
    p = _pair(v)
    q = _pair(p.second)
    return PairV(PairV(p.first, q.first), q.second)


def _assoc_prod_bwd(ev, v):
    p = _pair(v)
    q = _pair(p.first)
    return PairV(q.first, PairV(q.second, p.second))


def _assoc_coprod_fwd(ev, v):
    if isinstance(v, InLV):
        return InLV(InLV(v.inner))
    if isinstance(v, InRV):
        w = v.inner
        if isinstance(w, InLV):
            return InLV(InRV(w.inner))
        if isinstance(w, InRV):
            return InRV(w.inner)
    raise EvalInternalError(f"expected nested injections, got {v!r}")


def _assoc_coprod_bwd(ev, v):
    if isinstance(v, InLV):
        w = v.inner
        if isinstance(w, InLV):
            return InLV(w.inner)
        if isinstance(w, InRV):
            return InRV(InLV(w.inner))
    if isinstance(v, InRV):
        return InRV(InRV(v.inner))
    raise EvalInternalError(f"expected nested injections, got {v!r}")


def _dist_fwd(ev, v):
    p = _pair(v)
    if isinstance(p.second, InLV):
        return InLV(PairV(p.first, p.second.inner))
    if isinstance(p.second, InRV):
        return InRV(PairV(p.first, p.second.inner))
    raise EvalInternalError(f"expected an injection, got {p.second!r}")


def _dist_bwd(ev, v):
    if isinstance(v, InLV):
        p = _pair(v.inner)
        return PairV(p.first, InLV(p.second))
    if isinstance(v, InRV):
        p = _pair(v.inner)
        return PairV(p.first, InRV(p.second))
    raise EvalInternalError(f"expected an injection, got {v!r}")


def _codiag(ev, v):
    if isinstance(v, (InLV, InRV)):
        return v.inner
    raise EvalInternalError(f"expected an injection, got {v!r}")


def _append(ev, v):
    p = _pair(v)
    return SeqV(_seqv(p.first).items + (p.second,))


def _concat(ev, v):
    items: list[Value] = []
    for inner in _seqv(v).items:
        items.extend(_seqv(inner).items)
    return SeqV(tuple(items))


def _list_distribute(ev, v):
    firsts = []
    seconds = []
    for item in _seqv(v).items:
        p = _pair(item)
        firsts.append(p.first)
        seconds.append(p.second)
    return PairV(SeqV(tuple(firsts)), SeqV(tuple(seconds)))


def _opt_list(ev, v):
    if isinstance(v, InLV):
        return SeqV(())
    if isinstance(v, InRV):
        return SeqV((v.inner,))
    raise EvalInternalError(f"expected an injection, got {v!r}")


def _binary_concat(ev, v):
    p = _pair(v)
    return SeqV(_seqv(p.first).items + _seqv(p.second).items)


def _list_constructor(ev, v):
    if isinstance(v, InLV):
        return SeqV(())
    if isinstance(v, InRV):
        p = _pair(v.inner)
        return SeqV((p.first,) + _seqv(p.second).items)
    raise EvalInternalError(f"expected an injection, got {v!r}")


def _bang_coprod_fwd(ev, v):
    w = _bang(v).inner
    if isinstance(w, InLV):
        return InLV(BangV(w.inner))
    if isinstance(w, InRV):
        return InRV(BangV(w.inner))
    raise EvalInternalError(f"expected an injection, got {w!r}")


def _bang_coprod_bwd(ev, v):
    if isinstance(v, InLV):
        return BangV(InLV(_bang(v.inner).inner))
    if isinstance(v, InRV):
        return BangV(InRV(_bang(v.inner).inner))
    raise EvalInternalError(f"expected an injection, got {v!r}")


def _bang_prod_fwd(ev, v):
    p = _pair(_bang(v).inner)
    return PairV(BangV(p.first), BangV(p.second))


def _bang_prod_bwd(ev, v):
    p = _pair(v)
    return BangV(PairV(_bang(p.first).inner, _bang(p.second).inner))


def _bang_list_fwd(ev, v):
    return SeqV(tuple(BangV(x) for x in _seqv(_bang(v).inner).items))


def _bang_list_bwd(ev, v):
    return BangV(SeqV(tuple(_bang(x).inner for x in _seqv(v).items)))


def _bang_tree_fwd(ev, v):
    tree = _bang(v).inner
    return _map_tree_labels(tree, lambda lab: BangV(lab))


def _bang_tree_bwd(ev, v):
    return BangV(_map_tree_labels(v, lambda lab: _bang(lab).inner))


def _map_tree_labels(tree: Value, fn) -> Value:
    # iterative rebuild to keep deep trees safe
    results: list[Value] = []
    stack: list[tuple[Value, bool]] = [(tree, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, TreeLeafV):
            results.append(node)
        elif isinstance(node, TreeNodeV):
            if expanded:
                right = results.pop()
                left = results.pop()
                results.append(TreeNodeV(left, fn(node.label), right))
            else:
                stack.append((node, True))
                stack.append((node.right, False))
                stack.append((node.left, False))
        else:
            raise EvalInternalError(f"expected a tree, got {node!r}")
    (result,) = results
    return result


def _absorption(ev, v):
    b = _bang(v)
    return PairV(b, ev.copy(b.inner))


def _lin_absorption(ev, v):
    b = _bang(v)
    return PairV(b.inner, ev.copy(b.inner))


def _add_zero(ev, v):
    raise EvalInternalError(
        "the zero type has no values; add_zero exists only for the "
        "structure-level calculus")


def _create_empty_list(ev, v):
    raise EvalInternalError(
        "the zero type has no values, so create_empty_list can never run")


def _wilke_cons(ev, v):
    if isinstance(v, InLV):
        return TreeLeafV()
    if isinstance(v, InRV):
        p = _pair(v.inner)
        q = _pair(p.second)
        return TreeNodeV(p.first, q.first, q.second)
    raise EvalInternalError(f"expected an injection, got {v!r}")


def plug_context(ctx_items, hole: Value) -> Value:
    """Replace the hole of a context (outermost node first) by ``hole``."""
    result = hole
    for item in reversed(ctx_items):
        if isinstance(item, InLV):
            p = _pair(item.inner)  # (left subtree, label): hole in the right
            result = TreeNodeV(p.first, p.second, result)
        elif isinstance(item, InRV):
            p = _pair(item.inner)  # (label, right subtree): hole in the left
            result = TreeNodeV(result, p.first, p.second)
        else:
            raise EvalInternalError(f"expected a context entry, got {item!r}")
    return result


def _wilke_replace(ev, v):
    p = _pair(v)
    return plug_context(_seqv(p.first).items, p.second)


def _wilke_compose(ev, v):
    p = _pair(v)
    return SeqV(_seqv(p.first).items + _seqv(p.second).items)


def _wilke_create(ev, v):
    if isinstance(v, InLV):
        return SeqV(())
    if isinstance(v, InRV):
        w = v.inner
        if isinstance(w, InLV):
            return SeqV((InLV(w.inner),))
        if isinstance(w, InRV):
            return SeqV((InRV(w.inner),))
    raise EvalInternalError(f"expected nested injections, got {v!r}")


_PRIME_EVAL = {
    "comm_prod_fwd": _comm,
    "comm_prod_bwd": _comm,
    "comm_coprod_fwd": _comm_coprod,
    "comm_coprod_bwd": _comm_coprod,
    "assoc_prod_fwd": _assoc_prod_fwd,
    "assoc_prod_bwd": _assoc_prod_bwd,
    "assoc_coprod_fwd": _assoc_coprod_fwd,
    "assoc_coprod_bwd": _assoc_coprod_bwd,
    "dist_fwd": _dist_fwd,
    "dist_bwd": _dist_bwd,
    "proj1": lambda ev, v: _pair(v).first,
    "proj2": lambda ev, v: _pair(v).second,
    "coproj1": lambda ev, v: InLV(v),
    "coproj2": lambda ev, v: InRV(v),
    "codiag": _codiag,
    "const_unit": lambda ev, v: ev.fresh_leaf(),
    "append": _append,
    "reverse": lambda ev, v: SeqV(tuple(reversed(_seqv(v).items))),
    "concat": _concat,
    "create_empty": lambda ev, v: PairV(v, SeqV(())),
    "list_distribute": _list_distribute,
    "list_unit": lambda ev, v: SeqV((v,)),
    "list_constructor": _list_constructor,
    "binary_concat": _binary_concat,
    "opt_list": _opt_list,
    "bang_coprod_fwd": _bang_coprod_fwd,
    "bang_coprod_bwd": _bang_coprod_bwd,
    "bang_prod_fwd": _bang_prod_fwd,
    "bang_prod_bwd": _bang_prod_bwd,
    "bang_list_fwd": _bang_list_fwd,
    "bang_list_bwd": _bang_list_bwd,
    "bang_tree_fwd": _bang_tree_fwd,
    "bang_tree_bwd": _bang_tree_bwd,
    "absorption": _absorption,
    "lin_absorption": _lin_absorption,
    "add_zero": _add_zero,
    "create_empty_list": _create_empty_list,
    "wilke_cons": _wilke_cons,
    "wilke_replace": _wilke_replace,
    "wilke_compose": _wilke_compose,
    "wilke_create": _wilke_create,
}


def eval_term(term: Term, value: Value, flavor: SystemFlavor | None = None) -> Value:
    """Evaluate ``term`` on ``value``; with a flavor, typecheck both first."""
    return eval_traced(term, value, flavor).output


def eval_traced(term: Term, value: Value,
                flavor: SystemFlavor | None = None) -> EvalTrace:
    if flavor is not None:
        ft = infer_type(term, flavor)
        if not typecheck_value(value, ft.dom):
            raise ValueError(f"input does not inhabit {ft.dom!r}")
    ev = _Evaluator()
    ev.alloc.reserve_above(value)
    for leaf in iter_leaves(value):
        ev.origin[leaf.leaf_id] = leaf.leaf_id
    out = ev.run(term, value)
    origin = {leaf.leaf_id: ev.origin[leaf.leaf_id] for leaf in iter_leaves(out)}
    return EvalTrace(out, origin)


# ---------------------------------------------------------------------------
# Growth analysis
# ---------------------------------------------------------------------------

@dataclass
class GrowthProfile:
    degree: int
    slope: float
    residual: float
    points: list  # (input leaves, output leaves)


def growth_profile(term: Term, flavor: SystemFlavor, sizes, seed: int = 0,
                   generator=None) -> GrowthProfile:
    """Fit log(output leaves) against log(input leaves).

    ``generator(dom_type, size, rng)`` must produce an input value with
    roughly ``size`` leaves; by default the shared random generator is used.
    """
    import numpy as np

    sizes = list(sizes)
    if len(sizes) < 3:
        raise ValueError("growth profile needs at least 3 sizes")
    ft = infer_type(term, flavor)
    if generator is None:
        from .randgen import value_with_leaf_target

        generator = value_with_leaf_target
    import random as _random

    rng = _random.Random(seed)
    points = []
    for size in sizes:
        v = generator(ft.dom, size, rng)
        n_in = max(1, leaf_count(v))
        out = eval_term(term, v)
        n_out = max(1, leaf_count(out))
        points.append((n_in, n_out))
    xs = np.log([p[0] for p in points])
    ys = np.log([p[1] for p in points])
    if float(np.ptp(xs)) == 0.0:
        slope = 0.0
    else:
        slope = float(np.polyfit(xs, ys, 1)[0])
    degree = int(round(slope))
    return GrowthProfile(degree, slope, abs(slope - degree), points)
