"""Trees with labelled inner nodes, contexts, and Wilke's operations.

Contexts are not a separate type: a context is a list of one-hole node
skeletons, outermost first.  The first co-product variant puts the hole in
the right subtree, the second in the left, so plugging walks the list from
the inside out.
"""
from __future__ import annotations

from .calculus import Prime, SafeTreeFold, Term
from .evaluator import plug_context
from .types_values import (
    CoProd,
    GradedType,
    InLV,
    InRV,
    ListOf,
    PairV,
    Prod,
    SeqV,
    TreeLeafV,
    TreeNodeV,
    TreeOf,
    Value,
)


def context_type(label: GradedType) -> GradedType:
    t = TreeOf(label)
    return ListOf(CoProd(Prod(t, label), Prod(label, t)))


def hole_right(left_tree: Value, label: Value) -> Value:
    """Context entry: a node whose hole is the right subtree."""
    return InLV(PairV(left_tree, label))


def hole_left(label: Value, right_tree: Value) -> Value:
    """Context entry: a node whose hole is the left subtree."""
    return InRV(PairV(label, right_tree))


def wilke(op: str, *args: Value) -> Value:
    """The four operations on trees and contexts, at the value level."""
    if op == "cons":
        (arg,) = args
        if isinstance(arg, InLV):
            return TreeLeafV()
        body = arg.inner
        return TreeNodeV(body.first, body.second.first, body.second.second)
    if op == "replace":
        ctx, tree = args
        if not isinstance(ctx, SeqV):
            raise TypeError("replace expects a context list")
        return plug_context(ctx.items, tree)
    if op == "compose":
        outer, inner = args
        return SeqV(outer.items + inner.items)
    if op == "create":
        (arg,) = args
        if isinstance(arg, InLV):
            return SeqV(())
        body = arg.inner
        if isinstance(body, InLV):
            return SeqV((InLV(body.inner),))
        return SeqV((InRV(body.inner),))
    raise ValueError(f"unknown operation {op!r}")


def tree_size(v: Value) -> int:
    """Number of inner nodes."""
    stack = [v]
    n = 0
    while stack:
        x = stack.pop()
        if isinstance(x, TreeNodeV):
            n += 1
            stack.append(x.left)
            stack.append(x.right)
    return n


def tree_labels_infix(v: Value) -> list:
    """Labels in document (infix) order."""
    out: list = []

    stack = [(v, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, TreeLeafV):
            continue
        if expanded:
            out.append(node.label)
        else:
            stack.append((node.right, False))
            stack.append((node, True))
            stack.append((node.left, False))
    return out


def left_comb_of_list(items, leaf=None) -> Value:
    """Encode a list as a left comb tree: ((((.) a1 .) a2 .) ... )."""
    tree: Value = TreeLeafV() if leaf is None else leaf
    for label in items:
        tree = TreeNodeV(tree, label, TreeLeafV())
    return tree


# ---------------------------------------------------------------------------
# The register analogue of streaming tree transducers: a bottom-up machine
# whose registers hold output trees and contexts, combined at each node by
# copyless Wilke expressions.  The linear completeness sketch folds exactly
# this kind of machine; no compiler to interpretations is provided for it.
# ---------------------------------------------------------------------------

REG = "reg"          # ("reg", "left"|"right", index)
LABEL_NODE = "node"  # ("node", left_expr, right_expr): current label on top
LEAF = "leaf"        # ("leaf",)
EMPTY_CTX = "empty_ctx"
HOLE_RIGHT = "hole_right"  # ("hole_right", tree_expr): node, hole right
HOLE_LEFT = "hole_left"    # ("hole_left", tree_expr): node, hole left
PLUG = "plug"        # ("plug", ctx_expr, tree_expr)
COMPOSE = "compose"  # ("compose", ctx_expr, ctx_expr)


def _expr_regs(expr):
    head = expr[0]
    if head == REG:
        yield (expr[1], expr[2])
    elif head in (LABEL_NODE, PLUG, COMPOSE):
        for sub in expr[1:]:
            yield from _expr_regs(sub)
    elif head in (HOLE_RIGHT, HOLE_LEFT):
        yield from _expr_regs(expr[1])


class TreeRegisterMachine:
    """Bottom-up tree transducer with copyless Wilke-operation registers.

    ``reg_kinds`` declares each register as "tree" or "ctx"; ``leaf_init``
    gives the register expressions at a leaf (no register references);
    ``node_update`` combines the children's registers and the node label;
    ``output`` names the tree register read off at the root.
    """

    def __init__(self, reg_kinds, leaf_init, node_update, output: int):
        self.reg_kinds = tuple(reg_kinds)
        self.leaf_init = tuple(leaf_init)
        self.node_update = tuple(node_update)
        self.output = output
        if len(self.leaf_init) != len(self.reg_kinds) or \
                len(self.node_update) != len(self.reg_kinds):
            raise ValueError("one expression per register is required")
        used = list(u for e in self.node_update for u in _expr_regs(e))
        if len(used) != len(set(used)):
            raise ValueError("update is not copyless: a register is reused")
        if self.reg_kinds[output] != "tree":
            raise ValueError("the output register must hold a tree")

    def _eval(self, expr, left, right, label):
        head = expr[0]
        if head == REG:
            bank = left if expr[1] == "left" else right
            return bank[expr[2]]
        if head == LEAF:
            return TreeLeafV()
        if head == EMPTY_CTX:
            return SeqV(())
        if head == LABEL_NODE:
            l = self._eval(expr[1], left, right, label)
            r = self._eval(expr[2], left, right, label)
            return TreeNodeV(l, label, r)
        if head == HOLE_RIGHT:
            t = self._eval(expr[1], left, right, label)
            return SeqV((InLV(PairV(t, label)),))
        if head == HOLE_LEFT:
            t = self._eval(expr[1], left, right, label)
            return SeqV((InRV(PairV(label, t)),))
        if head == PLUG:
            c = self._eval(expr[1], left, right, label)
            t = self._eval(expr[2], left, right, label)
            return plug_context(c.items, t)
        if head == COMPOSE:
            a = self._eval(expr[1], left, right, label)
            b = self._eval(expr[2], left, right, label)
            return SeqV(a.items + b.items)
        raise ValueError(f"unknown expression {expr!r}")

    def run(self, tree: Value) -> Value:
        results = []
        stack = [(tree, False)]
        while stack:
            node, expanded = stack.pop()
            if isinstance(node, TreeLeafV):
                results.append(tuple(self._eval(e, None, None, None)
                                     for e in self.leaf_init))
            elif isinstance(node, TreeNodeV):
                if expanded:
                    right = results.pop()
                    left = results.pop()
                    results.append(tuple(
                        self._eval(e, left, right, node.label)
                        for e in self.node_update))
                else:
                    stack.append((node, True))
                    stack.append((node.right, False))
                    stack.append((node.left, False))
            else:
                raise TypeError(f"not a tree: {node!r}")
        (final,) = results
        return final[self.output]


def mirror_machine() -> TreeRegisterMachine:
    return TreeRegisterMachine(
        ("tree",), ((LEAF,),),
        ((LABEL_NODE, (REG, "right", 0), (REG, "left", 0)),), 0)


def spine_context_machine() -> TreeRegisterMachine:
    """Rebuilds the tree by plugging the left-spine context onto a leaf."""
    return TreeRegisterMachine(
        ("tree", "ctx"),
        ((LEAF,), (EMPTY_CTX,)),
        ((PLUG, (COMPOSE, (REG, "left", 1),
                 (HOLE_LEFT, (REG, "right", 0))), (REG, "left", 0)),
         (EMPTY_CTX,)),
        0)
