"""Graded list types and their values.

The type language has constructors 0, 1, product, co-product, list, the
grading constructor ``!`` and (for the tree extension) binary trees with
labelled inner nodes.  Values are immutable trees whose unit leaves carry
integer ids, so copies and deletions can be tracked through evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

class GradedType:
    """Base class for the type language; all subclasses are immutable."""

    def __mul__(self, other: "GradedType") -> "Prod":
        return Prod(self, other)

    def __add__(self, other: "GradedType") -> "CoProd":
        return CoProd(self, other)


@dataclass(frozen=True)
class Zero(GradedType):
    def __repr__(self):
        return "0"


@dataclass(frozen=True)
class Unit(GradedType):
    def __repr__(self):
        return "1"


@dataclass(frozen=True)
class Prod(GradedType):
    left: GradedType
    right: GradedType

    def __repr__(self):
        return f"({self.left!r}×{self.right!r})"


@dataclass(frozen=True)
class CoProd(GradedType):
    left: GradedType
    right: GradedType

    def __repr__(self):
        return f"({self.left!r}+{self.right!r})"


@dataclass(frozen=True)
class ListOf(GradedType):
    elem: GradedType

    def __repr__(self):
        e = repr(self.elem)
        if isinstance(self.elem, (Prod, CoProd)):
            return f"{e}*"
        return f"{e}*" if len(e) == 1 else f"({e})*"


@dataclass(frozen=True)
class Bang(GradedType):
    inner: GradedType

    def __repr__(self):
        return f"!{self.inner!r}"


@dataclass(frozen=True)
class TreeOf(GradedType):
    label: GradedType

    def __repr__(self):
        return f"tree({self.label!r})"


ZERO = Zero()
UNIT = Unit()


def bangs(t: GradedType, k: int) -> GradedType:
    """Wrap ``t`` in ``k`` applications of the grading constructor."""
    for _ in range(k):
        t = Bang(t)
    return t


def strip_bangs(t: GradedType) -> "tuple[int, GradedType]":
    """Return (k, s) such that t = !^k s and s is not a Bang."""
    k = 0
    while isinstance(t, Bang):
        k += 1
        t = t.inner
    return k, t


def grade(t: GradedType) -> int:
    """Maximal nesting depth of the grading constructor in ``t``."""
    if isinstance(t, (Zero, Unit)):
        return 0
    if isinstance(t, (Prod, CoProd)):
        return max(grade(t.left), grade(t.right))
    if isinstance(t, ListOf):
        return grade(t.elem)
    if isinstance(t, TreeOf):
        return grade(t.label)
    if isinstance(t, Bang):
        return 1 + grade(t.inner)
    raise TypeError(f"not a type: {t!r}")


def min_element_grade(t: GradedType):
    """Largest g with: every element of every structure of type t has grade >= g.

    Zero has no elements at all, so the bound is vacuous (infinite); likewise
    list and tree constructors quantify only over the elements their items
    actually contribute.
    """
    if isinstance(t, Zero):
        return math.inf
    if isinstance(t, Unit):
        return 0
    if isinstance(t, Prod):
        return min(min_element_grade(t.left), min_element_grade(t.right))
    if isinstance(t, CoProd):
        return min(min_element_grade(t.left), min_element_grade(t.right))
    if isinstance(t, ListOf):
        return min_element_grade(t.elem)
    if isinstance(t, TreeOf):
        return min_element_grade(t.label)
    if isinstance(t, Bang):
        return 1 + min_element_grade(t.inner)
    raise TypeError(f"not a type: {t!r}")


def contains_bang(t: GradedType) -> bool:
    if isinstance(t, Bang):
        return True
    if isinstance(t, (Prod, CoProd)):
        return contains_bang(t.left) or contains_bang(t.right)
    if isinstance(t, ListOf):
        return contains_bang(t.elem)
    if isinstance(t, TreeOf):
        return contains_bang(t.label)
    return False


def contains_tree(t: GradedType) -> bool:
    if isinstance(t, TreeOf):
        return True
    if isinstance(t, (Prod, CoProd)):
        return contains_tree(t.left) or contains_tree(t.right)
    if isinstance(t, ListOf):
        return contains_tree(t.elem)
    if isinstance(t, Bang):
        return contains_tree(t.inner)
    return False


@dataclass(frozen=True)
class FunctionType:
    dom: GradedType
    cod: GradedType

    def __repr__(self):
        return f"{self.dom!r} -> {self.cod!r}"


# ---------------------------------------------------------------------------
# Values
# ---------------------------------------------------------------------------

class Value:
    """Base class for inhabitants of graded list types."""


@dataclass(frozen=True)
class UnitLeaf(Value):
    leaf_id: int


@dataclass(frozen=True)
class PairV(Value):
    first: Value
    second: Value


@dataclass(frozen=True)
class InLV(Value):
    inner: Value


@dataclass(frozen=True)
class InRV(Value):
    inner: Value


@dataclass(frozen=True)
class SeqV(Value):
    items: "tuple[Value, ...]"


@dataclass(frozen=True)
class BangV(Value):
    inner: Value


@dataclass(frozen=True)
class TreeLeafV(Value):
    pass


@dataclass(frozen=True)
class TreeNodeV(Value):
    left: Value
    label: Value
    right: Value


class LeafAllocator:
    """Deterministic counter handing out fresh leaf ids."""

    def __init__(self, start: int = 0):
        self.next_id = start

    def fresh(self) -> int:
        i = self.next_id
        self.next_id += 1
        return i

    def reserve_above(self, v: Value) -> None:
        """Move the counter past every id used in ``v``."""
        for i in leaf_ids(v):
            if i >= self.next_id:
                self.next_id = i + 1


def leaf_ids(v: Value) -> "list[int]":
    """All unit-leaf ids of ``v`` in document order."""
    return [leaf.leaf_id for leaf in iter_leaves(v)]


def _doc_order_children(x: Value):
    if isinstance(x, PairV):
        return (x.first, x.second)
    if isinstance(x, (InLV, InRV, BangV)):
        return (x.inner,)
    if isinstance(x, SeqV):
        return x.items
    if isinstance(x, TreeNodeV):
        return (x.left, x.label, x.right)
    return ()


def iter_leaves(v: Value):
    """Yield UnitLeaf nodes of ``v`` in document order."""
    stack = [v]
    while stack:
        x = stack.pop()
        if isinstance(x, UnitLeaf):
            yield x
        else:
            stack.extend(reversed(_doc_order_children(x)))


def leaf_count(v: Value) -> int:
    return sum(1 for _ in iter_leaves(v))


def distinct_leaf_ids(v: Value) -> bool:
    seen = set()
    for leaf in iter_leaves(v):
        if leaf.leaf_id in seen:
            return False
        seen.add(leaf.leaf_id)
    return True


def typecheck_value(v: Value, t: GradedType) -> bool:
    """True iff ``v`` is a well-formed inhabitant of ``t``.

    Zero is uninhabited at the value level; the zero primes are type-level
    gadgets for the structure calculus.
    """
    stack = [(v, t)]
    while stack:
        v, t = stack.pop()
        if isinstance(t, Zero):
            return False
        if isinstance(t, Unit):
            if not isinstance(v, UnitLeaf):
                return False
        elif isinstance(t, Prod):
            if not isinstance(v, PairV):
                return False
            stack.append((v.first, t.left))
            stack.append((v.second, t.right))
        elif isinstance(t, CoProd):
            if isinstance(v, InLV):
                stack.append((v.inner, t.left))
            elif isinstance(v, InRV):
                stack.append((v.inner, t.right))
            else:
                return False
        elif isinstance(t, ListOf):
            if not isinstance(v, SeqV):
                return False
            stack.extend((item, t.elem) for item in v.items)
        elif isinstance(t, Bang):
            if not isinstance(v, BangV):
                return False
            stack.append((v.inner, t.inner))
        elif isinstance(t, TreeOf):
            if isinstance(v, TreeLeafV):
                pass
            elif isinstance(v, TreeNodeV):
                stack.append((v.left, t))
                stack.append((v.label, t.label))
                stack.append((v.right, t))
            else:
                return False
        else:
            raise TypeError(f"not a type: {t!r}")
    return True


def relabel(v: Value, alloc: LeafAllocator, origin: "dict[int, int] | None" = None) -> Value:
    """Copy of ``v`` with fresh leaf ids; records new->old in ``origin``."""
    if isinstance(v, UnitLeaf):
        new = alloc.fresh()
        if origin is not None:
            origin[new] = v.leaf_id
        return UnitLeaf(new)
    if isinstance(v, PairV):
        # children relabelled left-to-right to keep ids deterministic
        a = relabel(v.first, alloc, origin)
        b = relabel(v.second, alloc, origin)
        return PairV(a, b)
    if isinstance(v, InLV):
        return InLV(relabel(v.inner, alloc, origin))
    if isinstance(v, InRV):
        return InRV(relabel(v.inner, alloc, origin))
    if isinstance(v, SeqV):
        return SeqV(tuple(relabel(x, alloc, origin) for x in v.items))
    if isinstance(v, BangV):
        return BangV(relabel(v.inner, alloc, origin))
    if isinstance(v, TreeLeafV):
        return v
    if isinstance(v, TreeNodeV):
        left = relabel(v.left, alloc, origin)
        label = relabel(v.label, alloc, origin)
        right = relabel(v.right, alloc, origin)
        return TreeNodeV(left, label, right)
    raise TypeError(f"not a value: {v!r}")


def strip_ids(v: Value) -> Value:
    """Canonical form with all leaf ids zeroed; equality modulo renaming."""
    if isinstance(v, UnitLeaf):
        return UnitLeaf(0)
    if isinstance(v, PairV):
        return PairV(strip_ids(v.first), strip_ids(v.second))
    if isinstance(v, InLV):
        return InLV(strip_ids(v.inner))
    if isinstance(v, InRV):
        return InRV(strip_ids(v.inner))
    if isinstance(v, SeqV):
        return SeqV(tuple(strip_ids(x) for x in v.items))
    if isinstance(v, BangV):
        return BangV(strip_ids(v.inner))
    if isinstance(v, TreeLeafV):
        return v
    if isinstance(v, TreeNodeV):
        return TreeNodeV(strip_ids(v.left), strip_ids(v.label), strip_ids(v.right))
    raise TypeError(f"not a value: {v!r}")


def values_equal(a: Value, b: Value) -> bool:
    """Structural equality up to leaf-id renaming."""
    return strip_ids(a) == strip_ids(b)


# ---------------------------------------------------------------------------
# Textual format
#
# value ::= "()" | "(" value "," value ")" | "<" value | ">" value
#         | "[" (value ("," value)*)? "]" | "!" value
# Trees print as "." for a leaf and "(left label right)" for a node.
# The parser additionally accepts "1" for the unit element, which is the
# notation used in worked examples.
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, pos: int, message: str):
        super().__init__(f"at position {pos}: {message}")
        self.pos = pos
        self.message = message


def serialize(v: Value, t: "GradedType | None" = None) -> str:
    if t is not None and not typecheck_value(v, t):
        raise ValueError(f"value does not inhabit {t!r}")
    parts: list[str] = []

    def emit(x: Value) -> None:
        if isinstance(x, UnitLeaf):
            parts.append("()")
        elif isinstance(x, PairV):
            parts.append("(")
            emit(x.first)
            parts.append(",")
            emit(x.second)
            parts.append(")")
        elif isinstance(x, InLV):
            parts.append("<")
            emit(x.inner)
        elif isinstance(x, InRV):
            parts.append(">")
            emit(x.inner)
        elif isinstance(x, SeqV):
            parts.append("[")
            for i, item in enumerate(x.items):
                if i:
                    parts.append(",")
                emit(item)
            parts.append("]")
        elif isinstance(x, BangV):
            parts.append("!")
            emit(x.inner)
        elif isinstance(x, TreeLeafV):
            parts.append(".")
        elif isinstance(x, TreeNodeV):
            parts.append("(")
            emit(x.left)
            parts.append(" ")
            emit(x.label)
            parts.append(" ")
            emit(x.right)
            parts.append(")")
        else:
            raise TypeError(f"not a value: {x!r}")

    emit(v)
    return "".join(parts)


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        if self.pos >= len(self.text):
            raise ParseError(self.pos, "unexpected end of input")
        return self.text[self.pos]

    def take(self, ch: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            got = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(self.pos, f"expected {ch!r}, got {got!r}")
        self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def parse(text: str, t: GradedType) -> Value:
    """Type-directed parse; raises ParseError with a position on bad input."""
    cur = _Cursor(text)
    alloc = LeafAllocator()
    v = _parse_value(cur, t, alloc)
    if not cur.at_end():
        raise ParseError(cur.pos, "trailing input after value")
    return v


def _parse_value(cur: _Cursor, t: GradedType, alloc: LeafAllocator) -> Value:
    if isinstance(t, Zero):
        raise ParseError(cur.pos, "type 0 has no values")
    if isinstance(t, Unit):
        c = cur.peek()
        if c == "1":
            cur.take("1")
            return UnitLeaf(alloc.fresh())
        cur.take("(")
        cur.take(")")
        return UnitLeaf(alloc.fresh())
    if isinstance(t, Prod):
        cur.take("(")
        a = _parse_value(cur, t.left, alloc)
        cur.take(",")
        b = _parse_value(cur, t.right, alloc)
        cur.take(")")
        return PairV(a, b)
    if isinstance(t, CoProd):
        c = cur.peek()
        if c == "<":
            cur.take("<")
            return InLV(_parse_value(cur, t.left, alloc))
        if c == ">":
            cur.take(">")
            return InRV(_parse_value(cur, t.right, alloc))
        raise ParseError(cur.pos, f"expected injection marker for {t!r}, got {c!r}")
    if isinstance(t, ListOf):
        cur.take("[")
        items: list[Value] = []
        if cur.peek() != "]":
            items.append(_parse_value(cur, t.elem, alloc))
            while cur.peek() == ",":
                cur.take(",")
                items.append(_parse_value(cur, t.elem, alloc))
        cur.take("]")
        return SeqV(tuple(items))
    if isinstance(t, Bang):
        cur.take("!")
        return BangV(_parse_value(cur, t.inner, alloc))
    if isinstance(t, TreeOf):
        c = cur.peek()
        if c == ".":
            cur.take(".")
            return TreeLeafV()
        cur.take("(")
        left = _parse_value(cur, t, alloc)
        label = _parse_value(cur, t.label, alloc)
        right = _parse_value(cur, t, alloc)
        cur.take(")")
        return TreeNodeV(left, label, right)
    raise ParseError(cur.pos, f"not a type: {t!r}")


# Convenience constructors used all over the test suite.

def unit(i: int = 0) -> UnitLeaf:
    return UnitLeaf(i)


def seq(*items: Value) -> SeqV:
    return SeqV(tuple(items))
