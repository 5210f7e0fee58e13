"""Finite sets as right-nested co-products of units, and tuple combs.

The i-th element of an n-element set is InR^i (InL ...) around a unit leaf;
products nest the same way.  Path helpers mirror the relation naming of the
structure encoding.
"""
from __future__ import annotations

from .types_values import (
    CoProd,
    GradedType,
    InLV,
    InRV,
    PairV,
    Prod,
    UNIT,
    UnitLeaf,
    Value,
)


def units_coprod(n: int) -> GradedType:
    """1 + ... + 1 (n summands, right comb); n must be positive."""
    if n < 1:
        raise ValueError("a finite alphabet needs at least one letter")
    t: GradedType = UNIT
    for _ in range(n - 1):
        t = CoProd(UNIT, t)
    return t


def coprod_comb(parts) -> GradedType:
    parts = list(parts)
    if not parts:
        raise ValueError("empty co-product")
    t = parts[-1]
    for p in reversed(parts[:-1]):
        t = CoProd(p, t)
    return t


def prod_comb(parts) -> GradedType:
    parts = list(parts)
    if not parts:
        return UNIT
    t = parts[-1]
    for p in reversed(parts[:-1]):
        t = Prod(p, t)
    return t


def comb_path(i: int, n: int) -> str:
    """Path of the i-th part inside a right comb of n parts."""
    if not 0 <= i < n:
        raise ValueError(f"part {i} of {n}")
    if n == 1:
        return ""
    return "R" * i + ("L" if i < n - 1 else "")


def comb_node_paths(n: int):
    """Paths of the binary nodes of a right comb of n parts (top down)."""
    return ["R" * j for j in range(n - 1)]


def inject_comb(i: int, n: int, inner: Value) -> Value:
    """Wrap ``inner`` as the i-th variant of a right comb of n."""
    if not 0 <= i < n:
        raise ValueError(f"variant {i} of {n}")
    v = inner
    if i < n - 1:
        v = InLV(v)
    for _ in range(i):
        v = InRV(v)
    return v


def unit_variant(i: int, n: int, leaf_id: int = 0) -> Value:
    return inject_comb(i, n, UnitLeaf(leaf_id))


def variant_of(v: Value, n: int) -> tuple[int, Value]:
    """Inverse of inject_comb."""
    i = 0
    while i < n - 1:
        if isinstance(v, InLV):
            return i, v.inner
        if not isinstance(v, InRV):
            raise ValueError(f"not a comb variant: {v!r}")
        v = v.inner
        i += 1
    return n - 1, v


def tuple_comb(parts) -> Value:
    parts = list(parts)
    if not parts:
        raise ValueError("tuple_comb of nothing; use a unit leaf")
    v = parts[-1]
    for p in reversed(parts[:-1]):
        v = PairV(p, v)
    return v


def untuple_comb(v: Value, n: int):
    out = []
    for _ in range(n - 1):
        if not isinstance(v, PairV):
            raise ValueError(f"not a tuple comb: {v!r}")
        out.append(v.first)
        v = v.second
    out.append(v)
    return out
