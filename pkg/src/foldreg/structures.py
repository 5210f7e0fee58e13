"""Finite relational structures encoding values of graded list types.

Each type-constructor occurrence is addressed by the path from the root
(L/R for pair and co-pair children, e for list items and tree labels; the
grading constructor is transparent).  The relation it contributes is named
``kind@path``:

* co-pair: ``tag@p``, nullary, true on the left variant; promoted to a
  unary relation once some ancestor is a list or tree constructor,
* pair: ``fst@p``, unary, marking elements of the first coordinate,
* list: ``ord@p``, binary, "comes no later than",
* tree: ``desc@p`` (ancestor-or-self) and ``doc@p`` (infix order), binary.

Grades count the grading constructors wrapped around an element.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .types_values import (
    Bang,
    BangV,
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
    Unit,
    UnitLeaf,
    Value,
    Zero,
    typecheck_value,
)


@dataclass(frozen=True)
class Vocabulary:
    """Ordered set of relation names with arities."""

    rels: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [n for n, _ in self.rels]
        if len(names) != len(set(names)):
            raise ValueError("duplicate relation names")

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.rels)
            object.__setattr__(self, "_hash", h)
        return h

    @staticmethod
    def make(pairs) -> "Vocabulary":
        return Vocabulary(tuple(sorted(pairs)))

    def arity(self, name: str) -> int:
        for n, a in self.rels:
            if n == name:
                return a
        raise KeyError(name)

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.rels)

    def __contains__(self, name: str) -> bool:
        return any(n == name for n, _ in self.rels)

    def max_arity(self) -> int:
        return max((a for _, a in self.rels), default=0)


class NotInImage(ValueError):
    """Raised by decode when a structure does not encode any value."""


class NotEncodable(ValueError):
    """Raised by encode on list or tree items with an empty universe."""


@dataclass(eq=False)
class Structure:
    """Hashed by identity; compare content with structures_isomorphic."""

    vocab: Vocabulary
    universe: tuple[int, ...]
    relations: dict[str, frozenset]
    grades: dict[int, int]

    def __post_init__(self):
        missing = [n for n in self.vocab.names() if n not in self.relations]
        for n in missing:
            self.relations[n] = frozenset()
        for i in self.universe:
            self.grades.setdefault(i, 0)

    def holds(self, name: str, tup: tuple[int, ...]) -> bool:
        return tup in self.relations[name]

    def nullary_true(self, name: str) -> bool:
        return () in self.relations[name]

    def dump(self) -> str:
        lines = ["UNIVERSE"]
        for i in sorted(self.universe):
            lines.append(f"{i}:{self.grades[i]}")
        for name, arity in self.vocab.rels:
            tuples = sorted(self.relations.get(name, frozenset()))
            body = ";".join("(" + ",".join(map(str, t)) + ")" if t else "()"
                            for t in tuples)
            lines.append(f"{name}({arity}): {body}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse_dump(text: str) -> "Structure":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "UNIVERSE":
            raise ValueError("structure dump must start with UNIVERSE")
        universe: list[int] = []
        grades: dict[int, int] = {}
        relations: dict[str, frozenset] = {}
        rels: list[tuple[str, int]] = []
        i = 1
        while i < len(lines) and ":" in lines[i] and "(" not in lines[i].split(":")[0]:
            ident, g = lines[i].split(":")
            universe.append(int(ident))
            grades[int(ident)] = int(g)
            i += 1
        for ln in lines[i:]:
            head, _, body = ln.partition(":")
            name, _, arity_part = head.partition("(")
            arity = int(arity_part.rstrip(")"))
            rels.append((name, arity))
            tuples = set()
            for part in body.strip().split(";"):
                part = part.strip()
                if not part:
                    continue
                inner = part.strip("()")
                tup = tuple(int(x) for x in inner.split(",") if x != "")
                tuples.add(tup)
            relations[name] = frozenset(tuples)
        return Structure(Vocabulary.make(rels), tuple(sorted(universe)),
                         relations, grades)


def rel_name(kind: str, path: str) -> str:
    return f"{kind}@{path}"


def rename_prefixed(name: str, prefix: str) -> str:
    kind, _, path = name.partition("@")
    return f"{kind}@{prefix}{path}"


def vocab_of(t: GradedType, path: str = "", under_list: bool = False) -> Vocabulary:
    rels: list[tuple[str, int]] = []
    _collect_vocab(t, path, under_list, rels)
    return Vocabulary.make(rels)


def _collect_vocab(t, path, under_list, rels) -> None:
    if isinstance(t, (Zero, Unit)):
        return
    if isinstance(t, Prod):
        rels.append((rel_name("fst", path), 1))
        _collect_vocab(t.left, path + "L", under_list, rels)
        _collect_vocab(t.right, path + "R", under_list, rels)
    elif isinstance(t, CoProd):
        rels.append((rel_name("tag", path), 1 if under_list else 0))
        _collect_vocab(t.left, path + "L", under_list, rels)
        _collect_vocab(t.right, path + "R", under_list, rels)
    elif isinstance(t, ListOf):
        rels.append((rel_name("ord", path), 2))
        _collect_vocab(t.elem, path + "e", True, rels)
    elif isinstance(t, TreeOf):
        rels.append((rel_name("desc", path), 2))
        rels.append((rel_name("doc", path), 2))
        _collect_vocab(t.label, path + "e", True, rels)
    elif isinstance(t, Bang):
        _collect_vocab(t.inner, path, under_list, rels)
    else:
        raise TypeError(f"not a type: {t!r}")


class _Enc:
    """Accumulates relation facts while walking a value."""

    def __init__(self):
        self.facts: dict[str, set] = {}

    def add(self, name: str, tup: tuple[int, ...]) -> None:
        self.facts.setdefault(name, set()).add(tup)


def encode(v: Value, t: GradedType) -> Structure:
    """Relational encoding of a well-typed value; ids are the leaf ids."""
    if not typecheck_value(v, t):
        raise ValueError(f"value does not inhabit {t!r}")
    enc = _Enc()
    grades: dict[int, int] = {}
    elements, nullary = _encode_rec(v, t, "", 0, enc, grades)
    for name, val in nullary.items():
        if val:
            enc.add(name, ())
        else:
            enc.facts.setdefault(name, set())
    vocab = vocab_of(t)
    relations = {n: frozenset(enc.facts.get(n, set())) for n in vocab.names()}
    return Structure(vocab, tuple(sorted(elements)), relations, grades)


def _encode_rec(v, t, path, g, enc, grades):
    """Returns (elements, pending nullary facts not yet promoted)."""
    if isinstance(t, Unit):
        assert isinstance(v, UnitLeaf)
        grades[v.leaf_id] = g
        return [v.leaf_id], {}
    if isinstance(t, Bang):
        assert isinstance(v, BangV)
        return _encode_rec(v.inner, t.inner, path, g + 1, enc, grades)
    if isinstance(t, Prod):
        assert isinstance(v, PairV)
        left, null_l = _encode_rec(v.first, t.left, path + "L", g, enc, grades)
        right, null_r = _encode_rec(v.second, t.right, path + "R", g, enc, grades)
        for x in left:
            enc.add(rel_name("fst", path), (x,))
        null_l.update(null_r)
        return left + right, null_l
    if isinstance(t, CoProd):
        side = "L" if isinstance(v, InLV) else "R"
        sub = t.left if side == "L" else t.right
        elements, nullary = _encode_rec(v.inner, sub, path + side, g, enc, grades)
        nullary[rel_name("tag", path)] = side == "L"
        return elements, nullary
    if isinstance(t, ListOf):
        assert isinstance(v, SeqV)
        items = []
        for item_value in v.items:
            item_enc = _Enc()
            els, nullary = _encode_rec(item_value, t.elem, path + "e", g,
                                       item_enc, grades)
            if not els:
                raise NotEncodable(
                    f"list item of type {t.elem!r} has an empty universe")
            # promote this item's pending nullary facts to unary facts
            for name, val in nullary.items():
                if val:
                    for x in els:
                        item_enc.add(name, (x,))
                else:
                    item_enc.facts.setdefault(name, set())
            for name, tuples in item_enc.facts.items():
                for tup in tuples:
                    enc.add(name, tup)
            items.append(els)
        order = rel_name("ord", path)
        enc.facts.setdefault(order, set())
        for i, els_i in enumerate(items):
            for els_j in items[i:]:
                for x in els_i:
                    for y in els_j:
                        enc.add(order, (x, y))
            for x in els_i:
                for y in els_i:
                    enc.add(order, (x, y))
        return [x for els in items for x in els], {}
    if isinstance(t, TreeOf):
        assert isinstance(v, (TreeLeafV, TreeNodeV))
        desc = rel_name("desc", path)
        doc = rel_name("doc", path)
        enc.facts.setdefault(desc, set())
        enc.facts.setdefault(doc, set())
        infix: list[list[int]] = []  # label element groups in document order

        def walk(node):
            """Returns the element groups of the node's subtree, infix order."""
            if isinstance(node, TreeLeafV):
                return []
            item_enc = _Enc()
            els, nullary = _encode_rec(node.label, t.label, path + "e", g,
                                       item_enc, grades)
            if not els:
                raise NotEncodable(
                    f"tree label of type {t.label!r} has an empty universe")
            for name, val in nullary.items():
                if val:
                    for x in els:
                        item_enc.add(name, (x,))
                else:
                    item_enc.facts.setdefault(name, set())
            for name, tuples in item_enc.facts.items():
                for tup in tuples:
                    enc.add(name, tup)
            left_groups = walk(node.left)
            right_groups = walk(node.right)
            below = left_groups + [els] + right_groups
            for group in below:
                for x in els:
                    for y in group:
                        enc.add(desc, (x, y))
            return below

        groups = walk(v)
        infix.extend(groups)
        for i, group_i in enumerate(infix):
            for group_j in infix[i:]:
                for x in group_i:
                    for y in group_j:
                        enc.add(doc, (x, y))
            for x in group_i:
                for y in group_i:
                    enc.add(doc, (x, y))
        return [x for group in infix for x in group], {}
    raise TypeError(f"cannot encode at type {t!r}")


def decode(s: Structure, t: GradedType) -> Value:
    """Inverse of encode on its image; raises NotInImage otherwise."""
    if s.vocab != vocab_of(t):
        raise NotInImage(f"vocabulary does not match {t!r}")
    return _decode_rec(s, t, "", 0, list(s.universe), None)


def _decode_rec(s, t, path, g, elements, witness) -> Value:
    """Decode the scope ``elements``; ``witness`` is the full element set of
    the innermost enclosing list or tree item, which carries the promoted
    co-pair tags even when the variant's own scope is empty."""
    if isinstance(t, Zero):
        raise NotInImage("the type 0 has no value-level inhabitant")
    if isinstance(t, Unit):
        if len(elements) != 1:
            raise NotInImage(
                f"type 1 at {path!r} needs exactly one element, got {elements}")
        (x,) = elements
        if s.grades.get(x) != g:
            raise NotInImage(f"element {x} has grade {s.grades.get(x)}, want {g}")
        return UnitLeaf(x)
    if isinstance(t, Bang):
        return BangV(_decode_rec(s, t.inner, path, g + 1, elements, witness))
    if isinstance(t, Prod):
        fst = s.relations[rel_name("fst", path)]
        left = [x for x in elements if (x,) in fst]
        right = [x for x in elements if (x,) not in fst]
        return PairV(_decode_rec(s, t.left, path + "L", g, left, witness),
                     _decode_rec(s, t.right, path + "R", g, right, witness))
    if isinstance(t, CoProd):
        name = rel_name("tag", path)
        if s.vocab.arity(name) == 0:
            is_left = s.nullary_true(name)
        else:
            scope = witness if witness is not None else elements
            tagged = [x for x in scope if (x,) in s.relations[name]]
            if not scope:
                raise NotInImage(
                    f"empty scope cannot choose a variant at {path!r}")
            if tagged and len(tagged) != len(scope):
                raise NotInImage(f"relation {name} splits one item scope")
            is_left = bool(tagged)
        if is_left:
            return InLV(_decode_rec(s, t.left, path + "L", g, elements, witness))
        return InRV(_decode_rec(s, t.right, path + "R", g, elements, witness))
    if isinstance(t, ListOf):
        order = s.relations[rel_name("ord", path)]
        groups = _order_classes(elements, order, rel_name("ord", path))
        items = tuple(
            _decode_rec(s, t.elem, path + "e", g, group, group)
            for group in groups)
        return SeqV(items)
    if isinstance(t, TreeOf):
        return _decode_tree(s, t, path, g, elements)
    raise NotInImage(f"cannot decode at type {t!r}")


def _order_classes(elements, order, name):
    """Split elements into blocks of a total preorder, earliest first."""
    remaining = list(elements)
    groups = []
    while remaining:
        # minimal block: x with x <= y for all y
        block = [x for x in remaining
                 if all((x, y) in order for y in remaining)]
        if not block:
            raise NotInImage(f"relation {name} is not a total preorder")
        for x in block:
            for y in block:
                if (x, y) not in order:
                    raise NotInImage(f"relation {name} is not reflexive on a block")
        remaining = [x for x in remaining if x not in block]
        for x in block:
            for y in remaining:
                if (y, x) in order:
                    raise NotInImage(f"relation {name} is not antisymmetric "
                                     f"across blocks")
        groups.append(sorted(block))
    return groups


def _decode_tree(s, t, path, g, elements) -> Value:
    desc = s.relations[rel_name("desc", path)]
    doc = s.relations[rel_name("doc", path)]
    if not elements:
        return TreeLeafV()
    # nodes are the equivalence classes of mutual descendancy
    nodes = []
    seen = set()
    for x in elements:
        if x in seen:
            continue
        cls = [y for y in elements
               if (x, y) in desc and (y, x) in desc]
        if x not in cls:
            raise NotInImage(f"{rel_name('desc', path)} is not reflexive")
        seen.update(cls)
        nodes.append(sorted(cls))

    def build(node_set):
        if not node_set:
            return TreeLeafV()
        roots = [n for n in node_set
                 if all((n[0], m[0]) in desc for m in node_set)]
        if len(roots) != 1:
            raise NotInImage(f"tree at {path!r} lacks a unique root")
        root = roots[0]
        rest = [m for m in node_set if m is not root]
        left = [m for m in rest if (m[0], root[0]) in doc
                and (root[0], m[0]) not in doc]
        right = [m for m in rest if (root[0], m[0]) in doc
                 and (m[0], root[0]) not in doc]
        if len(left) + len(right) != len(rest):
            raise NotInImage(f"{rel_name('doc', path)} does not separate "
                             f"subtrees at {path!r}")
        for m in left + right:
            if (root[0], m[0]) not in desc:
                raise NotInImage(f"node not descendant of root at {path!r}")
        label = _decode_rec(s, t.label, path + "e", g, root, root)
        return TreeNodeV(build(left), label, build(right))

    value = build(nodes)
    return value


def restrict(s: Structure, level: int) -> Structure:
    """Induced substructure on the elements of grade at least ``level``."""
    keep = {x for x in s.universe if s.grades[x] >= level}
    relations = {}
    for name, arity in s.vocab.rels:
        tuples = s.relations.get(name, frozenset())
        if arity == 0:
            relations[name] = tuples
        else:
            relations[name] = frozenset(
                t for t in tuples if all(x in keep for x in t))
    grades = {x: s.grades[x] for x in keep}
    return Structure(s.vocab, tuple(sorted(keep)), relations, grades)


def pair_vocab(left: Vocabulary, right: Vocabulary) -> Vocabulary:
    rels = [(rel_name("fst", ""), 1)]
    rels.extend((rename_prefixed(n, "L"), a) for n, a in left.rels)
    rels.extend((rename_prefixed(n, "R"), a) for n, a in right.rels)
    return Vocabulary.make(rels)


def pair_structure(left: Structure, right: Structure) -> Structure:
    """Product structure; the element ids of the parts must be disjoint."""
    overlap = set(left.universe) & set(right.universe)
    if overlap:
        raise ValueError(f"universes overlap on {sorted(overlap)[:5]}")
    relations = {rel_name("fst", ""): frozenset((x,) for x in left.universe)}
    for name, _ in left.vocab.rels:
        relations[rename_prefixed(name, "L")] = left.relations[name]
    for name, _ in right.vocab.rels:
        relations[rename_prefixed(name, "R")] = right.relations[name]
    grades = dict(left.grades)
    grades.update(right.grades)
    return Structure(pair_vocab(left.vocab, right.vocab),
                     tuple(sorted(left.universe + right.universe)),
                     relations, grades)


def structures_isomorphic(a: Structure, b: Structure) -> bool:
    """Equality of structures whose ids already correspond (no search)."""
    return (a.vocab == b.vocab
            and tuple(sorted(a.universe)) == tuple(sorted(b.universe))
            and all(a.relations[n] == b.relations[n] for n in a.vocab.names())
            and all(a.grades[x] == b.grades[x] for x in a.universe))
