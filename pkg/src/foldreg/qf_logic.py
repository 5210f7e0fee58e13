"""Quantifier-free formulas, interpretations and atomic theories.

Distinguished elements need not belong to a structure's universe; such
positions are Absent, every atom touching an Absent position is false, and
equality involving an Absent position is false (even with itself).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .structures import (
    Structure,
    Vocabulary,
    pair_vocab,
    rel_name,
    rename_prefixed,
    vocab_of,
)
from .types_values import (
    CoProd,
    GradedType,
    ListOf,
    Prod,
    UNIT,
    Unit,
    ZERO,
    Zero,
    UnitLeaf,
)

ABSENT = None  # marker for distinguished elements outside the universe


# ---------------------------------------------------------------------------
# Formulas (variables are 1-based indices)
# ---------------------------------------------------------------------------

class QfFormula:
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True)
class Const(QfFormula):
    value: bool


@dataclass(frozen=True)
class Rel(QfFormula):
    name: str
    args: tuple[int, ...] = ()


@dataclass(frozen=True)
class Eq(QfFormula):
    a: int
    b: int


@dataclass(frozen=True)
class Not(QfFormula):
    sub: QfFormula


@dataclass(frozen=True)
class And(QfFormula):
    left: QfFormula
    right: QfFormula


@dataclass(frozen=True)
class Or(QfFormula):
    left: QfFormula
    right: QfFormula


TRUE = Const(True)
FALSE = Const(False)


def conj(*fs: QfFormula) -> QfFormula:
    fs = tuple(f for f in fs if f != TRUE)
    if not fs:
        return TRUE
    if any(f == FALSE for f in fs):
        return FALSE
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: QfFormula) -> QfFormula:
    fs = tuple(f for f in fs if f != FALSE)
    if not fs:
        return FALSE
    if any(f == TRUE for f in fs):
        return TRUE
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def max_var(f: QfFormula) -> int:
    if isinstance(f, Rel):
        return max(f.args, default=0)
    if isinstance(f, Eq):
        return max(f.a, f.b)
    if isinstance(f, Not):
        return max_var(f.sub)
    if isinstance(f, (And, Or)):
        return max(max_var(f.left), max_var(f.right))
    return 0


def map_atoms(f: QfFormula, on_rel, on_eq=None) -> QfFormula:
    """Rebuild ``f`` with relation atoms replaced via ``on_rel(rel)``."""
    if isinstance(f, Rel):
        return on_rel(f)
    if isinstance(f, Eq):
        return on_eq(f) if on_eq else f
    if isinstance(f, Not):
        return Not(map_atoms(f.sub, on_rel, on_eq))
    if isinstance(f, And):
        return And(map_atoms(f.left, on_rel, on_eq),
                   map_atoms(f.right, on_rel, on_eq))
    if isinstance(f, Or):
        return Or(map_atoms(f.left, on_rel, on_eq),
                  map_atoms(f.right, on_rel, on_eq))
    return f


def eval_formula(f: QfFormula, s: Structure, assignment: tuple) -> bool:
    """Evaluate with ids (or ABSENT) assigned to the variables."""
    if max_var(f) > len(assignment):
        raise ValueError(
            f"formula uses x{max_var(f)} but only {len(assignment)} "
            f"values were assigned")
    universe = None
    if any(a is not ABSENT for a in assignment):
        universe = set(s.universe)

    def ev(g) -> bool:
        if isinstance(g, Const):
            return g.value
        if isinstance(g, Rel):
            ids = []
            for i in g.args:
                x = assignment[i - 1]
                if x is ABSENT or x not in universe:
                    return False
                ids.append(x)
            if len(ids) != s.vocab.arity(g.name):
                raise ValueError(f"arity mismatch for {g.name}")
            return tuple(ids) in s.relations[g.name]
        if isinstance(g, Eq):
            x, y = assignment[g.a - 1], assignment[g.b - 1]
            if x is ABSENT or y is ABSENT:
                return False
            if x not in universe or y not in universe:
                return False
            return x == y
        if isinstance(g, Not):
            return not ev(g.sub)
        if isinstance(g, And):
            return ev(g.left) and ev(g.right)
        if isinstance(g, Or):
            return ev(g.left) or ev(g.right)
        raise TypeError(f"not a formula: {g!r}")

    return ev(f)


# ---------------------------------------------------------------------------
# Interpretations
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class QfInterp:
    """Identity-functor interpretation given by quantifier-free formulas."""

    in_vocab: Vocabulary
    out_vocab: Vocabulary
    universe: QfFormula
    rel_defs: dict[str, QfFormula]
    _transition_cache: dict = field(default_factory=dict, repr=False)
    _compiled: dict = field(default_factory=dict, repr=False)

    def validate(self) -> None:
        if max_var(self.universe) > 1:
            raise ValueError("universe formula must have one variable")
        for name, arity in self.out_vocab.rels:
            if name not in self.rel_defs:
                raise ValueError(f"missing definition for {name}")
            if max_var(self.rel_defs[name]) > arity:
                raise ValueError(f"definition of {name} uses too many variables")

    def compiled(self, key, formula):
        fn = self._compiled.get(key)
        if fn is None:
            fn = compile_formula(formula)
            self._compiled[key] = fn
        return fn


def compile_formula(f: QfFormula):
    """Closure evaluating ``f`` against (relations, universe set, assignment).

    Matches eval_formula's Absent conventions; assignment entries are ids
    or ABSENT, and ids outside the universe count as Absent.
    """
    if isinstance(f, Const):
        value = f.value
        return lambda rels, universe, a: value
    if isinstance(f, Rel):
        name = f.name
        idxs = tuple(i - 1 for i in f.args)
        if not idxs:
            return lambda rels, universe, a: () in rels[name]
        if len(idxs) == 1:
            (i,) = idxs

            def unary(rels, universe, a, name=name, i=i):
                x = a[i]
                return (x is not ABSENT and x in universe
                        and (x,) in rels[name])

            return unary

        def atom(rels, universe, a, name=name, idxs=idxs):
            ids = []
            for i in idxs:
                x = a[i]
                if x is ABSENT or x not in universe:
                    return False
                ids.append(x)
            return tuple(ids) in rels[name]

        return atom
    if isinstance(f, Eq):
        i, j = f.a - 1, f.b - 1

        def eq(rels, universe, a, i=i, j=j):
            x, y = a[i], a[j]
            return (x is not ABSENT and y is not ABSENT
                    and x in universe and y in universe and x == y)

        return eq
    if isinstance(f, Not):
        sub = compile_formula(f.sub)
        return lambda rels, universe, a: not sub(rels, universe, a)
    if isinstance(f, And):
        left, right = compile_formula(f.left), compile_formula(f.right)
        return lambda rels, universe, a: (left(rels, universe, a)
                                          and right(rels, universe, a))
    if isinstance(f, Or):
        left, right = compile_formula(f.left), compile_formula(f.right)
        return lambda rels, universe, a: (left(rels, universe, a)
                                          or right(rels, universe, a))
    raise TypeError(f"not a formula: {f!r}")


def identity_interp(vocab: Vocabulary) -> QfInterp:
    defs = {name: Rel(name, tuple(range(1, arity + 1)))
            for name, arity in vocab.rels}
    return QfInterp(vocab, vocab, TRUE, defs)


def apply_interp(interp: QfInterp, s: Structure) -> Structure:
    if s.vocab != interp.in_vocab:
        raise ValueError("structure vocabulary does not match interpretation")
    rels, uni = s.relations, set(s.universe)
    keep = interp.compiled("universe", interp.universe)
    universe = tuple(x for x in s.universe if keep(rels, uni, (x,)))
    relations: dict[str, frozenset] = {}
    for name, arity in interp.out_vocab.rels:
        fn = interp.compiled(name, interp.rel_defs[name])
        if arity == 0:
            relations[name] = frozenset({()} if fn(rels, uni, ()) else set())
            continue
        tuples = set()
        for tup in itertools.product(universe, repeat=arity):
            if fn(rels, uni, tup):
                tuples.add(tup)
        relations[name] = frozenset(tuples)
    grades = {x: s.grades[x] for x in universe}
    return Structure(interp.out_vocab, universe, relations, grades)


def compose_interp(first: QfInterp, second: QfInterp) -> QfInterp:
    """Substitution composition; semantically apply ``first`` then ``second``."""
    if first.out_vocab != second.in_vocab:
        raise ValueError("vocabulary mismatch in composition")

    def subst(f: QfFormula) -> QfFormula:
        def on_rel(rel: Rel) -> QfFormula:
            inner = first.rel_defs[rel.name]
            return _rename_vars(inner, rel.args)
        return map_atoms(f, on_rel)

    def survives(var: int) -> QfFormula:
        return _rename_vars(first.universe, (var,))

    universe = conj(survives(1), subst(second.universe))
    rel_defs = {}
    for name, arity in second.out_vocab.rels:
        guarded = subst(second.rel_defs[name])
        guards = [survives(i) for i in range(1, arity + 1)]
        rel_defs[name] = conj(*guards, guarded)
    return QfInterp(first.in_vocab, second.out_vocab, universe, rel_defs)


def _rename_vars(f: QfFormula, mapping: tuple[int, ...]) -> QfFormula:
    """Substitute variable i by mapping[i-1]."""
    def on_rel(rel: Rel) -> QfFormula:
        return Rel(rel.name, tuple(mapping[i - 1] for i in rel.args))

    def on_eq(eq: Eq) -> QfFormula:
        return Eq(mapping[eq.a - 1], mapping[eq.b - 1])

    return map_atoms(f, on_rel, on_eq)


# ---------------------------------------------------------------------------
# Atomic theories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AtomicTheory:
    """The quantifier-free facts about k distinguished elements.

    ``present`` says which positions are in the universe; ``eq_repr`` maps
    each present position to the least equal position (-1 when absent);
    ``nullary`` lists the true boolean relations, and ``atoms`` the true
    relation facts over present positions (0-based).
    """

    vocab: Vocabulary
    arity: int
    present: tuple[bool, ...]
    eq_repr: tuple[int, ...]
    nullary: frozenset
    atoms: frozenset

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.vocab, self.arity, self.present, self.eq_repr,
                      self.nullary, self.atoms))
            object.__setattr__(self, "_hash", h)
        return h

    def is_present(self, i: int) -> bool:
        return self.present[i]


def theory_of(s: Structure, tup) -> AtomicTheory:
    """Canonical theory of the tuple (entries: ids or ABSENT) in ``s``.

    Ids that are not in the universe count as Absent, so the theory of a
    tuple can be taken after elements were deleted by an interpretation.
    """
    universe = set(s.universe)
    ids = tuple(x if (x is not ABSENT and x in universe) else ABSENT
                for x in tup)
    k = len(ids)
    present = tuple(x is not ABSENT for x in ids)
    eq_repr = []
    for i, x in enumerate(ids):
        if x is ABSENT:
            eq_repr.append(-1)
        else:
            eq_repr.append(next(j for j, y in enumerate(ids) if y == x))
    nullary = frozenset(n for n, a in s.vocab.rels
                        if a == 0 and s.nullary_true(n))
    atoms = set()
    positions = [i for i in range(k) if present[i]]
    for name, arity in s.vocab.rels:
        if arity == 0:
            continue
        rel = s.relations[name]
        for combo in itertools.product(positions, repeat=arity):
            if tuple(ids[i] for i in combo) in rel:
                atoms.add((name, combo))
    return AtomicTheory(s.vocab, k, present, tuple(eq_repr), nullary,
                        frozenset(atoms))


def sym_eval(f: QfFormula, th: AtomicTheory, assignment: tuple) -> bool:
    """Evaluate a formula against a theory; assignment maps variables to
    theory positions (or ABSENT)."""
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Rel):
        if not f.args:
            return f.name in th.nullary
        pos = []
        for i in f.args:
            p = assignment[i - 1]
            if p is ABSENT or not th.present[p]:
                return False
            pos.append(p)
        return (f.name, tuple(pos)) in th.atoms
    if isinstance(f, Eq):
        pa, pb = assignment[f.a - 1], assignment[f.b - 1]
        if pa is ABSENT or pb is ABSENT:
            return False
        if not (th.present[pa] and th.present[pb]):
            return False
        return th.eq_repr[pa] == th.eq_repr[pb]
    if isinstance(f, Not):
        return not sym_eval(f.sub, th, assignment)
    if isinstance(f, And):
        return sym_eval(f.left, th, assignment) and sym_eval(f.right, th, assignment)
    if isinstance(f, Or):
        return sym_eval(f.left, th, assignment) or sym_eval(f.right, th, assignment)
    raise TypeError(f"not a formula: {f!r}")


def theory_transition(interp: QfInterp, th: AtomicTheory) -> AtomicTheory:
    """The theory of (I(A), tuple) computed from the theory of (A, tuple).

    Well-defined because quantifier-free equivalence is a congruence for
    quantifier-free interpretations.  Results are cached per interpretation.
    """
    cached = interp._transition_cache.get(th)
    if cached is not None:
        return cached
    if th.vocab != interp.in_vocab:
        raise ValueError("theory vocabulary does not match interpretation")
    k = th.arity
    present = tuple(th.present[i] and sym_eval(interp.universe, th, (i,))
                    for i in range(k))
    eq_repr = []
    for i in range(k):
        if not present[i]:
            eq_repr.append(-1)
        else:
            eq_repr.append(next(j for j in range(k)
                                if present[j] and th.eq_repr[j] == th.eq_repr[i]))
    nullary = set()
    atoms = set()
    positions = [i for i in range(k) if present[i]]
    for name, arity in interp.out_vocab.rels:
        definition = interp.rel_defs[name]
        if arity == 0:
            if sym_eval(definition, th, ()):
                nullary.add(name)
            continue
        for combo in itertools.product(positions, repeat=arity):
            if sym_eval(definition, th, combo):
                atoms.add((name, combo))
    out = AtomicTheory(interp.out_vocab, k, present, tuple(eq_repr),
                       frozenset(nullary), frozenset(atoms))
    interp._transition_cache[th] = out
    return out


def project_theory(th: AtomicTheory, positions: tuple[int, ...]) -> AtomicTheory:
    """Theory of the sub-tuple at the given positions."""
    remap = {p: i for i, p in enumerate(positions)}
    present = tuple(th.present[p] for p in positions)
    eq_repr = []
    for i, p in enumerate(positions):
        if not present[i]:
            eq_repr.append(-1)
        else:
            eq_repr.append(next(j for j, q in enumerate(positions)
                                if present[j] and th.eq_repr[q] == th.eq_repr[p]))
    atoms = frozenset((name, tuple(remap[p] for p in combo))
                      for name, combo in th.atoms
                      if all(p in remap for p in combo))
    return AtomicTheory(th.vocab, len(positions), present, tuple(eq_repr),
                        th.nullary, atoms)


_PAIR_CACHE: dict = {}


def pair_theory(th_left: AtomicTheory, th_right: AtomicTheory,
                sides: tuple[str, ...]) -> AtomicTheory:
    """Theory of the interleaved tuple in the product structure.

    ``sides`` assigns each combined position to 'L' or 'R'; the positions of
    each side theory are consumed in order.
    """
    key = (th_left, th_right, sides)
    cached = _PAIR_CACHE.get(key)
    if cached is not None:
        return cached
    n_left = sum(1 for s in sides if s == "L")
    if n_left != th_left.arity or len(sides) - n_left != th_right.arity:
        raise ValueError("interleaving does not match theory arities")
    vocab = pair_vocab(th_left.vocab, th_right.vocab)
    local: list[tuple[str, int]] = []
    counters = {"L": 0, "R": 0}
    for s in sides:
        local.append((s, counters[s]))
        counters[s] += 1
    theories = {"L": th_left, "R": th_right}
    k = len(sides)
    present = tuple(theories[s].present[i] for s, i in local)
    eq_repr = []
    for p in range(k):
        s, i = local[p]
        if not present[p]:
            eq_repr.append(-1)
        else:
            eq_repr.append(next(
                q for q in range(k)
                if local[q][0] == s and present[q]
                and theories[s].eq_repr[local[q][1]] == theories[s].eq_repr[i]))
    nullary = set()
    for side in ("L", "R"):
        for name in theories[side].nullary:
            nullary.add(rename_prefixed(name, side))
    atoms = set()
    for p in range(k):
        if local[p][0] == "L" and present[p]:
            atoms.add((rel_name("fst", ""), (p,)))
    by_side = {"L": [], "R": []}
    for p in range(k):
        by_side[local[p][0]].append(p)
    for side in ("L", "R"):
        th = theories[side]
        for name, combo in th.atoms:
            renamed = rename_prefixed(name, side)
            # combo uses side positions; translate back to combined positions
            back = tuple(by_side[side][i] for i in combo)
            atoms.add((renamed, back))
    out = AtomicTheory(vocab, k, present, tuple(eq_repr), frozenset(nullary),
                       frozenset(atoms))
    _PAIR_CACHE[key] = out
    return out


def count_theory_bound(vocab: Vocabulary, k: int) -> int:
    """A finite upper bound on the number of canonical theories."""
    import math

    def bell(n):
        # partitions of an n-set
        b = [[1]]
        for i in range(1, n + 1):
            row = [b[-1][-1]]
            for j in range(i):
                row.append(row[-1] + b[-1][j])
            b.append(row)
        return b[n][0] if n else 1

    n_null = sum(1 for _, a in vocab.rels if a == 0)
    total = 0
    for p in range(k + 1):
        subsets = math.comb(k, p)
        atoms = 1
        for _, a in vocab.rels:
            if a >= 1:
                atoms *= 2 ** (p ** a)
        total += subsets * bell(p) * atoms
    return total * (2 ** n_null)


# ---------------------------------------------------------------------------
# Interpretation files
# ---------------------------------------------------------------------------

def interp_to_text(interp: QfInterp) -> str:
    lines = ["VOCAB-IN"]
    lines += [f"{n} {a}" for n, a in interp.in_vocab.rels]
    lines.append("VOCAB-OUT")
    lines += [f"{n} {a}" for n, a in interp.out_vocab.rels]
    lines.append(f"UNIVERSE: {formula_to_text(interp.universe)}")
    for name, _ in interp.out_vocab.rels:
        lines.append(f"REL {name}: {formula_to_text(interp.rel_defs[name])}")
    return "\n".join(lines) + "\n"


def interp_from_text(text: str) -> QfInterp:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    section = None
    in_rels: list[tuple[str, int]] = []
    out_rels: list[tuple[str, int]] = []
    universe = None
    rel_defs: dict[str, QfFormula] = {}
    for ln in lines:
        if ln == "VOCAB-IN":
            section = in_rels
            continue
        if ln == "VOCAB-OUT":
            section = out_rels
            continue
        if ln.startswith("UNIVERSE:"):
            universe = parse_formula(ln.split(":", 1)[1])
            continue
        if ln.startswith("REL "):
            head, body = ln[4:].split(":", 1)
            rel_defs[head.strip()] = parse_formula(body)
            continue
        if section is None:
            raise ValueError(f"unexpected line {ln!r}")
        name, arity = ln.rsplit(" ", 1)
        section.append((name.strip(), int(arity)))
    if universe is None:
        raise ValueError("missing UNIVERSE section")
    interp = QfInterp(Vocabulary.make(in_rels), Vocabulary.make(out_rels),
                      universe, rel_defs)
    interp.validate()
    return interp


def formula_to_text(f: QfFormula) -> str:
    if isinstance(f, Const):
        return "T" if f.value else "F"
    if isinstance(f, Rel):
        return f"{f.name}({','.join('x%d' % i for i in f.args)})"
    if isinstance(f, Eq):
        return f"x{f.a}=x{f.b}"
    if isinstance(f, Not):
        return f"~{_paren(f.sub)}"
    if isinstance(f, And):
        return f"{_paren(f.left)} & {_paren(f.right)}"
    if isinstance(f, Or):
        return f"{_paren(f.left)} | {_paren(f.right)}"
    raise TypeError(f"not a formula: {f!r}")


def _paren(f: QfFormula) -> str:
    text = formula_to_text(f)
    if isinstance(f, (And, Or)):
        return f"({text})"
    return text


class FormulaParseError(ValueError):
    pass


def parse_formula(text: str) -> QfFormula:
    tokens = _formula_tokens(text)
    f, pos = _parse_or(tokens, 0)
    if pos != len(tokens):
        raise FormulaParseError(f"trailing tokens {tokens[pos:]!r}")
    return f


def _formula_tokens(text: str) -> list[str]:
    out: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()~&|=,":
            out.append(ch)
            i += 1
        else:
            j = i
            while j < len(text) and text[j] not in "()~&|=, \t\n":
                j += 1
            out.append(text[i:j])
            i = j
    return out


def _parse_or(tokens, pos):
    f, pos = _parse_and(tokens, pos)
    while pos < len(tokens) and tokens[pos] == "|":
        g, pos = _parse_and(tokens, pos + 1)
        f = Or(f, g)
    return f, pos


def _parse_and(tokens, pos):
    f, pos = _parse_unary(tokens, pos)
    while pos < len(tokens) and tokens[pos] == "&":
        g, pos = _parse_unary(tokens, pos + 1)
        f = And(f, g)
    return f, pos


def _var_index(token: str) -> int:
    if not token.startswith("x") or not token[1:].isdigit():
        raise FormulaParseError(f"expected a variable, got {token!r}")
    return int(token[1:])


def _parse_unary(tokens, pos):
    if pos >= len(tokens):
        raise FormulaParseError("unexpected end of formula")
    tok = tokens[pos]
    if tok == "~":
        f, pos = _parse_unary(tokens, pos + 1)
        return Not(f), pos
    if tok == "(":
        f, pos = _parse_or(tokens, pos + 1)
        if pos >= len(tokens) or tokens[pos] != ")":
            raise FormulaParseError("missing closing parenthesis")
        return f, pos + 1
    if tok == "T":
        return TRUE, pos + 1
    if tok == "F":
        return FALSE, pos + 1
    # either an equality or a relation atom
    if pos + 1 < len(tokens) and tokens[pos + 1] == "=":
        a = _var_index(tok)
        b = _var_index(tokens[pos + 2])
        return Eq(a, b), pos + 3
    name = tok
    if pos + 1 >= len(tokens) or tokens[pos + 1] != "(":
        raise FormulaParseError(f"expected '(' after relation {name!r}")
    pos += 2
    args: list[int] = []
    if tokens[pos] != ")":
        args.append(_var_index(tokens[pos]))
        pos += 1
        while tokens[pos] == ",":
            args.append(_var_index(tokens[pos + 1]))
            pos += 2
    if tokens[pos] != ")":
        raise FormulaParseError("missing ')' in relation atom")
    return Rel(name, tuple(args)), pos + 1


# ---------------------------------------------------------------------------
# Type restriction (the safe-pairing gadget)
# ---------------------------------------------------------------------------

class NotDnf(ValueError):
    pass


def is_dnf(t: GradedType) -> bool:
    """Disjunctive normal form: no product has a co-pair inside it."""
    if isinstance(t, CoProd):
        return is_dnf(t.left) and is_dnf(t.right)
    return _dnf_product(t)


def _dnf_product(t: GradedType) -> bool:
    if isinstance(t, Prod):
        return _dnf_product(t.left) and _dnf_product(t.right)
    if isinstance(t, (Zero, Unit)):
        return True
    if isinstance(t, ListOf):
        return is_dnf(t.elem)
    return False


def _strip_one(name: str, side: str) -> str:
    kind, _, path = name.partition("@")
    assert path.startswith(side)
    return f"{kind}@{path[len(side):]}"


def _side_of(name: str) -> str:
    return name.partition("@")[2][:1]


def _coprod_side_formula(f: QfFormula, left: bool) -> QfFormula:
    tag = rel_name("tag", "")

    def on_rel(rel: Rel) -> QfFormula:
        if rel.name == tag:
            return Const(left)
        side = _side_of(rel.name)
        want = "L" if left else "R"
        if side != want:
            return FALSE
        return Rel(_strip_one(rel.name, want), rel.args)

    return map_atoms(f, on_rel)


def _prod_side_formula(f: QfFormula, left: bool) -> QfFormula:
    fst = rel_name("fst", "")

    def on_rel(rel: Rel) -> QfFormula:
        if rel.name == fst:
            return Const(left)
        side = _side_of(rel.name)
        want = "L" if left else "R"
        if side != want:
            return FALSE
        return Rel(_strip_one(rel.name, want), rel.args)

    return map_atoms(f, on_rel)


def _list_inner_formula(f: QfFormula, elem_vocab: Vocabulary) -> QfFormula:
    """Rewrite a one-variable formula over vocab(e*) to one over vocab(e)."""
    order = rel_name("ord", "")

    def on_rel(rel: Rel) -> QfFormula:
        if rel.name == order:
            # within a single element the order is reflexive
            return TRUE
        inner = _strip_one(rel.name, "e")
        if elem_vocab.arity(inner) == 0:
            return Rel(inner, ())
        return Rel(inner, rel.args)

    return map_atoms(f, on_rel)


def _lift(f: QfFormula, prefix: str, promote_var: "int | None" = None) -> QfFormula:
    """Prefix atom names; promote nullary atoms to ``promote_var`` if given."""
    def on_rel(rel: Rel) -> QfFormula:
        name = rename_prefixed(rel.name, prefix)
        if not rel.args and promote_var is not None:
            return Rel(name, (promote_var,))
        return Rel(name, rel.args)

    return map_atoms(f, on_rel)


def type_restriction(t: GradedType, phi: QfFormula):
    """The restricted type t|phi and its projection interpretation.

    ``t`` must be in disjunctive normal form; ``phi`` has one free variable
    over vocab(t).  The projection maps encode(v) to encode(v filtered to
    the elements satisfying phi).
    """
    if not is_dnf(t):
        raise NotDnf(f"{t!r} is not in disjunctive normal form")
    if max_var(phi) > 1:
        raise ValueError("the restriction formula must have one free variable")
    restricted, interp = _restrict_rec(t, phi)
    interp.validate()
    return restricted, interp


def _restrict_rec(t: GradedType, phi: QfFormula):
    in_vocab = vocab_of(t)
    if isinstance(t, Zero):
        return ZERO, QfInterp(in_vocab, vocab_of(ZERO), FALSE, {})
    if isinstance(t, Unit):
        from .structures import encode

        s = encode(UnitLeaf(0), UNIT)
        keeps = eval_formula(phi, s, (0,))
        out_t = UNIT if keeps else ZERO
        return out_t, QfInterp(in_vocab, vocab_of(out_t), phi, {})
    if isinstance(t, CoProd):
        left_t, left_i = _restrict_rec(t.left, _coprod_side_formula(phi, True))
        right_t, right_i = _restrict_rec(t.right, _coprod_side_formula(phi, False))
        out_t = CoProd(left_t, right_t)
        tag = rel_name("tag", "")
        universe = disj(conj(Rel(tag, ()), _lift(left_i.universe, "L")),
                        conj(Not(Rel(tag, ())), _lift(right_i.universe, "R")))
        rel_defs: dict[str, QfFormula] = {tag: Rel(tag, ())}
        for name, _ in left_i.out_vocab.rels:
            rel_defs[rename_prefixed(name, "L")] = conj(
                Rel(tag, ()), _lift(left_i.rel_defs[name], "L"))
        for name, _ in right_i.out_vocab.rels:
            rel_defs[rename_prefixed(name, "R")] = conj(
                Not(Rel(tag, ())), _lift(right_i.rel_defs[name], "R"))
        return out_t, QfInterp(in_vocab, vocab_of(out_t), universe, rel_defs)
    if isinstance(t, Prod):
        left_t, left_i = _restrict_rec(t.left, _prod_side_formula(phi, True))
        right_t, right_i = _restrict_rec(t.right, _prod_side_formula(phi, False))
        out_t = Prod(left_t, right_t)
        fst = rel_name("fst", "")
        universe = disj(conj(Rel(fst, (1,)), _lift(left_i.universe, "L")),
                        conj(Not(Rel(fst, (1,))), _lift(right_i.universe, "R")))
        rel_defs = {fst: Rel(fst, (1,))}
        for name, arity in left_i.out_vocab.rels:
            guards = [Rel(fst, (i,)) for i in range(1, arity + 1)]
            rel_defs[rename_prefixed(name, "L")] = conj(
                *guards, _lift(left_i.rel_defs[name], "L"))
        for name, arity in right_i.out_vocab.rels:
            guards = [Not(Rel(fst, (i,))) for i in range(1, arity + 1)]
            rel_defs[rename_prefixed(name, "R")] = conj(
                *guards, _lift(right_i.rel_defs[name], "R"))
        return out_t, QfInterp(in_vocab, vocab_of(out_t), universe, rel_defs)
    if isinstance(t, ListOf):
        elem_vocab = vocab_of(t.elem)
        inner_phi = _list_inner_formula(phi, elem_vocab)
        elem_t, elem_i = _restrict_rec(t.elem, inner_phi)
        out_t = ListOf(elem_t)
        order = rel_name("ord", "")
        universe = _lift(elem_i.universe, "e", promote_var=1)
        rel_defs = {order: Rel(order, (1, 2))}
        out_vocab = vocab_of(out_t)
        for name, arity in elem_i.out_vocab.rels:
            lifted_name = rename_prefixed(name, "e")
            out_arity = out_vocab.arity(lifted_name)
            inner_def = elem_i.rel_defs[name]
            if arity == 0 and out_arity == 1:
                rel_defs[lifted_name] = _lift(inner_def, "e", promote_var=1)
            else:
                same_item = [conj(Rel(order, (1, i)), Rel(order, (i, 1)))
                             for i in range(2, out_arity + 1)]
                rel_defs[lifted_name] = conj(
                    *same_item, _lift(inner_def, "e", promote_var=1))
        return out_t, QfInterp(in_vocab, out_vocab, universe, rel_defs)
    raise NotDnf(f"cannot restrict at type {t!r}")
