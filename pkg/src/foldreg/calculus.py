"""Terms of the combinator calculus and the flavor-parameterized checker.

Primes carry explicit type parameters, so checking is syntax directed.
Composition is written source-to-target: Compose(f, g) means "f then g".
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .types_values import (
    Bang,
    CoProd,
    FunctionType,
    GradedType,
    ListOf,
    Prod,
    TreeOf,
    UNIT,
    Unit,
    ZERO,
    Zero,
    bangs,
    contains_bang,
    contains_tree,
    grade,
    min_element_grade,
)

# ---------------------------------------------------------------------------
# System flavors
# ---------------------------------------------------------------------------

QF = "qf"
POLY = "poly"
LINEAR = "linear"
REDUCED = "reduced"

_BASES = (QF, POLY, LINEAR, REDUCED)


@dataclass(frozen=True)
class SystemFlavor:
    base: str
    trees: bool = False

    def __post_init__(self):
        if self.base not in _BASES:
            raise ValueError(f"unknown flavor base {self.base!r}")

    def __str__(self):
        return self.base + ("+trees" if self.trees else "")

    @staticmethod
    def parse(text: str) -> "SystemFlavor":
        text = text.strip().lower()
        trees = False
        for suffix in ("+trees", "-trees"):
            if text.endswith(suffix):
                trees = True
                text = text[: -len(suffix)]
        aliases = {
            "qf": QF, "quantifierfree": QF, "quantifier-free": QF,
            "poly": POLY, "polyregular": POLY,
            "linear": LINEAR,
            "reduced": REDUCED,
        }
        if text not in aliases:
            raise ValueError(f"unknown flavor {text!r}")
        return SystemFlavor(aliases[text], trees)


FLAVOR_QF = SystemFlavor(QF)
FLAVOR_POLY = SystemFlavor(POLY)
FLAVOR_LINEAR = SystemFlavor(LINEAR)
FLAVOR_REDUCED = SystemFlavor(REDUCED)


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

class Term:
    """Base class of derivation terms."""


@dataclass(frozen=True)
class Prime(Term):
    name: str
    params: tuple[GradedType, ...] = ()


@dataclass(frozen=True)
class Compose(Term):
    f: Term
    g: Term


@dataclass(frozen=True)
class ProdFunctor(Term):
    f: Term
    g: Term


@dataclass(frozen=True)
class CoProdFunctor(Term):
    f: Term
    g: Term


@dataclass(frozen=True)
class MapFunctor(Term):
    f: Term


@dataclass(frozen=True)
class BangFunctor(Term):
    f: Term


@dataclass(frozen=True)
class SafeFold(Term):
    init: Term
    step: Term
    k: int


@dataclass(frozen=True)
class SafeTreeFold(Term):
    init: Term
    step: Term
    k: int


@dataclass(frozen=True)
class Weak(Term):
    """k-fold upgrade of the input followed by the inner term."""
    k: int
    inner: Term


def children(term: Term) -> tuple[Term, ...]:
    if isinstance(term, Prime):
        return ()
    if isinstance(term, (Compose, ProdFunctor, CoProdFunctor)):
        return (term.f, term.g)
    if isinstance(term, (MapFunctor, BangFunctor)):
        return (term.f,)
    if isinstance(term, (SafeFold, SafeTreeFold)):
        return (term.init, term.step)
    if isinstance(term, Weak):
        return (term.inner,)
    raise TypeError(f"not a term: {term!r}")


def term_at(term: Term, path: tuple[int, ...]) -> Term:
    for i in path:
        term = children(term)[i]
    return term


# ---------------------------------------------------------------------------
# Type errors
# ---------------------------------------------------------------------------

UNKNOWN_PRIME = "unknown prime"
DOMAIN_MISMATCH = "domain mismatch"
GRADE_VIOLATION = "grade violation"
FLAVOR_VIOLATION = "flavor violation"


@dataclass
class TypeCheckError(Exception):
    kind: str
    path: tuple[int, ...]
    message: str

    def __str__(self):
        loc = "/".join(map(str, self.path)) or "root"
        return f"{self.kind} at {loc}: {self.message}"


# ---------------------------------------------------------------------------
# Prime inventory
# ---------------------------------------------------------------------------

_ALL = frozenset(_BASES)
_LISTY = frozenset({QF, POLY, LINEAR})          # removed in the reduced system
_GRADED = frozenset({POLY, LINEAR, REDUCED})    # primes that mention !
_REDUCED_ONLY = frozenset({REDUCED})


def _ctx_type(label: GradedType) -> GradedType:
    """Contexts are sugar: lists of one-hole node skeletons."""
    t = TreeOf(label)
    return ListOf(CoProd(Prod(t, label), Prod(label, t)))


@dataclass(frozen=True)
class PrimeSpec:
    arity: int
    flavors: frozenset
    trees: bool
    sig: object  # callable params -> (dom, cod)


def _spec(arity, flavors, sig, trees=False):
    return PrimeSpec(arity, flavors, trees, sig)


PRIMES: dict[str, PrimeSpec] = {
    # structural isomorphisms, available everywhere
    "comm_prod_fwd": _spec(2, _ALL, lambda g, s: (Prod(g, s), Prod(s, g))),
    "comm_prod_bwd": _spec(2, _ALL, lambda g, s: (Prod(s, g), Prod(g, s))),
    "comm_coprod_fwd": _spec(2, _ALL, lambda g, s: (CoProd(g, s), CoProd(s, g))),
    "comm_coprod_bwd": _spec(2, _ALL, lambda g, s: (CoProd(s, g), CoProd(g, s))),
    "assoc_prod_fwd": _spec(
        3, _ALL, lambda g, s, d: (Prod(g, Prod(s, d)), Prod(Prod(g, s), d))),
    "assoc_prod_bwd": _spec(
        3, _ALL, lambda g, s, d: (Prod(Prod(g, s), d), Prod(g, Prod(s, d)))),
    "assoc_coprod_fwd": _spec(
        3, _ALL, lambda g, s, d: (CoProd(g, CoProd(s, d)), CoProd(CoProd(g, s), d))),
    "assoc_coprod_bwd": _spec(
        3, _ALL, lambda g, s, d: (CoProd(CoProd(g, s), d), CoProd(g, CoProd(s, d)))),
    "dist_fwd": _spec(
        3, _ALL,
        lambda g, s, d: (Prod(g, CoProd(s, d)), CoProd(Prod(g, s), Prod(g, d)))),
    "dist_bwd": _spec(
        3, _ALL,
        lambda g, s, d: (CoProd(Prod(g, s), Prod(g, d)), Prod(g, CoProd(s, d)))),
    "proj1": _spec(2, _ALL, lambda a, b: (Prod(a, b), a)),
    "proj2": _spec(2, _ALL, lambda a, b: (Prod(a, b), b)),
    "coproj1": _spec(2, _ALL, lambda a, b: (a, CoProd(a, b))),
    "coproj2": _spec(2, _ALL, lambda a, b: (b, CoProd(a, b))),
    "codiag": _spec(1, _ALL, lambda a: (CoProd(a, a), a)),
    # the terminal map creates a fresh unit, so it is not quantifier-free
    "const_unit": _spec(1, _GRADED, lambda a: (a, UNIT)),
    # list primes, removed in the reduced system
    "append": _spec(1, _LISTY, lambda s: (Prod(ListOf(s), s), ListOf(s))),
    "reverse": _spec(1, _LISTY, lambda s: (ListOf(s), ListOf(s))),
    "concat": _spec(1, _LISTY, lambda s: (ListOf(ListOf(s)), ListOf(s))),
    "create_empty": _spec(2, _LISTY, lambda s, g: (s, Prod(s, ListOf(g)))),
    "list_distribute": _spec(
        2, _LISTY,
        lambda s, g: (ListOf(Prod(s, g)), Prod(ListOf(s), ListOf(g)))),
    "list_unit": _spec(1, _LISTY, lambda s: (s, ListOf(s))),
    "list_constructor": _spec(
        1, _LISTY, lambda s: (CoProd(UNIT, Prod(s, ListOf(s))), ListOf(s))),
    # replacements used by the reduced system
    "binary_concat": _spec(
        1, _REDUCED_ONLY, lambda s: (Prod(ListOf(s), ListOf(s)), ListOf(s))),
    "opt_list": _spec(1, _REDUCED_ONLY, lambda s: (CoProd(UNIT, s), ListOf(s))),
    # grading primes
    "bang_coprod_fwd": _spec(
        2, _GRADED, lambda g, s: (Bang(CoProd(g, s)), CoProd(Bang(g), Bang(s)))),
    "bang_coprod_bwd": _spec(
        2, _GRADED, lambda g, s: (CoProd(Bang(g), Bang(s)), Bang(CoProd(g, s)))),
    "bang_prod_fwd": _spec(
        2, _GRADED, lambda g, s: (Bang(Prod(g, s)), Prod(Bang(g), Bang(s)))),
    "bang_prod_bwd": _spec(
        2, _GRADED, lambda g, s: (Prod(Bang(g), Bang(s)), Bang(Prod(g, s)))),
    "bang_list_fwd": _spec(1, _GRADED, lambda g: (Bang(ListOf(g)), ListOf(Bang(g)))),
    "bang_list_bwd": _spec(1, _GRADED, lambda g: (ListOf(Bang(g)), Bang(ListOf(g)))),
    "absorption": _spec(
        1, frozenset({POLY, REDUCED}), lambda g: (Bang(g), Prod(Bang(g), g))),
    "lin_absorption": _spec(
        1, frozenset({LINEAR}), lambda g: (Bang(g), Prod(g, g))),
    # the zero type and its gadgets
    "add_zero": _spec(1, _ALL, lambda s: (s, Prod(s, ZERO))),
    "create_empty_list": _spec(1, _ALL, lambda s: (ZERO, ListOf(s))),
    # tree extension
    "bang_tree_fwd": _spec(
        1, _GRADED, lambda s: (Bang(TreeOf(s)), TreeOf(Bang(s))), trees=True),
    "bang_tree_bwd": _spec(
        1, _GRADED, lambda s: (TreeOf(Bang(s)), Bang(TreeOf(s))), trees=True),
    "wilke_cons": _spec(
        1, _ALL,
        lambda s: (CoProd(UNIT, Prod(TreeOf(s), Prod(s, TreeOf(s)))), TreeOf(s)),
        trees=True),
    "wilke_replace": _spec(
        1, _ALL, lambda s: (Prod(_ctx_type(s), TreeOf(s)), TreeOf(s)), trees=True),
    "wilke_compose": _spec(
        1, _ALL, lambda s: (Prod(_ctx_type(s), _ctx_type(s)), _ctx_type(s)),
        trees=True),
    "wilke_create": _spec(
        1, _ALL,
        lambda s: (CoProd(UNIT, CoProd(Prod(TreeOf(s), s), Prod(s, TreeOf(s)))),
                   _ctx_type(s)),
        trees=True),
}


def prime_signature(name: str, params: tuple[GradedType, ...]) -> FunctionType:
    spec = PRIMES[name]
    dom, cod = spec.sig(*params)
    return FunctionType(dom, cod)


# ---------------------------------------------------------------------------
# The checker
# ---------------------------------------------------------------------------

def infer_type(term: Term, flavor: SystemFlavor) -> FunctionType:
    """Unique type of ``term`` under ``flavor``; raises TypeCheckError.

    Errors are reported for the first failing node in a pre-order,
    left-to-right traversal.
    """
    return _infer(term, flavor, ())


def try_infer(term: Term, flavor: SystemFlavor):
    """(FunctionType, None) on success, (None, TypeCheckError) on failure."""
    try:
        return infer_type(term, flavor), None
    except TypeCheckError as err:
        return None, err


def _type_ok(t: GradedType, flavor: SystemFlavor, path, what: str) -> None:
    if flavor.base == QF and contains_bang(t):
        raise TypeCheckError(
            FLAVOR_VIOLATION, path,
            f"{what} mentions ! which the quantifier-free system lacks: {t!r}")
    if not flavor.trees and contains_tree(t):
        raise TypeCheckError(
            FLAVOR_VIOLATION, path,
            f"{what} mentions trees but the tree extension is off: {t!r}")


def _infer(term: Term, flavor: SystemFlavor, path: tuple[int, ...]) -> FunctionType:
    if isinstance(term, Prime):
        spec = PRIMES.get(term.name)
        if spec is None:
            raise TypeCheckError(UNKNOWN_PRIME, path, f"no prime named {term.name!r}")
        if len(term.params) != spec.arity:
            raise TypeCheckError(
                DOMAIN_MISMATCH, path,
                f"{term.name} expects {spec.arity} type parameters, "
                f"got {len(term.params)}")
        if flavor.base not in spec.flavors:
            raise TypeCheckError(
                FLAVOR_VIOLATION, path,
                f"prime {term.name} is not part of the {flavor.base} system")
        if spec.trees and not flavor.trees:
            raise TypeCheckError(
                FLAVOR_VIOLATION, path,
                f"prime {term.name} needs the tree extension")
        for p in term.params:
            _type_ok(p, flavor, path, f"type parameter of {term.name}")
        return prime_signature(term.name, term.params)

    if isinstance(term, Compose):
        ft_f = _infer(term.f, flavor, path + (0,))
        ft_g = _infer(term.g, flavor, path + (1,))
        if ft_f.cod != ft_g.dom:
            raise TypeCheckError(
                DOMAIN_MISMATCH, path,
                f"cannot compose: left yields {ft_f.cod!r} but right "
                f"expects {ft_g.dom!r}")
        return FunctionType(ft_f.dom, ft_g.cod)

    if isinstance(term, ProdFunctor):
        ft_f = _infer(term.f, flavor, path + (0,))
        ft_g = _infer(term.g, flavor, path + (1,))
        return FunctionType(Prod(ft_f.dom, ft_g.dom), Prod(ft_f.cod, ft_g.cod))

    if isinstance(term, CoProdFunctor):
        ft_f = _infer(term.f, flavor, path + (0,))
        ft_g = _infer(term.g, flavor, path + (1,))
        return FunctionType(CoProd(ft_f.dom, ft_g.dom), CoProd(ft_f.cod, ft_g.cod))

    if isinstance(term, MapFunctor):
        if flavor.base == REDUCED:
            raise TypeCheckError(
                FLAVOR_VIOLATION, path,
                "the map combinator is removed in the reduced system")
        ft = _infer(term.f, flavor, path + (0,))
        return FunctionType(ListOf(ft.dom), ListOf(ft.cod))

    if isinstance(term, BangFunctor):
        if flavor.base == QF:
            raise TypeCheckError(
                FLAVOR_VIOLATION, path,
                "functoriality of ! is not part of the quantifier-free system")
        ft = _infer(term.f, flavor, path + (0,))
        return FunctionType(Bang(ft.dom), Bang(ft.cod))

    if isinstance(term, SafeFold):
        if flavor.base == QF:
            raise TypeCheckError(
                FLAVOR_VIOLATION, path,
                "fold is not part of the quantifier-free system")
        if term.k < 0:
            raise TypeCheckError(DOMAIN_MISMATCH, path, "fold needs k >= 0")
        ft_init = _infer(term.init, flavor, path + (0,))
        ft_step = _infer(term.step, flavor, path + (1,))
        if ft_init.dom != bangs(UNIT, term.k):
            raise TypeCheckError(
                DOMAIN_MISMATCH, path,
                f"fold init must have domain !^{term.k} 1, got {ft_init.dom!r}")
        state = ft_init.cod
        if not isinstance(ft_step.dom, Prod) or ft_step.dom.left != state:
            raise TypeCheckError(
                DOMAIN_MISMATCH, path,
                f"fold step must have domain {state!r} × Σ, "
                f"got {ft_step.dom!r}")
        if ft_step.cod != state:
            raise TypeCheckError(
                DOMAIN_MISMATCH, path,
                f"fold step must return the state type {state!r}, "
                f"got {ft_step.cod!r}")
        letter = ft_step.dom.right
        if not grade(state) < term.k + min_element_grade(letter):
            raise TypeCheckError(
                GRADE_VIOLATION, path,
                f"safe fold needs grade({state!r}) = {grade(state)} < k + "
                f"letter grade = {term.k} + {min_element_grade(letter)}")
        return FunctionType(bangs(ListOf(letter), term.k), state)

    if isinstance(term, SafeTreeFold):
        if flavor.base == QF:
            raise TypeCheckError(
                FLAVOR_VIOLATION, path,
                "fold is not part of the quantifier-free system")
        if not flavor.trees:
            raise TypeCheckError(
                FLAVOR_VIOLATION, path, "tree fold needs the tree extension")
        ft_init = _infer(term.init, flavor, path + (0,))
        ft_step = _infer(term.step, flavor, path + (1,))
        if ft_init.dom != bangs(UNIT, term.k):
            raise TypeCheckError(
                DOMAIN_MISMATCH, path,
                f"tree fold init must have domain !^{term.k} 1, got {ft_init.dom!r}")
        state = ft_init.cod
        if (not isinstance(ft_step.dom, Prod)
                or not isinstance(ft_step.dom.right, Prod)
                or ft_step.dom.left != state
                or ft_step.dom.right.right != state):
            raise TypeCheckError(
                DOMAIN_MISMATCH, path,
                f"tree fold step must have domain {state!r} × (Σ × "
                f"{state!r}), got {ft_step.dom!r}")
        label = ft_step.dom.right.left
        if ft_step.cod != state:
            raise TypeCheckError(
                DOMAIN_MISMATCH, path,
                f"tree fold step must return the state type {state!r}, "
                f"got {ft_step.cod!r}")
        if not grade(state) < term.k + min_element_grade(label):
            raise TypeCheckError(
                GRADE_VIOLATION, path,
                f"safe tree fold needs grade({state!r}) = {grade(state)} < k + "
                f"label grade = {term.k} + {min_element_grade(label)}")
        return FunctionType(bangs(TreeOf(label), term.k), state)

    if isinstance(term, Weak):
        if term.k < 0:
            raise TypeCheckError(DOMAIN_MISMATCH, path, "weak needs k >= 0")
        if term.k > 0 and flavor.base == QF:
            raise TypeCheckError(
                FLAVOR_VIOLATION, path,
                "upgrading is not part of the quantifier-free system")
        ft = _infer(term.inner, flavor, path + (0,))
        dom = ft.dom
        for _ in range(term.k):
            if not isinstance(dom, Bang):
                raise TypeCheckError(
                    DOMAIN_MISMATCH, path,
                    f"weak({term.k}) needs a domain of shape !^{term.k} Σ, "
                    f"got {ft.dom!r}")
            dom = dom.inner
        return FunctionType(dom, ft.cod)

    raise TypeCheckError(DOMAIN_MISMATCH, path, f"not a term: {term!r}")


def make_weak(f: Term, k: int, flavor: SystemFlavor = FLAVOR_POLY) -> Term:
    """Wrap ``f`` so its input is upgraded ``k`` times before running.

    Requires infer_type(f) to have a domain of shape !^k Σ.
    """
    if k == 0:
        infer_type(f, flavor)
        return f
    term = Weak(k, f)
    infer_type(term, flavor)
    return term


# ---------------------------------------------------------------------------
# Term and type files: S-expressions
# ---------------------------------------------------------------------------

def type_to_sexpr(t: GradedType) -> str:
    if isinstance(t, Unit):
        return "(unit)"
    if isinstance(t, Zero):
        return "(zero)"
    if isinstance(t, Prod):
        return f"(prod {type_to_sexpr(t.left)} {type_to_sexpr(t.right)})"
    if isinstance(t, CoProd):
        return f"(coprod {type_to_sexpr(t.left)} {type_to_sexpr(t.right)})"
    if isinstance(t, ListOf):
        return f"(list {type_to_sexpr(t.elem)})"
    if isinstance(t, Bang):
        return f"(bang {type_to_sexpr(t.inner)})"
    if isinstance(t, TreeOf):
        return f"(tree {type_to_sexpr(t.label)})"
    raise TypeError(f"not a type: {t!r}")


def term_to_sexpr(term: Term) -> str:
    if isinstance(term, Prime):
        inner = " ".join(type_to_sexpr(p) for p in term.params)
        return f"(prime {term.name}{' ' + inner if inner else ''})"
    if isinstance(term, Compose):
        return f"(compose {term_to_sexpr(term.f)} {term_to_sexpr(term.g)})"
    if isinstance(term, ProdFunctor):
        return f"(par× {term_to_sexpr(term.f)} {term_to_sexpr(term.g)})"
    if isinstance(term, CoProdFunctor):
        return f"(par+ {term_to_sexpr(term.f)} {term_to_sexpr(term.g)})"
    if isinstance(term, MapFunctor):
        return f"(map {term_to_sexpr(term.f)})"
    if isinstance(term, BangFunctor):
        return f"(bang {term_to_sexpr(term.f)})"
    if isinstance(term, SafeFold):
        return (f"(safefold {term.k} {term_to_sexpr(term.init)} "
                f"{term_to_sexpr(term.step)})")
    if isinstance(term, SafeTreeFold):
        return (f"(treefold {term.k} {term_to_sexpr(term.init)} "
                f"{term_to_sexpr(term.step)})")
    if isinstance(term, Weak):
        return f"(weak {term.k} {term_to_sexpr(term.inner)})"
    raise TypeError(f"not a term: {term!r}")


class SexprError(ValueError):
    pass


def _tokenize(text: str) -> list[str]:
    out: list[str] = []
    cur = ""
    for ch in text:
        if ch in "()":
            if cur:
                out.append(cur)
                cur = ""
            out.append(ch)
        elif ch.isspace():
            if cur:
                out.append(cur)
                cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def _read_sexpr(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise SexprError("unexpected end of input")
    tok = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            node, pos = _read_sexpr(tokens, pos)
            items.append(node)
        if pos >= len(tokens):
            raise SexprError("missing closing parenthesis")
        return items, pos + 1
    if tok == ")":
        raise SexprError("unexpected ')'")
    return tok, pos + 1


def _sexpr_to_type(node) -> GradedType:
    if not isinstance(node, list) or not node:
        raise SexprError(f"bad type expression: {node!r}")
    head = node[0]
    args = node[1:]
    if head == "unit" and not args:
        return UNIT
    if head == "zero" and not args:
        return ZERO
    if head == "prod" and len(args) == 2:
        return Prod(_sexpr_to_type(args[0]), _sexpr_to_type(args[1]))
    if head == "coprod" and len(args) == 2:
        return CoProd(_sexpr_to_type(args[0]), _sexpr_to_type(args[1]))
    if head == "list" and len(args) == 1:
        return ListOf(_sexpr_to_type(args[0]))
    if head == "bang" and len(args) == 1:
        return Bang(_sexpr_to_type(args[0]))
    if head == "tree" and len(args) == 1:
        return TreeOf(_sexpr_to_type(args[0]))
    raise SexprError(f"bad type expression: {node!r}")


def _sexpr_to_term(node) -> Term:
    if not isinstance(node, list) or not node:
        raise SexprError(f"bad term expression: {node!r}")
    head = node[0]
    args = node[1:]
    if head == "prime":
        if not args or isinstance(args[0], list):
            raise SexprError("prime needs a name")
        return Prime(args[0], tuple(_sexpr_to_type(a) for a in args[1:]))
    if head == "compose" and len(args) == 2:
        return Compose(_sexpr_to_term(args[0]), _sexpr_to_term(args[1]))
    if head in ("par×", "parx", "par*") and len(args) == 2:
        return ProdFunctor(_sexpr_to_term(args[0]), _sexpr_to_term(args[1]))
    if head == "par+" and len(args) == 2:
        return CoProdFunctor(_sexpr_to_term(args[0]), _sexpr_to_term(args[1]))
    if head == "map" and len(args) == 1:
        return MapFunctor(_sexpr_to_term(args[0]))
    if head == "bang" and len(args) == 1:
        return BangFunctor(_sexpr_to_term(args[0]))
    if head in ("safefold", "treefold") and len(args) == 3:
        try:
            k = int(args[0])
        except (TypeError, ValueError):
            raise SexprError(f"bad fold index: {args[0]!r}")
        cls = SafeFold if head == "safefold" else SafeTreeFold
        return cls(_sexpr_to_term(args[1]), _sexpr_to_term(args[2]), k)
    if head == "weak" and len(args) == 2:
        try:
            k = int(args[0])
        except (TypeError, ValueError):
            raise SexprError(f"bad weak index: {args[0]!r}")
        return Weak(k, _sexpr_to_term(args[1]))
    raise SexprError(f"bad term expression: {node!r}")


def parse_term(text: str) -> Term:
    tokens = _tokenize(text)
    node, pos = _read_sexpr(tokens, 0)
    if pos != len(tokens):
        raise SexprError("trailing input after term")
    return _sexpr_to_term(node)


def parse_type(text: str) -> GradedType:
    tokens = _tokenize(text)
    node, pos = _read_sexpr(tokens, 0)
    if pos != len(tokens):
        raise SexprError("trailing input after type")
    return _sexpr_to_type(node)
