"""Simple streaming string transducers and their quantifier-free compilation.

A machine has finitely many states, k copyless string registers over the
output alphabet, a per-state register update applied after the state
transition, and an output update.  ``sst_to_qf`` compiles a machine whose
updates create at most one literal letter per step (the "simple" fragment)
into a quantifier-free interpretation stepping the relational encoding of
its configuration space, so the streaming fold theorem applies to it;
``to_simple`` is the pre-copying decomposition that reaches the general
copyless model.
"""
from __future__ import annotations

from dataclasses import dataclass

from .finite import (
    comb_node_paths,
    comb_path,
    inject_comb,
    prod_comb,
    tuple_comb,
    units_coprod,
    unit_variant,
    untuple_comb,
    variant_of,
)
from .fold_stream import FoldInstance
from .qf_logic import (
    Not,
    QfFormula,
    QfInterp,
    Rel,
    conj,
    disj,
)
from .structures import Structure, encode, rel_name, vocab_of
from .types_values import (
    GradedType,
    LeafAllocator,
    ListOf,
    SeqV,
    UNIT,
    UnitLeaf,
    Value,
)

LIT = "lit"
REG = "reg"


@dataclass(frozen=True)
class RegisterUpdate:
    """ℓ words over output letters and register indices (1-based).

    Copyless: each register index appears at most once across all words.
    """

    in_count: int
    out_count: int
    words: tuple  # tuple of tuples of (LIT, letter) / (REG, index)

    def __post_init__(self):
        if len(self.words) != self.out_count:
            raise ValueError("word count differs from out_count")
        seen = set()
        for word in self.words:
            for kind, payload in word:
                if kind == REG:
                    if not 1 <= payload <= self.in_count:
                        raise ValueError(f"register index {payload} out of range")
                    if payload in seen:
                        raise ValueError(
                            f"update is not copyless: register {payload} reused")
                    seen.add(payload)
                elif kind != LIT:
                    raise ValueError(f"bad token kind {kind!r}")

    def literal_count(self) -> int:
        return sum(1 for w in self.words for kind, _ in w if kind == LIT)


def apply_update(update: RegisterUpdate, regs) -> tuple:
    """Substitute register contents for register tokens."""
    regs = tuple(tuple(r) for r in regs)
    if len(regs) != update.in_count:
        raise ValueError("register count mismatch")
    out = []
    for word in update.words:
        content: list = []
        for kind, payload in word:
            if kind == LIT:
                content.append(payload)
            else:
                content.extend(regs[payload - 1])
        out.append(tuple(content))
    return tuple(out)


@dataclass(frozen=True)
class Configuration:
    state: str
    registers: tuple


@dataclass(eq=False)
class Sst:
    input_alphabet: tuple
    output_alphabet: tuple
    states: tuple  # first state is initial
    trans: dict  # (state, letter) -> state
    updates: dict  # state -> RegisterUpdate (k -> k)
    out: RegisterUpdate  # k -> 1
    nregs: int

    def __post_init__(self):
        if not self.states:
            raise ValueError("a machine needs at least one state")
        for q in self.states:
            for a in self.input_alphabet:
                if (q, a) not in self.trans:
                    raise ValueError(f"missing transition for ({q!r}, {a!r})")
            u = self.updates.get(q)
            if u is None or u.in_count != self.nregs or u.out_count != self.nregs:
                raise ValueError(f"bad update for state {q!r}")
        if self.out.in_count != self.nregs or self.out.out_count != 1:
            raise ValueError("output update must map k registers to one word")

    def initial(self) -> Configuration:
        return Configuration(self.states[0], ((),) * self.nregs)


def step(m: Sst, cfg: Configuration, letter) -> Configuration:
    if letter not in m.input_alphabet:
        raise ValueError(f"letter {letter!r} outside the input alphabet")
    state = m.trans[(cfg.state, letter)]
    regs = apply_update(m.updates[state], cfg.registers)
    return Configuration(state, regs)


def final_configuration(m: Sst, word) -> Configuration:
    cfg = m.initial()
    for letter in word:
        cfg = step(m, cfg, letter)
    return cfg


def run(m: Sst, word) -> tuple:
    cfg = final_configuration(m, word)
    (out,) = apply_update(m.out, cfg.registers)
    return out


def growth_constant(m: Sst) -> int:
    """C with |run(w)| <= C * (|w| + 1) for every input word."""
    per_step = max((m.updates[q].literal_count() for q in m.states), default=0)
    return max(per_step, m.out.literal_count(), 1)


def is_simple(m: Sst) -> bool:
    """At most one literal letter is created per consumed input letter."""
    return all(m.updates[q].literal_count() <= 1 for q in m.states)


# ---------------------------------------------------------------------------
# Configuration space as a graded list type
# ---------------------------------------------------------------------------

def letter_type(alphabet) -> GradedType:
    return units_coprod(len(alphabet))


def letter_value(alphabet, letter, leaf_id: int = 0) -> Value:
    return unit_variant(alphabet.index(letter), len(alphabet), leaf_id)


def config_type(m: Sst) -> GradedType:
    gamma = letter_type(m.output_alphabet)
    regs = prod_comb([ListOf(gamma)] * m.nregs) if m.nregs else UNIT
    parts = [regs] * len(m.states)
    t = parts[-1]
    from .types_values import CoProd

    for p in reversed(parts[:-1]):
        t = CoProd(p, t)
    return t


def config_to_value(m: Sst, cfg: Configuration,
                    alloc: "LeafAllocator | None" = None) -> Value:
    if alloc is None:
        alloc = LeafAllocator()
    gamma = m.output_alphabet
    if m.nregs:
        regs = [
            SeqV(tuple(letter_value(gamma, c, alloc.fresh()) for c in content))
            for content in cfg.registers
        ]
        body = tuple_comb(regs)
    else:
        body = UnitLeaf(alloc.fresh())
    return inject_comb(m.states.index(cfg.state), len(m.states), body)


def value_to_config(m: Sst, v: Value) -> Configuration:
    idx, body = variant_of(v, len(m.states))
    if m.nregs:
        parts = untuple_comb(body, m.nregs)
        regs = []
        for part in parts:
            if not isinstance(part, SeqV):
                raise ValueError(f"register is not a list: {part!r}")
            content = []
            for item in part.items:
                g, _ = variant_of(item, len(m.output_alphabet))
                content.append(m.output_alphabet[g])
            regs.append(tuple(content))
        registers = tuple(regs)
    else:
        registers = ()
    return Configuration(m.states[idx], registers)


# ---------------------------------------------------------------------------
# Compilation into a quantifier-free interpretation
# ---------------------------------------------------------------------------

def _variant_guard(n: int, i: int, name_of_node, args=()) -> QfFormula:
    """The structure (or element) is the i-th variant of a right comb."""
    parts = [Not(Rel(name_of_node(p), args)) for p in comb_node_paths(n)[:i]]
    if i < n - 1:
        parts.append(Rel(name_of_node("R" * i), args))
    return conj(*parts)


def sst_to_qf(m: Sst):
    """(config type, initial configuration value, stepping interpretation).

    Requires a simple machine: each update creates at most one literal, so
    the consumed input letter's single carrier element suffices.
    """
    if not is_simple(m):
        raise ValueError(
            "machine is not simple (an update creates more than one letter); "
            "decompose with to_simple first")
    delta_t = config_type(m)
    sigma_t = letter_type(m.input_alphabet)
    state_vocab = vocab_of(delta_t)
    in_vocab_pair = None  # derived below via vocab_of on the product type
    from .structures import pair_vocab

    letter_vocab = vocab_of(sigma_t)
    in_vocab_pair = pair_vocab(state_vocab, letter_vocab)

    n_states = len(m.states)
    n_in = len(m.input_alphabet)
    n_out = len(m.output_alphabet)
    k = m.nregs
    on_state = Rel(rel_name("fst", ""), (1,))

    def state_guard(qi: int) -> QfFormula:
        return _variant_guard(
            n_states, qi, lambda p: "tag@L" + p)

    def letter_guard(ai: int) -> QfFormula:
        return _variant_guard(n_in, ai, lambda p: "tag@R" + p)

    def old_reg_member(qi: int, r: int, var: int) -> QfFormula:
        """var is a state element lying in register r of component qi."""
        parts: list[QfFormula] = [Rel(rel_name("fst", ""), (var,))]
        base = "fst@L" + comb_path(qi, n_states)
        for j in range(r):
            parts.append(Not(Rel(base + "R" * j, (var,))))
        if r < k - 1:
            parts.append(Rel(base + "R" * r, (var,)))
        return conj(*parts)

    def letter_elem(var: int) -> QfFormula:
        return Not(Rel(rel_name("fst", ""), (var,)))

    def token_class(qi: int, token, var: int) -> QfFormula:
        kind, payload = token
        if kind == REG:
            return old_reg_member(qi, payload - 1, var)
        return letter_elem(var)

    def old_ord(qi: int, r: int, a_var: int, b_var: int) -> QfFormula:
        path = comb_path(qi, n_states) + (comb_path(r, k) if k else "")
        return Rel("ord@L" + path, (a_var, b_var))

    def old_label(qi: int, r: int, gpath: str, var: int) -> QfFormula:
        path = comb_path(qi, n_states) + (comb_path(r, k) if k else "")
        return Rel("tag@L" + path + "e" + gpath, (var,))

    cases = []
    for qi, q in enumerate(m.states):
        for ai, a in enumerate(m.input_alphabet):
            q2 = m.trans[(q, a)]
            q2i = m.states.index(q2)
            update = m.updates[q2]
            guard = conj(state_guard(qi), letter_guard(ai))
            cases.append((qi, ai, q2i, update, guard))

    # universe: kept register elements, the consumed letter if used, and the
    # configuration carrier when there are no registers
    universe_parts = []
    for qi, ai, q2i, update, guard in cases:
        kept: list[QfFormula] = []
        if k == 0:
            kept.append(Rel(rel_name("fst", ""), (1,)))
        else:
            used = {payload for w in update.words for kind, payload in w
                    if kind == REG}
            for r in sorted(used):
                kept.append(old_reg_member(qi, r - 1, 1))
            if update.literal_count():
                kept.append(letter_elem(1))
        universe_parts.append(conj(guard, disj(*kept)))
    universe = disj(*universe_parts)

    rel_defs: dict[str, QfFormula] = {}

    # component tags of the new configuration
    for node in comb_node_paths(n_states):
        j = len(node)
        choices = [guard for _, _, q2i, _, guard in cases if q2i == j]
        rel_defs["tag@" + node] = disj(*choices)

    if k == 0:
        interp = QfInterp(in_vocab_pair, state_vocab, universe, rel_defs)
        interp.validate()
        alloc = LeafAllocator()
        init_value = config_to_value(m, m.initial(), alloc)
        return delta_t, init_value, interp

    def new_reg_class(update, qi, r: int, var: int) -> QfFormula:
        """var lands in word r of the update."""
        return disj(*[token_class(qi, tok, var) for tok in update.words[r]])

    # register grouping inside each target component
    for q2_target in range(n_states):
        base = "fst@" + comb_path(q2_target, n_states)
        for j in range(k - 1):
            parts = []
            for qi, ai, q2i, update, guard in cases:
                if q2i != q2_target:
                    continue
                parts.append(conj(guard, new_reg_class(update, qi, j, 1)))
            rel_defs[base + "R" * j] = disj(*parts)

    # per-register order and labels
    for q2_target in range(n_states):
        cpath = comb_path(q2_target, n_states)
        for r in range(k):
            rpath = cpath + comb_path(r, k)
            ord_parts = []
            for qi, ai, q2i, update, guard in cases:
                if q2i != q2_target:
                    continue
                word = update.words[r]
                pieces = []
                for j1, tok1 in enumerate(word):
                    for j2, tok2 in enumerate(word):
                        if j1 > j2:
                            continue
                        both = conj(token_class(qi, tok1, 1),
                                    token_class(qi, tok2, 2))
                        if j1 == j2:
                            if tok1[0] == REG:
                                both = conj(both,
                                            old_ord(qi, tok1[1] - 1, 1, 2))
                            # a literal is a single element: reflexive
                        pieces.append(both)
                ord_parts.append(conj(guard, disj(*pieces)))
            rel_defs["ord@" + rpath] = disj(*ord_parts)

            for gnode in comb_node_paths(n_out):
                label_parts = []
                for qi, ai, q2i, update, guard in cases:
                    if q2i != q2_target:
                        continue
                    word = update.words[r]
                    pieces = []
                    for tok in word:
                        if tok[0] == REG:
                            pieces.append(conj(
                                token_class(qi, tok, 1),
                                old_label(qi, tok[1] - 1, gnode, 1)))
                        else:
                            gi = m.output_alphabet.index(tok[1])
                            node_j = len(gnode)
                            # the fresh letter is variant gi of the comb
                            goes_left_here = (gi == node_j and gi < n_out - 1)
                            if goes_left_here:
                                pieces.append(token_class(qi, tok, 1))
                    label_parts.append(conj(guard, disj(*pieces)))
                rel_defs["tag@" + rpath + "e" + gnode] = disj(*label_parts)

    interp = QfInterp(in_vocab_pair, state_vocab, universe, rel_defs)
    interp.validate()
    alloc = LeafAllocator()
    init_value = config_to_value(m, m.initial(), alloc)
    return delta_t, init_value, interp


def build_fold_instance(m: Sst, word) -> FoldInstance:
    """Encode a word as a fold instance for the compiled interpretation."""
    delta_t, init_value, interp = sst_to_qf(m)
    sigma_t = letter_type(m.input_alphabet)
    b0 = encode(init_value, delta_t)
    alloc = LeafAllocator(start=max(b0.universe, default=-1) + 1)
    letters = []
    for a in word:
        letters.append(encode(letter_value(m.input_alphabet, a, alloc.fresh()),
                              sigma_t))
    return FoldInstance(interp, b0, letters, vocab_of(delta_t), vocab_of(sigma_t))


# ---------------------------------------------------------------------------
# Pre-copying decomposition into the simple fragment
# ---------------------------------------------------------------------------

def to_simple(m: Sst):
    """(hom, simple machine) with run(m, w) == run(simple, hom(w)).

    The homomorphism copies each input letter c times; phase i stashes the
    i-th literal of the pending update into a scratch register, and the last
    phase performs the update with scratch registers in place of literals.
    """
    c = max((m.updates[q].literal_count() for q in m.states), default=0)
    if c <= 1:
        return (lambda w: tuple(w)), m
    k = m.nregs
    phases = list(range(1, c + 1))
    alphabet2 = tuple(f"{a}#{i}" for a in m.input_alphabet for i in phases)

    def hom(word):
        out = []
        for a in word:
            out.extend(f"{a}#{i}" for i in phases)
        return tuple(out)

    idle = tuple(f"{q}|idle" for q in m.states)
    mid = {(q, a, i): f"{q}|{a}|{i}"
           for q in m.states for a in m.input_alphabet for i in range(1, c)}
    states2 = idle + tuple(mid.values())

    def literal_tokens(update):
        return [tok for w in update.words for tok in w if tok[0] == LIT]

    trans2 = {}
    updates2 = {}
    identity_words = tuple(((REG, r + 1),) for r in range(k + c - 1))

    for q in m.states:
        # idle states: consume phase-1 letters
        for a in m.input_alphabet:
            for i in phases:
                key = (f"{q}|idle", f"{a}#{i}")
                if i == 1 and c > 1:
                    trans2[key] = mid[(q, a, 1)]
                elif i == 1:
                    trans2[key] = f"{m.trans[(q, a)]}|idle"
                else:
                    trans2[key] = f"{q}|idle"  # junk: malformed input
        updates2[f"{q}|idle"] = RegisterUpdate(
            k + c - 1, k + c - 1, _deliteral_words(m.updates[q], k, c))
    for (q, a, i), name in mid.items():
        for b in m.input_alphabet:
            for j in phases:
                key = (name, f"{b}#{j}")
                if b == a and j == i + 1:
                    if j < c:
                        trans2[key] = mid[(q, a, j)]
                    else:
                        trans2[key] = f"{m.trans[(q, a)]}|idle"
                else:
                    trans2[key] = name  # junk
        target_update = m.updates[m.trans[(q, a)]]
        lits = literal_tokens(target_update)
        words = list(identity_words)
        # scratch register k+i holds the i-th literal (1-based phases)
        if i <= len(lits) - 1:
            words[k + i - 1] = (lits[i - 1],)
        else:
            words[k + i - 1] = ()
        # keep identity elsewhere, but the scratch word we overwrote had the
        # token (REG, k+i); drop it to stay copyless
        updates2[name] = RegisterUpdate(k + c - 1, k + c - 1, tuple(words))

    out2 = RegisterUpdate(k + c - 1, 1, m.out.words)
    m2 = Sst(alphabet2, m.output_alphabet, states2, trans2, updates2, out2,
             k + c - 1)
    return hom, m2


def _deliteral_words(update: RegisterUpdate, k: int, c: int):
    """Replace all but the last literal by scratch registers k+1..; empty the
    scratch registers afterwards."""
    lits = [tok for w in update.words for tok in w if tok[0] == LIT]
    replace_upto = len(lits) - 1  # the last literal stays literal
    seen = 0
    words = []
    for w in update.words:
        out = []
        for tok in w:
            if tok[0] == LIT:
                seen += 1
                if seen <= replace_upto:
                    out.append((REG, k + seen))
                else:
                    out.append(tok)
            else:
                out.append(tok)
        words.append(tuple(out))
    words.extend(() for _ in range(c - 1))
    return tuple(words)


# ---------------------------------------------------------------------------
# Text format
# ---------------------------------------------------------------------------

def parse_word_tokens(text: str):
    """$N for registers, single characters for literal letters."""
    out = []
    i = 0
    while i < len(text):
        if text[i] == "$":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ValueError(f"bad register reference in {text!r}")
            out.append((REG, int(text[i + 1:j])))
            i = j
        elif text[i].isspace():
            i += 1
        else:
            out.append((LIT, text[i]))
            i += 1
    return tuple(out)


def word_tokens_to_text(word) -> str:
    return "".join(f"${payload}" if kind == REG else payload
                   for kind, payload in word)


def sst_to_text(m: Sst) -> str:
    for a in tuple(m.input_alphabet) + tuple(m.output_alphabet):
        if len(str(a)) != 1:
            raise ValueError("the text format needs single-character letters")
    lines = [
        "ALPHABET-IN " + " ".join(m.input_alphabet),
        "ALPHABET-OUT " + " ".join(m.output_alphabet),
        "STATES " + " ".join(m.states),
    ]
    for (q, a), q2 in sorted(m.trans.items()):
        lines.append(f"TRANS {q} {a} -> {q2}")
    for q in m.states:
        words = " | ".join(word_tokens_to_text(w) for w in m.updates[q].words)
        lines.append(f"UPDATE {q}: {words}")
    lines.append(f"OUT: {word_tokens_to_text(m.out.words[0])}")
    return "\n".join(lines) + "\n"


def sst_from_text(text: str) -> Sst:
    input_alphabet = output_alphabet = states = None
    trans = {}
    update_words = {}
    out_word = None
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if ln.startswith("ALPHABET-IN"):
            input_alphabet = tuple(ln.split()[1:])
        elif ln.startswith("ALPHABET-OUT"):
            output_alphabet = tuple(ln.split()[1:])
        elif ln.startswith("STATES"):
            states = tuple(ln.split()[1:])
        elif ln.startswith("TRANS"):
            parts = ln.split()
            if len(parts) != 5 or parts[3] != "->":
                raise ValueError(f"bad TRANS line: {ln!r}")
            trans[(parts[1], parts[2])] = parts[4]
        elif ln.startswith("UPDATE"):
            head, _, body = ln[len("UPDATE"):].partition(":")
            q = head.strip()
            words = [parse_word_tokens(w.strip())
                     for w in body.split("|")] if body.strip() else [()]
            if body.strip() == "":
                words = []
            update_words[q] = tuple(words)
        elif ln.startswith("OUT:"):
            out_word = parse_word_tokens(ln[len("OUT:"):].strip())
        else:
            raise ValueError(f"unrecognized line: {ln!r}")
    if None in (input_alphabet, output_alphabet, states) or out_word is None:
        raise ValueError("missing section in machine description")
    counts = {len(ws) for ws in update_words.values()}
    if len(counts) > 1:
        raise ValueError("updates disagree on the register count")
    k = counts.pop() if counts else 0
    updates = {q: RegisterUpdate(k, k, ws) for q, ws in update_words.items()}
    out = RegisterUpdate(k, 1, (out_word,))
    return Sst(input_alphabet, output_alphabet, states, trans, updates, out, k)
