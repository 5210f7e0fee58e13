"""Hand-written stepping interpretations for the streaming-fold tests.

Each delta steps a word state (a list over a two-letter alphabet) by one
letter structure; the suite covers appending, prepending, order reversal,
and deletion, plus the compiled interpretation of a streaming string
transducer.  The endo suite holds one-vocabulary interpretations for the
congruence and iteration tests.
"""
from __future__ import annotations

import random

from .finite import unit_variant
from .fold_stream import FoldInstance
from .qf_logic import (
    Not,
    QfInterp,
    Rel,
    TRUE,
    conj,
    disj,
)
from .structures import encode, pair_vocab, vocab_of
from .types_values import CoProd, LeafAllocator, ListOf, SeqV, UNIT

SIGMA = CoProd(UNIT, UNIT)
WORD = ListOf(SIGMA)
STATE_VOCAB = vocab_of(WORD)
LETTER_VOCAB = vocab_of(SIGMA)
PAIR = pair_vocab(STATE_VOCAB, LETTER_VOCAB)

_FST = Rel("fst@", (1,))
_FST2 = Rel("fst@", (2,))
_ON_STATE = lambda i: Rel("fst@", (i,))


def _label_def() -> "dict[str, object]":
    """Output label: kept state elements keep theirs, the letter gets its tag."""
    return {
        "tag@e": disj(conj(_FST, Rel("tag@Le", (1,))),
                      conj(Not(_FST), Rel("tag@R", ()))),
    }


def append_delta() -> QfInterp:
    """State grows by the consumed letter at the right end."""
    defs = {"ord@": disj(conj(_FST, _FST2, Rel("ord@L", (1, 2))),
                         Not(_FST2))}
    defs.update(_label_def())
    return QfInterp(PAIR, STATE_VOCAB, TRUE, defs)


def prepend_delta() -> QfInterp:
    """State grows by the consumed letter at the left end."""
    defs = {"ord@": disj(conj(_FST, _FST2, Rel("ord@L", (1, 2))),
                         Not(_FST))}
    defs.update(_label_def())
    return QfInterp(PAIR, STATE_VOCAB, TRUE, defs)


def reverse_then_append_delta() -> QfInterp:
    """The old state is reversed before the letter is appended."""
    defs = {"ord@": disj(conj(_FST, _FST2, Rel("ord@L", (2, 1))),
                         Not(_FST2))}
    defs.update(_label_def())
    return QfInterp(PAIR, STATE_VOCAB, TRUE, defs)


def filter_left_delta() -> QfInterp:
    """Keeps only the left-tagged state elements, then appends the letter."""
    universe = disj(conj(_FST, Rel("tag@Le", (1,))), Not(_FST))
    defs = {"ord@": disj(conj(_FST, _FST2, Rel("ord@L", (1, 2))),
                         Not(_FST2))}
    defs.update(_label_def())
    return QfInterp(PAIR, STATE_VOCAB, universe, defs)


def forget_delta() -> QfInterp:
    """Drops the whole old state; the new state is just the letter."""
    defs = {"ord@": conj(Not(_FST), Not(_FST2))}
    defs.update(_label_def())
    return QfInterp(PAIR, STATE_VOCAB, Not(_FST), defs)


def append_pair_delta():
    """Letters are pairs of labelled units; both elements join the word.

    Exercises letter structures with more than one element, where two
    tracked positions can enter the stream at the same step.
    """
    from .types_values import Prod

    letter_t = Prod(SIGMA, SIGMA)
    letter_vocab = vocab_of(letter_t)
    pair = pair_vocab(STATE_VOCAB, letter_vocab)
    st = lambda i: Rel("fst@", (i,))
    first = lambda i: conj(Not(st(i)), Rel("fst@R", (i,)))
    second = lambda i: conj(Not(st(i)), Not(Rel("fst@R", (i,))))
    defs = {
        "ord@": disj(
            conj(st(1), st(2), Rel("ord@L", (1, 2))),
            conj(st(1), Not(st(2))),
            conj(first(1), Not(st(2))),
            conj(second(1), second(2)),
        ),
        "tag@e": disj(conj(st(1), Rel("tag@Le", (1,))),
                      conj(first(1), Rel("tag@RL", ())),
                      conj(second(1), Rel("tag@RR", ()))),
    }
    return QfInterp(pair, STATE_VOCAB, TRUE, defs), letter_t, letter_vocab


def pair_letter_instance(rng: random.Random, length: int,
                         shared=None) -> FoldInstance:
    from .types_values import PairV

    delta, letter_t, letter_vocab = shared or append_pair_delta()
    alloc = LeafAllocator()
    init = SeqV(tuple(unit_variant(rng.randrange(2), 2, alloc.fresh())
                      for _ in range(rng.randint(0, 2))))
    b0 = encode(init, WORD)
    letters = []
    for _ in range(length):
        v = PairV(unit_variant(rng.randrange(2), 2, alloc.fresh()),
                  unit_variant(rng.randrange(2), 2, alloc.fresh()))
        letters.append(encode(v, letter_t))
    return FoldInstance(delta, b0, letters, STATE_VOCAB, letter_vocab)


def sst_delta():
    """The compiled stepping interpretation of the reversing transducer."""
    from .sst import LIT, REG, RegisterUpdate, Sst, sst_to_qf

    machine = Sst(
        input_alphabet=("a", "b"), output_alphabet=("a", "b"),
        states=("qa", "qb"),
        trans={("qa", "a"): "qa", ("qa", "b"): "qb",
               ("qb", "a"): "qa", ("qb", "b"): "qb"},
        updates={"qa": RegisterUpdate(1, 1, (((LIT, "a"), (REG, 1)),)),
                 "qb": RegisterUpdate(1, 1, (((LIT, "b"), (REG, 1)),))},
        out=RegisterUpdate(1, 1, (((REG, 1),),)),
        nregs=1)
    delta_t, init_value, interp = sst_to_qf(machine)
    return machine, delta_t, init_value, interp


def word_instance(delta: QfInterp, rng: random.Random, length: int,
                  init_len: int = 2) -> FoldInstance:
    """A fold instance over the two-letter word vocabulary."""
    alloc = LeafAllocator()
    init = SeqV(tuple(unit_variant(rng.randrange(2), 2, alloc.fresh())
                      for _ in range(rng.randint(0, init_len))))
    b0 = encode(init, WORD)
    letters = [encode(unit_variant(rng.randrange(2), 2, alloc.fresh()), SIGMA)
               for _ in range(length)]
    return FoldInstance(delta, b0, letters, STATE_VOCAB, LETTER_VOCAB)


def sst_instance(rng: random.Random, length: int, shared=None) -> FoldInstance:
    from .sst import letter_type, letter_value
    from .types_values import LeafAllocator as _Alloc

    machine, delta_t, init_value, interp = shared or sst_delta()
    b0 = encode(init_value, delta_t)
    alloc = _Alloc(start=max(b0.universe, default=-1) + 1)
    sigma_t = letter_type(machine.input_alphabet)
    letters = [
        encode(letter_value(machine.input_alphabet,
                            rng.choice(machine.input_alphabet),
                            alloc.fresh()), sigma_t)
        for _ in range(length)
    ]
    return FoldInstance(interp, b0, letters, vocab_of(delta_t),
                        vocab_of(sigma_t))


def delta_suite():
    """(name, delta, instance builder) triples for the word deltas."""
    out = []
    for name, build in (("append", append_delta),
                        ("prepend", prepend_delta),
                        ("reverse_then_append", reverse_then_append_delta),
                        ("filter_left", filter_left_delta),
                        ("forget", forget_delta)):
        delta = build()
        delta.validate()
        out.append((name, delta,
                    lambda rng, length, d=delta: word_instance(d, rng, length)))
    pair_shared = append_pair_delta()
    pair_shared[0].validate()
    out.append(("append_pair", pair_shared[0],
                lambda rng, length, s=pair_shared:
                pair_letter_instance(rng, length, s)))
    sst_shared = sst_delta()
    out.append(("sst_reverse", sst_shared[3],
                lambda rng, length, s=sst_shared:
                sst_instance(rng, length, s)))
    return out


# ---------------------------------------------------------------------------
# Endo-interpretations on the word vocabulary
# ---------------------------------------------------------------------------

def reverse_interp() -> QfInterp:
    return QfInterp(STATE_VOCAB, STATE_VOCAB, TRUE, {
        "ord@": Rel("ord@", (2, 1)),
        "tag@e": Rel("tag@e", (1,)),
    })


def swap_labels_interp() -> QfInterp:
    return QfInterp(STATE_VOCAB, STATE_VOCAB, TRUE, {
        "ord@": Rel("ord@", (1, 2)),
        "tag@e": Not(Rel("tag@e", (1,))),
    })


def keep_left_interp() -> QfInterp:
    return QfInterp(STATE_VOCAB, STATE_VOCAB, Rel("tag@e", (1,)), {
        "ord@": Rel("ord@", (1, 2)),
        "tag@e": Rel("tag@e", (1,)),
    })


def endo_suite():
    from .qf_logic import identity_interp

    interps = [("identity", identity_interp(STATE_VOCAB)),
               ("reverse", reverse_interp()),
               ("swap_labels", swap_labels_interp()),
               ("keep_left", keep_left_interp())]
    for _, interp in interps:
        interp.validate()
    return interps


def random_word_structure(rng: random.Random, max_len: int = 6):
    alloc = LeafAllocator()
    v = SeqV(tuple(unit_variant(rng.randrange(2), 2, alloc.fresh())
                   for _ in range(rng.randint(0, max_len))))
    return encode(v, WORD)
