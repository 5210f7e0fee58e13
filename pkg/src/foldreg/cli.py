"""Command-line front end.

Exit codes: 0 ok, 2 type error, 3 value parse error, 4 mismatch, 1 internal.
Diagnostics go to stderr; results to stdout.  With --format machine the
output is line-oriented key=value.  The seed precedence is flag, then the
FOLDREG_SEED environment variable, then 0.
"""
from __future__ import annotations

import argparse
import os
import random
import sys

from .calculus import (
    SystemFlavor,
    Term,
    TypeCheckError,
    infer_type,
    parse_term,
    term_to_sexpr,
    type_to_sexpr,
)
from .evaluator import eval_term, growth_profile
from .types_values import ParseError, parse, serialize

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_TYPE = 2
EXIT_PARSE = 3
EXIT_MISMATCH = 4


def _seed_of(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FOLDREG_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            print(f"warning: ignoring bad FOLDREG_SEED={env!r}", file=sys.stderr)
    return 0


def _emit(args, pairs) -> None:
    if args.format == "machine":
        for key, value in pairs:
            print(f"{key}={value}")
    else:
        for key, value in pairs:
            print(f"{key}: {value}")


def _load_term(path: str) -> Term:
    with open(path) as fh:
        return parse_term(fh.read())


def _smallest_value(t):
    """The fixed fallback element used by the total load wrapper."""
    from .randgen import _small_value
    from .types_values import LeafAllocator

    return _small_value(t, random.Random(0), LeafAllocator())


def cmd_check(args) -> int:
    flavor = SystemFlavor.parse(args.flavor)
    term = _load_term(args.file)
    try:
        sig = infer_type(term, flavor)
    except TypeCheckError as err:
        print(f"type error: {err}", file=sys.stderr)
        if args.format == "machine":
            _emit(args, [("result", "error"), ("kind", err.kind),
                         ("path", "/".join(map(str, err.path)) or "root"),
                         ("message", err.message)])
        return EXIT_TYPE
    if args.format == "machine":
        _emit(args, [("result", "ok"),
                     ("dom", type_to_sexpr(sig.dom)),
                     ("cod", type_to_sexpr(sig.cod))])
    else:
        print(f"{sig.dom!r} -> {sig.cod!r}")
    return EXIT_OK


def cmd_run(args) -> int:
    flavor = SystemFlavor.parse(args.flavor)
    term = _load_term(args.file)
    try:
        sig = infer_type(term, flavor)
    except TypeCheckError as err:
        print(f"type error: {err}", file=sys.stderr)
        return EXIT_TYPE
    with open(args.input) as fh:
        text = fh.read()
    try:
        value = parse(text, sig.dom)
    except ParseError as err:
        if args.total:
            value = _smallest_value(sig.dom)
            print(f"note: ill-formatted input mapped to the fixed element "
                  f"({err})", file=sys.stderr)
        else:
            print(f"value parse error: {err}", file=sys.stderr)
            return EXIT_PARSE
    out = eval_term(term, value)
    if args.format == "machine":
        _emit(args, [("output", serialize(out))])
    else:
        print(serialize(out))
    return EXIT_OK


def _parse_sizes(spec: str):
    if ".." in spec:
        lo, _, hi = spec.partition("..")
        lo, hi = int(lo), int(hi)
        step = max(1, (hi - lo) // 9)
        return list(range(lo, hi + 1, step))
    return [int(x) for x in spec.split(",")]


def cmd_growth(args) -> int:
    flavor = SystemFlavor.parse(args.flavor)
    term = _load_term(args.file)
    try:
        profile = growth_profile(term, flavor, _parse_sizes(args.sizes),
                                 seed=_seed_of(args))
    except TypeCheckError as err:
        print(f"type error: {err}", file=sys.stderr)
        return EXIT_TYPE
    pairs = [("degree", profile.degree),
             ("slope", f"{profile.slope:.6f}"),
             ("residual", f"{profile.residual:.6f}")]
    if args.format != "machine":
        pairs.append(("points", " ".join(f"{x}->{y}"
                                         for x, y in profile.points)))
    _emit(args, pairs)
    if args.report_dir:
        from .report import write_growth_report

        name = os.path.splitext(os.path.basename(args.file))[0]
        for path in write_growth_report(args.report_dir, name, profile):
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _letter_vocab_of(interp):
    """Recover the letter vocabulary from the pair-shaped input vocabulary."""
    from .structures import Vocabulary, pair_vocab

    rels = []
    for name, arity in interp.in_vocab.rels:
        kind, _, path = name.partition("@")
        if name == "fst@":
            continue
        if path.startswith("R"):
            rels.append((f"{kind}@{path[1:]}", arity))
    letter = Vocabulary.make(rels)
    if pair_vocab(interp.out_vocab, letter) != interp.in_vocab:
        raise ValueError("input vocabulary is not state x letter")
    return letter


def cmd_fold(args) -> int:
    from .fold_stream import FoldInstance, naive_fold, stream_fold
    from .qf_logic import interp_from_text
    from .structures import Structure, structures_isomorphic

    with open(args.file) as fh:
        interp = interp_from_text(fh.read())
    with open(args.b0) as fh:
        b0 = Structure.parse_dump(fh.read())
    letters = []
    for fname in sorted(os.listdir(args.letters)):
        with open(os.path.join(args.letters, fname)) as fh:
            letters.append(Structure.parse_dump(fh.read()))
    try:
        letter_vocab = _letter_vocab_of(interp)
        inst = FoldInstance(interp, b0, letters, interp.out_vocab, letter_vocab)
        if args.mode == "naive":
            out = naive_fold(inst)
        elif args.mode == "stream":
            out = stream_fold(inst)
        else:
            a = naive_fold(inst)
            b = stream_fold(inst)
            ok = structures_isomorphic(a, b)
            sys.stdout.write(b.dump())
            _emit(args, [("compare", "PASS" if ok else "FAIL")])
            return EXIT_OK if ok else EXIT_MISMATCH
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_TYPE
    sys.stdout.write(out.dump())
    return EXIT_OK


def cmd_sst(args) -> int:
    from .sst import (
        build_fold_instance,
        final_configuration,
        run as sst_run,
        sst_from_text,
        sst_to_qf,
        value_to_config,
    )

    with open(args.file) as fh:
        machine = sst_from_text(fh.read())
    if args.action == "run":
        word = tuple(args.word or "")
        try:
            out = sst_run(machine, word)
        except ValueError as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_TYPE
        _emit(args, [("output", "".join(out))])
        return EXIT_OK
    if args.action == "compile":
        from .qf_logic import interp_to_text
        from .structures import encode

        try:
            delta_t, init_value, interp = sst_to_qf(machine)
        except ValueError as err:
            print(f"error: {err}", file=sys.stderr)
            return EXIT_TYPE
        _emit(args, [("config-type", type_to_sexpr(delta_t))])
        sys.stdout.write(interp_to_text(interp))
        sys.stdout.write(encode(init_value, delta_t).dump())
        return EXIT_OK
    # compare: the streaming fold of the compiled machine against run
    from .fold_stream import naive_fold, stream_fold
    from .structures import decode, structures_isomorphic

    rng = random.Random(_seed_of(args))
    words = []
    if args.word is not None:
        words.append(tuple(args.word))
    for _ in range(args.trials):
        n = rng.randint(0, 12)
        words.append(tuple(rng.choice(machine.input_alphabet)
                           for _ in range(n)))
    delta_t, _, _ = sst_to_qf(machine)
    for word in words:
        inst = build_fold_instance(machine, word)
        streamed = stream_fold(inst)
        if not structures_isomorphic(streamed, naive_fold(inst)):
            _emit(args, [("compare", "FAIL"),
                         ("word", "".join(word)),
                         ("reason", "stream/naive differ")])
            return EXIT_MISMATCH
        cfg = value_to_config(machine, decode(streamed, delta_t))
        if cfg != final_configuration(machine, word):
            _emit(args, [("compare", "FAIL"), ("word", "".join(word)),
                         ("reason", "configuration differs")])
            return EXIT_MISMATCH
    _emit(args, [("compare", "PASS"), ("words", len(words))])
    return EXIT_OK


def cmd_catalog(args) -> int:
    from .stdlib import catalog, check_derivation

    entries = catalog()
    if args.emit:
        from .gates import exp_duplication_term, fold_tail_term

        os.makedirs(args.emit, exist_ok=True)
        for d in entries:
            path = os.path.join(args.emit, f"{d.name}.term")
            with open(path, "w") as fh:
                fh.write(term_to_sexpr(d.full_term()) + "\n")
            print(f"wrote {path}", file=sys.stderr)
        for name, term in (("exp_duplication", exp_duplication_term(1)),
                           ("fold_tail", fold_tail_term(1))):
            path = os.path.join(args.emit, f"{name}.term")
            with open(path, "w") as fh:
                fh.write(term_to_sexpr(term) + "\n")
            print(f"wrote {path}", file=sys.stderr)
    if not args.check:
        if not args.emit:
            for d in entries:
                sig = d.signature()
                _emit(args, [(d.name, f"{sig.dom!r} -> {sig.cod!r}")])
        return EXIT_OK
    reports = []
    failures = 0
    for d in entries:
        rep = check_derivation(d, trials=args.trials, max_size=args.max_size,
                               seed=_seed_of(args))
        reports.append(rep)
        _emit(args, [(d.name, "PASS" if rep.passed else "FAIL")])
        if not rep.passed:
            failures += 1
    if args.report_dir:
        from .report import write_catalog_report

        for path in write_catalog_report(args.report_dir, reports):
            print(f"wrote {path}", file=sys.stderr)
    return EXIT_MISMATCH if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "machine"),
                        default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="overrides FOLDREG_SEED; default 0")
    common.add_argument("--report-dir", default=argparse.SUPPRESS,
                        help="render figures and delimited tables here")
    parser = argparse.ArgumentParser(
        prog="foldreg",
        parents=[common],
        description="transducer calculus: checking, evaluation, streaming "
                    "folds, and streaming string transducers")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("check", help="typecheck a term file")
    p.add_argument("file")
    p.add_argument("--flavor", default="poly")
    p.set_defaults(fn=cmd_check)

    p = add_parser("run", help="evaluate a term on a value")
    p.add_argument("file")
    p.add_argument("--input", required=True)
    p.add_argument("--flavor", default="poly")
    p.add_argument("--total", action="store_true",
                   help="map ill-formatted inputs to a fixed element "
                        "instead of failing")
    p.set_defaults(fn=cmd_run)

    p = add_parser("growth", help="fit the output growth degree")
    p.add_argument("file")
    p.add_argument("--sizes", default="5..50")
    p.add_argument("--flavor", default="poly")
    p.set_defaults(fn=cmd_growth)

    p = add_parser("fold", help="fold an interpretation over letters")
    p.add_argument("file", help="interpretation file (state x letter -> state)")
    p.add_argument("--b0", required=True, help="initial state structure dump")
    p.add_argument("--letters", required=True,
                   help="directory of letter structure dumps")
    p.add_argument("--mode", choices=("naive", "stream", "compare"),
                   default="compare")
    p.set_defaults(fn=cmd_fold)

    p = add_parser("sst", help="streaming string transducer tooling")
    p.add_argument("action", choices=("run", "compile", "compare"))
    p.add_argument("file")
    p.add_argument("--word", default=None)
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(fn=cmd_sst)

    p = add_parser("catalog", help="the library of named derivations")
    p.add_argument("--check", action="store_true")
    p.add_argument("--emit", default=None, metavar="DIR",
                   help="write each entry as a term file")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--max-size", type=int, default=30)
    p.set_defaults(fn=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for attr, default in (("format", "text"), ("seed", None),
                          ("report_dir", None)):
        if not hasattr(args, attr):
            setattr(args, attr, default)
    try:
        return args.fn(args)
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except BrokenPipeError:
        return EXIT_OK
    except Exception as err:  # noqa: BLE001 - the contract maps these to 1
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
