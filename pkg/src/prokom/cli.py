"""Command-line entry point: ``prokom check|replay|suite|demo``.

Exit codes: 0 Certified (or success), 1 Refuted (or failed replay/suite),
2 InconclusiveWindow, 3 bad input (parse, schema, unknown name, usage),
4 any other error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .certificates import replay
from .errors import ProkomError, SchemaError, ShapeMismatch, UnknownSuite
from .exactbase.rings import ring_from_name
from .indpro import (ExtensionTriple, IndComplex, IndMorphism, ProIndComplex, ProIndMorphism, Window,
                     fake_product, is_ind_locally_split, is_locally_split, is_pro_locally_split)
from .serialize import load_diagram, save_diagram
from .supercomplex import SuperComplex

EXIT_CERTIFIED, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_ERROR = 0, 1, 2, 3, 4


def _mc():
    from . import modelcheck
    return modelcheck


# predicate name -> (accepted kinds, function)
PREDICATES = {
    "contractible": (("supercomplex", "ind", "pro"), lambda x: _mc().is_locally_contractible(x)),
    "exact": (("supercomplex", "ind", "pro"), lambda x: _mc().is_exact_locally_split(x)),
    "homology-vanishes": (("supercomplex", "ind", "pro"), lambda x: _mc().homology_vanishes(x)),
    "locally-split": (("extension",), is_locally_split),
    "ind-locally-split": (("extension",), is_ind_locally_split),
    "pro-locally-split": (("extension",), is_pro_locally_split),
    "weq-cone": (("morphism",), lambda f: _mc().is_local_equivalence_via_cone(f)),
    "weq-direct": (("morphism",), lambda f: _mc().is_local_equivalence_direct(f)),
    "cofibration": (("morphism",), lambda f: _mc().is_cofibration(f)),
    "fibration": (("morphism",), lambda f: _mc().is_fibration(f)),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


# ---------------------------------------------------------------------------
# window overrides


def _ind(L: IndComplex, length, tail):
    length = L.length if length is None else length
    if length > L.length:
        raise ShapeMismatch(f"window {length} exceeds the {L.length} stored levels")
    return IndComplex(L.levels[:length], L.transitions[:length - 1], Window(length, tail or L.window.tail))


def _pro(X: ProIndComplex, length, tail):
    length = X.length if length is None else length
    if length > X.length:
        raise ShapeMismatch(f"window {length} exceeds the {X.length} stored levels")
    levels = [_ind(L, None, tail) for L in X.levels[:length]]
    trans = [IndMorphism(levels[n + 1], levels[n], a.level_map, a.components) for n, a in
             enumerate(X.transitions[:length - 1])]
    return ProIndComplex(levels, trans, Window(length, tail or X.window.tail), injective=X._injective)


def _pro_map(f: ProIndMorphism, length, tail):
    S, T = _pro(f.source, length, tail), _pro(f.target, length, tail)
    return ProIndMorphism(S, T, [list(r.components) for r in f.components[:S.length]])


def _ind_map(f: IndMorphism, S, T):
    return IndMorphism(S, T, f.level_map[:S.length], f.components[:S.length])


def rewindow(value, length=None, tail=None):
    """Truncate the outer window to ``length`` stored levels and/or set every tail to ``tail``."""
    if length is None and tail is None:
        return value
    if isinstance(value, SuperComplex):
        return value
    if isinstance(value, IndComplex):
        return _ind(value, length, tail)
    if isinstance(value, ProIndComplex):
        return _pro(value, length, tail)
    if isinstance(value, ProIndMorphism):
        return _pro_map(value, length, tail)
    if isinstance(value, ExtensionTriple):
        if value.level == "base":
            return value
        if value.level == "ind":
            K, E, Q = (_ind(X, length, tail) for X in (value.K, value.E, value.Q))
            return ExtensionTriple("ind", K, E, Q, _ind_map(value.incl, K, E), _ind_map(value.proj, E, Q))
        K, E, Q = (_pro(X, length, tail) for X in (value.K, value.E, value.Q))
        incl = ProIndMorphism(K, E, [list(r.components) for r in value.incl.components[:E.length]])
        proj = ProIndMorphism(E, Q, [list(r.components) for r in value.proj.components[:E.length]])
        return ExtensionTriple("pro", K, E, Q, incl, proj)
    raise TypeError(f"cannot rewindow {type(value).__name__}")


# ---------------------------------------------------------------------------
# commands


def _exit_for(v):
    if v.certified:
        return EXIT_CERTIFIED
    if v.refuted:
        return EXIT_REFUTED
    return EXIT_INCONCLUSIVE


def cmd_check(args):
    if args.predicate not in PREDICATES:
        raise UnknownSuite(f"unknown predicate {args.predicate!r}; known: {', '.join(PREDICATES)}")
    kinds, fn = PREDICATES[args.predicate]
    d = load_diagram(args.path)
    if d.kind not in kinds:
        raise SchemaError(f"predicate {args.predicate!r} takes {'/'.join(kinds)}, the file holds {d.kind!r}")
    value = rewindow(d.value, args.window, args.tail)
    v = fn(value)
    n = len(v.certificate.claims) if v.certificate is not None else 0
    print(f"{v.outcome.name} {args.predicate} ({n} claims)" + (f": {v.reason}" if v.reason else ""))
    if args.out and v.definitive and v.certificate is not None:
        with open(args.out, "w") as fh:
            fh.write(v.certificate.dumps() + "\n")
        print(f"certificate written to {args.out}")
    return _exit_for(v)


def cmd_replay(args):
    try:
        with open(args.path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{args.path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    ok, msg = replay(obj)
    print(("OK " if ok else "FAILED ") + msg)
    return EXIT_CERTIFIED if ok else EXIT_REFUTED


def default_seed():
    return int(os.environ.get("PROKOM_SEED", "0"))


def cmd_suite(args):
    from .axioms import GeneratorConfig, run_suite, suite_names
    if args.list:
        print("\n".join(suite_names()))
        return EXIT_CERTIFIED
    if not args.name:
        raise UnknownSuite("a suite name is required (see --list)")
    seed = default_seed() if args.seed is None else args.seed
    cfg = GeneratorConfig(args.ring, max_dim=args.max_dim, window_length=args.window_length, tail=args.tail,
                          seed=seed)
    report = run_suite(args.name, cfg, trials=args.trials)
    if args.json:
        print(json.dumps(report.to_json(), indent=1, sort_keys=True))
    else:
        print(report.summary())
        for f in report.failures:
            print(f"  trial {f['trial']} seed {f['seed']}: {f['error']}: {f['message']}")
    return EXIT_CERTIFIED if report.passed else EXIT_REFUTED


def _demo_fake_product():
    from .exactbase.modules import BaseMorphism
    from .supercomplex import ChainMap
    Z = ring_from_name("Z")
    C = SuperComplex.unit(Z)
    two = ChainMap(C, C, BaseMorphism.from_rows(C[0], C[0], [[2]]), BaseMorphism.zero(C[1], C[1]))
    X = ProIndComplex.grid([[C]] * 3, [[]] * 3, [[two]] * 2)
    fp = fake_product(X)
    text = ["Tower X: Z <-2- Z <-2- Z.",
            "Fake product P_n = X_0 (+) ... (+) X_n with the transitions that drop the last summand.",
            "X embeds by x -> (2^(n-i) x)_i; the cokernel has the twisted drop-last transitions.",
            f"Pro-locally split: {fp.verdict.outcome.name}; cofibration: "
            f"{_mc().is_cofibration(fp.ext.incl).outcome.name}."]
    return fp.product, text


def _demo_strictify():
    from .exactbase.modules import BaseMorphism, BaseObject
    from .supercomplex import ChainMap
    Z = ring_from_name("Z")
    V = BaseObject.free(Z, 1)
    C = SuperComplex(V, V, BaseMorphism.identity(V), BaseMorphism.zero(V, V))
    X = ProIndComplex.grid([[C]] * 3, [[]] * 3, [[ChainMap.identity(C)]] * 2)
    mc = _mc()
    r = mc.strictify(mc.shift_action(mc.forget(X)))
    text = ["Tower of Z --1--> Z with the differential given one tower step late (d_n = d sigma).",
            f"Strictified levels have dims {[r.level(n).dims for n in range(r.tower.length)]}; "
            f"reindexing p(n) = {r.reindex}.",
            f"Round-trip certificate: {r.verdict.outcome.name} ({len(r.verdict.certificate.claims)} claims)."]
    return r.tower, text


DEMOS = {"fake-product": _demo_fake_product, "strictify": _demo_strictify}


def cmd_demo(args):
    if args.name not in DEMOS:
        raise UnknownSuite(f"unknown demo {args.name!r}; known: {', '.join(DEMOS)}")
    value, text = DEMOS[args.name]()
    print("\n".join(text))
    if args.out:
        save_diagram(value, args.out)
        print(f"diagram written to {args.out}")
    else:
        from .serialize import diagram
        print(diagram(value).dumps())
    return EXIT_CERTIFIED


def build_parser():
    p = _Parser(prog="prokom", description="Certified checks on pro-ind supercomplexes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run a predicate on a diagram file")
    c.add_argument("path")
    c.add_argument("predicate", help=", ".join(PREDICATES))
    c.add_argument("--window", type=int, help="use only the first N stored levels")
    c.add_argument("--tail", choices=["stabilizing", "unknown"])
    c.add_argument("--out", help="write the certificate here")
    c.set_defaults(fn=cmd_check)

    r = sub.add_parser("replay", help="re-verify a certificate")
    r.add_argument("path")
    r.set_defaults(fn=cmd_replay)

    s = sub.add_parser("suite", help="run a law suite")
    s.add_argument("name", nargs="?")
    s.add_argument("--list", action="store_true")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, help="default: $PROKOM_SEED or 0")
    s.add_argument("--ring", default="Q")
    s.add_argument("--max-dim", type=int, default=2)
    s.add_argument("--window-length", type=int, default=2)
    s.add_argument("--tail", choices=["stabilizing", "unknown"], default="stabilizing")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_suite)

    d = sub.add_parser("demo", help="emit a canned example")
    d.add_argument("name", help=", ".join(DEMOS))
    d.add_argument("--out")
    d.set_defaults(fn=cmd_demo)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (SchemaError, UnknownSuite, ShapeMismatch, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ProkomError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
