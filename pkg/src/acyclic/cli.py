"""Command line front end.

Exit codes: 0 success, 1 parse error, 2 not stratified, 3 resource cap,
4 verification disagreement.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from acyclic.evaluate import Evaluator
from acyclic.analysis import StratFailure, check_acyclic, stratify, variable_graph
from acyclic.formula import Formula, ParseError, parse, render
from acyclic.gadgets import PREDICATE, GadgetBuilder
from acyclic.harness import adversary, verify_translation
from acyclic.hf import (
    DEFAULT_CAP, EMPTY, CapExceeded, HFSet, Universe, closure_universe,
    hf_universe, singleton, wiener_pair,
)
from acyclic.translate import (
    ATOM_MODES, GUARDS, MUTATIONS, PIPELINES, READINGS, NotStratified,
    TranslationOptions, translate,
)

EXIT_OK, EXIT_PARSE, EXIT_UNSTRATIFIED, EXIT_CAP, EXIT_DISAGREE = range(5)


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _source(args) -> str:
    if args.file:
        return Path(args.file).read_text()
    if args.formula is None:
        raise _Fail(EXIT_PARSE, "no formula given (inline text or --file)")
    return args.formula


def _read(args, generated=False) -> Formula:
    try:
        return parse(_source(args), allow_constant=args.const, allow_generated=generated)
    except ParseError as e:
        raise _Fail(EXIT_PARSE, f"parse error: {e}")


def _options(args) -> TranslationOptions:
    return TranslationOptions(guard=args.guard, atom_mode=args.atoms,
                              reading=args.empties, pipeline=args.mode,
                              mutate=getattr(args, "mutate", None))


def _translate(phi, opts):
    try:
        return translate(phi, opts)
    except NotStratified as e:
        raise _Fail(EXIT_UNSTRATIFIED, f"not stratified: {e.failure.describe()}")


def _universe(args) -> Universe:
    try:
        return hf_universe(args.base_rank, args.atoms_count, cap=args.cap)
    except CapExceeded as e:
        raise _Fail(EXIT_CAP, f"cap exceeded: {e}")


# -- commands ---------------------------------------------------------------

def cmd_stratify(args, out):
    phi = _read(args, generated=True)
    result = stratify(phi)
    if isinstance(result, StratFailure):
        out.write("not stratified\n")
        for c, sign in result.witness:
            out.write(f"  {render(c.atom)}  {'+' if sign > 0 else '-'}{c.offset}\n")
        out.write(f"offset sum: {result.offset_sum()}\n")
        return EXIT_UNSTRATIFIED
    for v, t in result.types.items():
        out.write(f"{v}\t{t}\n")
    return EXIT_OK


def cmd_acyclic(args, out):
    phi = _read(args, generated=True)
    result = check_acyclic(phi)
    if result.is_acyclic:
        out.write(f"acyclic ({result.vertices} vertices, {result.edges} edges)\n")
        return EXIT_OK
    out.write("cyclic\n")
    for e in result.edges:
        out.write(f"  {e.u} -- {e.v}  [{e.label}]\n")
    return EXIT_OK


def cmd_graph(args, out):
    g = variable_graph(_read(args, generated=True))
    if args.dot:
        out.write(g.to_dot())
        return EXIT_OK
    out.write(f"vertices: {' '.join(g.vertices)}\n")
    for e in g.edges:
        out.write(f"  e{e.id}: {e.u} -- {e.v}  [{e.label}]\n")
    return EXIT_OK


def cmd_translate(args, out):
    phi = _read(args)
    report = _translate(phi, _options(args))
    out.write(render(report.output) + "\n")
    if args.report:
        out.write(report.table())
    return EXIT_OK


def cmd_verify(args, out):
    phi = _read(args)
    report = _translate(phi, _options(args))
    base = _universe(args)
    extra = adversary(report, base) if args.adversarial else None
    result = verify_translation(phi, report, base, extra=extra)
    out.write(result.summary())
    return EXIT_OK if result.ok else EXIT_DISAGREE


def three_pair_function(atom: HFSet, x: HFSet, y: HFSet, z: HFSet) -> HFSet:
    """``{<{0},{x}>, <{{0}},{y}>, <{a},{z}>}`` with ``a`` a second empty object."""
    return HFSet.of((
        wiener_pair(singleton(EMPTY), singleton(x)),
        wiener_pair(singleton(EMPTY, 2), singleton(y)),
        wiener_pair(singleton(atom), singleton(z)),
    ))


def equality_gadget_at(f_value: HFSet, reading: str) -> bool:
    """Truth of the equality translation for indices 1 and 2 at ``f_value``."""
    g = GadgetBuilder(reading=reading).eq_translation("f", 1, 2)
    return Evaluator(g.formula).holds(closure_universe([f_value]), {"f": f_value})


def cmd_explore(args, out):
    if args.formula is None and not args.file:
        args.formula = "x = y"
    phi = _read(args)
    base = _universe(args)
    out.write(f"formula: {render(phi)}\n")
    out.write(f"base: rank {args.base_rank}, {args.atoms_count} atoms, "
              f"{len(base)} elements\n")
    out.write("guard  empties    intended   adversarial\n")
    for guard in GUARDS:
        for reading in READINGS:
            opts = TranslationOptions(guard=guard, atom_mode=args.atoms,
                                      reading=reading, pipeline=args.mode)
            report = _translate(phi, opts)
            plain = verify_translation(phi, report, base)
            tough = (verify_translation(phi, report, base, extra=adversary(report, base))
                     if args.adversarial else None)
            cells = [f"{plain.agreed}/{plain.checked}",
                     f"{tough.agreed}/{tough.checked}" if tough else "-"]
            out.write(f"{guard:<6} {reading:<10} {cells[0]:<10} {cells[1]}\n")
    atom = next((e for e in base.elements if e.is_atom), None)
    if atom is None:
        out.write("three-pair function: needs at least one atom\n")
        return EXIT_OK
    x = y = EMPTY
    z = singleton(EMPTY)
    f = three_pair_function(atom, x, y, z)
    out.write(f"three-pair function: {f}\n")
    for reading in READINGS:
        verdict = equality_gadget_at(f, reading)
        out.write(f"equality gadget (1, 2) with x=y, z!=y, {reading}: "
                  f"{str(verdict).lower()}\n")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acyclic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def source(sp):
        sp.add_argument("formula", nargs="?", help="formula text")
        sp.add_argument("--file", help="read the formula from a file")
        sp.add_argument("--const", action="store_true",
                        help="allow the constant 0 in the input")

    def translation(sp):
        sp.add_argument("--mode", choices=PIPELINES, default="prenex")
        sp.add_argument("--guard", choices=GUARDS, default="size")
        sp.add_argument("--atoms", choices=ATOM_MODES, default="unified")
        sp.add_argument("--empties", choices=READINGS, default=PREDICATE)

    def universe(sp, rank, atoms_):
        sp.add_argument("--base-rank", type=int, default=rank)
        sp.add_argument("--atoms-count", type=int, default=atoms_)
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
        sp.add_argument("--adversarial", action="store_true",
                        help="also offer junk coding-function candidates")

    for name, fn, helptext in (("stratify", cmd_stratify, "type table or failure witness"),
                               ("acyclic", cmd_acyclic, "acyclicity check"),
                               ("graph", cmd_graph, "variable multigraph")):
        sp = sub.add_parser(name, help=helptext)
        source(sp)
        if name == "graph":
            sp.add_argument("--dot", action="store_true", help="emit DOT")
        sp.set_defaults(run=fn)

    sp = sub.add_parser("translate", help="acyclic equivalent")
    source(sp)
    translation(sp)
    sp.add_argument("--report", action="store_true", help="append the translation tables")
    sp.set_defaults(run=cmd_translate)

    sp = sub.add_parser("verify", help="check a translation on finite models")
    source(sp)
    translation(sp)
    universe(sp, 3, 0)
    sp.add_argument("--mutate", choices=MUTATIONS, help="corrupt the translation on purpose")
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("explore-counterexample",
                        help="guard x reading matrix over a base with atoms")
    source(sp)
    translation(sp)
    universe(sp, 1, 2)
    sp.set_defaults(run=cmd_explore)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except _Fail as e:
        err.write(str(e) + "\n")
        return e.code
    except OSError as e:
        err.write(f"cannot read input: {e}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
