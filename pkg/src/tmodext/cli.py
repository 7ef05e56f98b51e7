"""Command-line front end.

Every invocation names one coefficient field with --field and describes
modules, biderivations, and polynomials in the same text grammar the parsers
accept; results are printed in canonical text form or, with --json, as
stable JSON documents.  Exit codes: 0 success, 1 domain error, 2 usage or
parse error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .biderivations import Biderivation, assemble, reduce_canonical
from .coefficients import parse_field
from .errors import ParseError, TmodError, UnsupportedRegime, UsageError
from .ext_structures import (
    duality_transport,
    ext_product,
    ext_structure,
    ga_sequence,
)
from .homological import (
    baer_sum,
    hom_space,
    is_split,
    pullback,
    pushout,
    six_term,
    t_action,
)
from .modules_t import carlitz_power, parse_module
from .oracle import verify_duality, verify_ga, verify_sixterm, verify_structure
from .skewpoly import TAU, SIGMA, parse_apoly, parse_matrix


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _slot_text(slot):
    return "(" + ",".join(str(x) for x in slot) + ")"


def _emit(args, text, payload):
    out = json.dumps(payload, indent=2) if args.json else text
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
        return
    print(out)


def _field(args):
    return parse_field(args.field)


def _var(args):
    name = getattr(args, "var", "tau")
    return SIGMA if name == "sigma" else TAU


def _module(spec, text, var=TAU):
    if text is None:
        raise UsageError("a module expression is required here")
    return parse_module(spec, text, var)


def _delta(spec, source, target, text, var=TAU):
    if text is None:
        raise UsageError("--delta is required here")
    mat = parse_matrix(spec, text, var)
    return Biderivation(source, target, mat)


def _structure_payload(spec, structure, seq):
    return {
        "field": spec.header(),
        "source": structure.source.t_matrix.to_json(),
        "target": structure.target.t_matrix.to_json(),
        "regime": structure.regime,
        "basis": [list(slot) for slot in structure.basis],
        "pi_t": structure.pi.to_json(),
        "ga_rank": seq.s,
    }


def _structure_text(spec, structure, seq, title="Pi_t"):
    lines = [
        f"field: {spec.header()}",
        f"source: {structure.source.describe()}",
        f"target: {structure.target.describe()}",
        f"regime: {structure.regime}",
        "basis: " + " ".join(_slot_text(s) for s in structure.basis),
        f"ga_rank: {seq.s}",
        f"{title}:",
        str(structure.pi),
    ]
    return "\n".join(lines)


def cmd_ext(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    structure = ext_structure(source, target)
    seq = ga_sequence(structure)
    _emit(args, _structure_text(spec, structure, seq),
          _structure_payload(spec, structure, seq))
    return 0


def cmd_ext0(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    structure = ext_structure(source, target)
    seq = ga_sequence(structure)
    sub_basis = [structure.basis[i] for i in range(structure.rank)
                 if i not in seq.pure]
    payload = {
        "field": spec.header(),
        "source": structure.source.t_matrix.to_json(),
        "target": structure.target.t_matrix.to_json(),
        "regime": structure.regime,
        "basis": [list(slot) for slot in sub_basis],
        "pi_t": seq.sub_pi.to_json(),
        "ga_rank": seq.s,
    }
    text = "\n".join([
        f"field: {spec.header()}",
        f"source: {structure.source.describe()}",
        f"target: {structure.target.describe()}",
        f"regime: {structure.regime}",
        "basis: " + " ".join(_slot_text(s) for s in sub_basis),
        f"ga_rank: {seq.s}",
        "Pi0_t:",
        str(seq.sub_pi),
    ])
    _emit(args, text, payload)
    return 0


def cmd_ext_seq(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    structure = ext_structure(source, target)
    seq = ga_sequence(structure)
    payload = dict(seq.to_json())
    payload["field"] = spec.header()
    lines = [
        f"field: {spec.header()}",
        f"s: {seq.s}",
        "pure: " + (" ".join(_slot_text(structure.basis[i])
                             for i in seq.pure) or "(none)"),
        "g:",
        str(seq.g) if seq.g is not None else "(none)",
        "inclusion:",
        str(seq.inclusion) if seq.inclusion is not None else "(none)",
        "Pi0_t:",
        str(seq.sub_pi) if seq.sub_pi is not None else "(none)",
    ]
    _emit(args, "\n".join(lines), payload)
    return 0


def cmd_ext_prod(args):
    spec = _field(args)
    sources = [_module(spec, part) for part in args.phi.split(";")]
    targets = [_module(spec, part) for part in args.psi.split(";")]
    structure = ext_product(sources, targets)
    seq = ga_sequence(structure)
    _emit(args, _structure_text(spec, structure, seq),
          _structure_payload(spec, structure, seq))
    return 0


def cmd_ext_carlitz(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = carlitz_power(spec, args.e)
    structure = ext_structure(source, target)
    seq = ga_sequence(structure)
    _emit(args, _structure_text(spec, structure, seq),
          _structure_payload(spec, structure, seq))
    return 0


def cmd_ext_tmod(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    if not source.has_invertible_leading():
        raise UnsupportedRegime(
            "ext-tmod needs a source with an invertible leading "
            "coefficient matrix")
    structure = ext_structure(source, target)
    seq = ga_sequence(structure)
    _emit(args, _structure_text(spec, structure, seq),
          _structure_payload(spec, structure, seq))
    return 0


def cmd_ext_dual(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    structure = duality_transport(source, target)
    seq = ga_sequence(structure)
    _emit(args, _structure_text(spec, structure, seq, title="Pi_t (adjoint side)"),
          _structure_payload(spec, structure, seq))
    return 0


def cmd_adjoint(args):
    spec = _field(args)
    var = _var(args)
    if args.phi is not None:
        result = _module(spec, args.phi, var).adjoint().t_matrix
    elif args.delta is not None:
        result = parse_matrix(spec, args.delta, var).adjoint()
    else:
        raise UsageError("adjoint needs --phi or --delta")
    _emit(args, str(result), result.to_json())
    return 0


def cmd_reduce(args):
    spec = _field(args)
    var = _var(args)
    source = _module(spec, args.phi, var)
    target = _module(spec, args.psi, var)
    delta = _delta(spec, source, target, args.delta, var)
    result = reduce_canonical(delta)
    payload = {
        "canonical": result.canonical.matrix.to_json(),
        "witness": result.witness.to_json(),
        "regime": result.regime,
    }
    text = "\n".join([
        f"regime: {result.regime}",
        "canonical:",
        str(result.canonical.matrix),
        "witness:",
        str(result.witness),
    ])
    _emit(args, text, payload)
    return 0


def cmd_assemble(args):
    spec = _field(args)
    var = _var(args)
    source = _module(spec, args.phi, var)
    target = _module(spec, args.psi, var)
    delta = _delta(spec, source, target, args.delta, var)
    built = assemble(delta)
    payload = {
        "middle": built.middle.t_matrix.to_json(),
        "inclusion": built.inclusion.to_json(),
        "projection": built.projection.to_json(),
    }
    text = "\n".join([
        "middle:",
        str(built.middle.t_matrix),
        "inclusion:",
        str(built.inclusion),
        "projection:",
        str(built.projection),
    ])
    _emit(args, text, payload)
    return 0


def cmd_baer(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    d1 = _delta(spec, source, target, args.delta)
    d2 = _delta(spec, source, target, args.delta2)
    result = baer_sum(d1, d2)
    _emit(args, str(result.matrix),
          {"canonical": result.matrix.to_json()})
    return 0


def cmd_act(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    delta = _delta(spec, source, target, args.delta)
    apoly = parse_apoly(spec, args.a)
    result = t_action(apoly, delta)
    _emit(args, str(result.matrix),
          {"canonical": result.matrix.to_json()})
    return 0


def _maybe_canonical(delta):
    try:
        return reduce_canonical(delta)
    except UnsupportedRegime:
        return None


def cmd_pullback(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    delta = _delta(spec, source, target, args.delta)
    gmod = _module(spec, args.gmod)
    g = parse_matrix(spec, args.g)
    result = pullback(delta, g, gmod)
    reduced = _maybe_canonical(result)
    payload = {"delta": result.matrix.to_json(),
               "canonical": reduced.canonical.matrix.to_json()
               if reduced else None}
    text = str(result.matrix) if reduced is None else "\n".join([
        "delta:", str(result.matrix),
        "canonical:", str(reduced.canonical.matrix)])
    _emit(args, text, payload)
    return 0


def cmd_pushout(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    delta = _delta(spec, source, target, args.delta)
    fmod = _module(spec, args.fmod)
    f = parse_matrix(spec, args.f)
    result = pushout(delta, f, fmod)
    reduced = _maybe_canonical(result)
    payload = {"delta": result.matrix.to_json(),
               "canonical": reduced.canonical.matrix.to_json()
               if reduced else None}
    text = str(result.matrix) if reduced is None else "\n".join([
        "delta:", str(result.matrix),
        "canonical:", str(reduced.canonical.matrix)])
    _emit(args, text, payload)
    return 0


def cmd_split(args):
    spec = _field(args)
    var = _var(args)
    source = _module(spec, args.phi, var)
    target = _module(spec, args.psi, var)
    delta = _delta(spec, source, target, args.delta, var)
    result = is_split(delta, bound=args.bound)
    if result.kind == "split":
        payload = {"result": "split", "witness": result.witness.to_json()}
        text = "split\nwitness:\n" + str(result.witness)
    elif result.kind == "not-split":
        payload = {"result": "not-split",
                   "canonical": result.canonical.matrix.to_json()
                   if result.canonical is not None else None,
                   "reason": result.reason}
        text = "not split"
        if result.canonical is not None:
            text += "\ncanonical:\n" + str(result.canonical.matrix)
        if result.reason:
            text += "\nreason: " + result.reason
    else:
        payload = {"result": "inconclusive", "bound": result.bound}
        text = f"inconclusive (searched degree bound {result.bound})"
    _emit(args, text, payload)
    return 0


def cmd_hom(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    space = hom_space(source, target, bound=args.bound)
    payload = {"basis": [f.to_json() for f in space.basis],
               "complete": space.complete,
               "bound": space.bound}
    lines = [f"complete: {'yes' if space.complete else 'no'}",
             f"bound: {space.bound}",
             f"fp_dimension: {space.fp_dimension}"]
    for f in space.basis:
        lines.append(str(f))
    _emit(args, "\n".join(lines), payload)
    return 0


def cmd_sixterm(args):
    spec = _field(args)
    source = _module(spec, args.phi)
    target = _module(spec, args.psi)
    delta = _delta(spec, source, target, args.delta)
    partner = _module(spec, args.g)
    bundle = six_term(delta, partner)
    structure = bundle.omega_structure()
    block = bundle.delta_block()
    payload = {
        "field": spec.header(),
        "middle": bundle.middle.t_matrix.to_json(),
        "regime": structure.regime,
        "basis": [list(slot) for slot in structure.basis],
        "omega_t": structure.pi.to_json(),
        "delta_t": block.to_json(),
    }
    text = "\n".join([
        f"field: {spec.header()}",
        "middle:",
        str(bundle.middle.t_matrix),
        "basis: " + " ".join(_slot_text(s) for s in structure.basis),
        "Omega_t:",
        str(structure.pi),
        "Delta_t:",
        str(block),
    ])
    _emit(args, text, payload)
    return 0


def cmd_verify(args):
    spec = _field(args)
    what = args.what
    if what == "structure":
        source = _module(spec, args.phi)
        target = _module(spec, args.psi)
        structure = ext_structure(source, target)
        report = verify_structure(structure, samples=args.samples,
                                  seed=args.seed, mode=args.mode)
    elif what == "duality":
        if args.mode == "enumerate":
            raise UsageError("--mode enumerate is not available for duality")
        source = _module(spec, args.phi)
        target = _module(spec, args.psi)
        report = verify_duality(source, target, classes=args.samples,
                                seed=args.seed)
    elif what == "ga":
        source = _module(spec, args.phi)
        target = _module(spec, args.psi)
        seq = ga_sequence(ext_structure(source, target))
        report = verify_ga(seq, seed=args.seed)
    elif what == "sixterm":
        source = _module(spec, args.phi)
        target = _module(spec, args.psi)
        delta = _delta(spec, source, target, args.delta)
        partner = _module(spec, args.g)
        report = verify_sixterm(six_term(delta, partner), seed=args.seed)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown verification target {what!r}")
    lines = [("pass" if c.passed else "FAIL") + f" {c.name}: {c.detail}"
             for c in report.checks]
    lines.append("ok" if report.ok else "FAILED")
    _emit(args, "\n".join(lines), report.to_json())
    return 0 if report.ok else 3


def _build_parser():
    parser = _ArgumentParser(
        prog="tmodext",
        description="Exact Ext-group computations for Drinfeld modules and "
                    "Anderson t-modules over twisted polynomial rings.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_text, *, phi=False, psi=False, delta=False,
            delta2=False, var=False, e=False, a=False, bound=False,
            g=False, gmod=False, f=False, fmod=False, partner=False,
            verify=False):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--field", required=True,
                       help="coefficient field header, e.g. GF(3)(th)")
        p.add_argument("--json", action="store_true",
                       help="emit JSON instead of text")
        p.add_argument("--out", metavar="FILE",
                       help="write the output to FILE and print nothing")
        if phi:
            p.add_argument("--phi", required=True,
                           help="source module expression")
        if psi:
            p.add_argument("--psi", required=True,
                           help="target module expression")
        if delta:
            p.add_argument("--delta", required=True,
                           help="biderivation matrix expression")
        if delta2:
            p.add_argument("--delta2", required=True,
                           help="second biderivation matrix expression")
        if var:
            p.add_argument("--var", choices=("tau", "sigma"), default="tau",
                           help="twisted variable for all expressions")
        if e:
            p.add_argument("--e", type=int, required=True,
                           help="tensor-power exponent")
        if a:
            p.add_argument("--a", required=True,
                           help="polynomial in t, e.g. 't^2 + 1'")
        if bound:
            p.add_argument("--bound", type=int, default=None,
                           help="degree bound for bounded searches")
        if g:
            p.add_argument("--g", required=True,
                           help="morphism matrix expression")
        if gmod:
            p.add_argument("--gmod", required=True,
                           help="module the morphism starts from")
        if f:
            p.add_argument("--f", required=True,
                           help="morphism matrix expression")
        if fmod:
            p.add_argument("--fmod", required=True,
                           help="module the morphism lands in")
        if partner:
            p.add_argument("--g", required=True,
                           help="partner module for the Hom/Ext sequences")
        if verify:
            p.add_argument("--what",
                           choices=("structure", "duality", "ga", "sixterm"),
                           default="structure",
                           help="which claim to verify")
            p.add_argument("--phi", required=True,
                           help="source module expression")
            p.add_argument("--psi", required=True,
                           help="target module expression")
            p.add_argument("--delta", help="biderivation (sixterm only)")
            p.add_argument("--g", help="partner module (sixterm only)")
            p.add_argument("--samples", type=int, default=100,
                           help="number of random samples")
            p.add_argument("--seed", type=int, default=0,
                           help="random seed")
            p.add_argument("--mode", choices=("sample", "enumerate"),
                           default="sample",
                           help="sample random classes or enumerate all")
        p.set_defaults(func=func)
        return p

    add("ext", cmd_ext,
        "t-module structure on Ext(phi, psi)", phi=True, psi=True)
    add("ext0", cmd_ext0,
        "structure on the zero-constant-term subgroup of Ext(phi, psi)",
        phi=True, psi=True)
    add("ext-seq", cmd_ext_seq,
        "the sequence 0 -> Ext0 -> Ext -> (scalar part)^s -> 0",
        phi=True, psi=True)
    add("ext-prod", cmd_ext_prod,
        "structure on Ext of direct sums (semicolon-separated factors)",
        phi=True, psi=True)
    add("ext-tmod", cmd_ext_tmod,
        "structure on Ext(Phi, psi) for a higher-dimensional source Phi",
        phi=True, psi=True)
    add("ext-carlitz", cmd_ext_carlitz,
        "structure on Ext(phi, C^(e)) for the e-th Carlitz tensor power",
        phi=True, e=True)
    add("ext-dual", cmd_ext_dual,
        "adjoint-side structure on Ext(phi, psi) for a reversed pair",
        phi=True, psi=True)
    add("adjoint", cmd_adjoint,
        "adjoint of a module (--phi) or matrix (--delta)", var=True)
    p_adj = sub.choices["adjoint"]
    p_adj.add_argument("--phi", help="module expression")
    p_adj.add_argument("--delta", help="matrix expression")
    add("reduce", cmd_reduce,
        "canonical form and witness of a biderivation",
        phi=True, psi=True, delta=True, var=True)
    add("assemble", cmd_assemble,
        "middle term, inclusion, and projection of the extension",
        phi=True, psi=True, delta=True, var=True)
    add("baer", cmd_baer,
        "canonical form of the Baer sum of two classes",
        phi=True, psi=True, delta=True, delta2=True)
    add("act", cmd_act,
        "canonical form of a(t) acting on a class",
        phi=True, psi=True, delta=True, a=True)
    add("pullback", cmd_pullback,
        "pull a class back along a morphism g: gmod -> phi",
        phi=True, psi=True, delta=True, g=True, gmod=True)
    add("pushout", cmd_pushout,
        "push a class out along a morphism f: psi -> fmod",
        phi=True, psi=True, delta=True, f=True, fmod=True)
    add("split", cmd_split,
        "decide or search whether a class splits",
        phi=True, psi=True, delta=True, var=True, bound=True)
    add("hom", cmd_hom,
        "bounded basis of the morphism space Hom(phi, psi)",
        phi=True, psi=True, bound=True)
    add("sixterm", cmd_sixterm,
        "six-term data of an extension against a partner module",
        phi=True, psi=True, delta=True, partner=True)
    add("verify", cmd_verify,
        "re-check a computed result with the brute-force oracle",
        verify=True)
    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help exits with code 0
            return int(exc.code or 0)
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TmodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
