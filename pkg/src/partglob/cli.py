"""Command-line front end. Every command prints one JSON document.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Callable

import numpy as np

from .actions import validate_partial_action
from .algebras import AlgebraPartialAction, build_algebra_AU, check_condition_31, check_globalizability_32
from .amalgams import (
    amalgam_from_partial_action,
    bounded_embeddability_check,
    neumann_conditions,
    replay_violation,
    violation_to_json,
)
from .globalization import build_universal_globalization, verify_globalization
from .instance import InputError, InstanceFile, parse_input
from .relational import lift_relational_system, validate_relational_action
from .semigroups import (
    IdealPartialAction,
    NotUnital,
    build_unital_globalization,
    check_criterion,
    check_ideal_domains,
    check_sufficient_conditions,
    check_weak_confluence,
    find_collapse_witness,
    format_word,
    normalize_word,
    parse_word,
    verify_criterion_witness,
    verify_trace,
)
from .structures import UNDEF, StructureError, ValidationReport

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class CommandInputError(Exception):
    """Input that parses but is outside a command's preconditions."""

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.detail = detail or {}


def _violation_json(inst: InstanceFile, rep: ValidationReport) -> list[dict]:
    g, nm = inst.group.names, inst.names

    def show(v):
        return "-" if v == UNDEF else nm[v]

    out = []
    for v in rep.violations:
        w = v.witness
        if v.axiom == "unit":
            wj = {"a": nm[w[0]]}
        elif v.axiom == "inverse":
            wj = {"x": g[w[0]], "a": nm[w[1]]}
        elif v.axiom == "composition":
            wj = {"x": g[w[0]], "y": g[w[1]], "a": nm[w[2]]}
        elif v.axiom == "operation-compatibility":
            k, x, args, lhs, rhs = w
            wj = {"op": k, "x": g[x], "args": [nm[a] for a in args], "f(x args)": show(lhs), "x f(args)": show(rhs)}
        elif v.axiom == "relation-invariance":
            k, x, tup = w
            wj = {"relation": k, "x": g[x], "tuple": [nm[a] for a in tup]}
        else:
            wj = {"raw": [str(p) for p in w]}
        out.append({"axiom": v.axiom, "witness": wj})
    return out


def _validated(inst: InstanceFile) -> None:
    rep = validate_partial_action(inst.action)
    if not rep.ok:
        raise CommandInputError("invalid partial action", {"errors": rep.errors, "violations": _violation_json(inst, rep)})


def _ipa(inst: InstanceFile) -> IdealPartialAction:
    if inst.kind != "semigroup":
        raise CommandInputError("this command needs a semigroup instance")
    _validated(inst)
    ipa = IdealPartialAction(inst.action, inst.structure, validate=False)
    rep = check_condition_31(ipa.apa, cross_check=False)
    if not rep.ok:
        raise CommandInputError("theta_x is not an isomorphism between domains", {"violations": _violation_json(inst, rep)})
    rep = check_ideal_domains(ipa)
    if not rep.ok:
        x, side, s, d, p = rep.violations[0].witness
        nm = inst.names
        raise CommandInputError(
            "domains are not ideals",
            {"witness": {"x": inst.group.names[x], "side": side, "s": nm[s], "d": nm[d], "product": nm[p]}},
        )
    return ipa


def _apa(inst: InstanceFile) -> AlgebraPartialAction:
    if inst.kind == "set":
        raise CommandInputError("this command needs a semigroup or algebra instance")
    _validated(inst)
    alg = inst.structure.as_algebra() if inst.kind == "semigroup" else inst.structure
    return AlgebraPartialAction(inst.action, alg)


# --- commands ------------------------------------------------------------------


def cmd_validate(inst: InstanceFile, args) -> tuple[int, dict]:
    rep = validate_partial_action(inst.action)
    out = {"valid": rep.ok, "errors": rep.errors, "violations": _violation_json(inst, rep)}
    if rep.ok and inst.kind != "set":
        r31 = check_condition_31(_apa(inst), cross_check=True)
        out["violations"] = _violation_json(inst, r31)
        out["valid"] = r31.ok
    if out["valid"] and inst.relations is not None:
        rr = validate_relational_action(inst.action, inst.relations)
        out["violations"] = _violation_json(inst, rr)
        out["errors"] = rr.errors
        out["valid"] = rr.ok
    out["domains"] = {
        inst.group.names[x]: [inst.names[a] for a in d] for x, d in enumerate(inst.action.domains())
    }
    return (EXIT_OK if out["valid"] else EXIT_NEGATIVE), out


def cmd_globalize_set(inst: InstanceFile, args) -> tuple[int, dict]:
    _validated(inst)
    ug = build_universal_globalization(inst.action)
    out = {"num_classes": ug.size, **ug.to_json()}
    if args.verify_witness:
        ok, problems = verify_globalization(ug.embedding, inst.action, ug.as_action())
        out["verified"] = ok
        if not ok:
            out["problems"] = problems
    if inst.relations is not None:
        rr = validate_relational_action(inst.action, inst.relations)
        if not rr.ok:
            raise CommandInputError("relations are not invariant", {"violations": _violation_json(inst, rr)})
        lifted = lift_relational_system(inst.action, inst.relations, ug)
        names = ug.names()
        out["lifted_relations"] = [
            {"arity": r.arity, "tuples": [[names[c] for c in t] for t in r.tuples]} for r in lifted.system.relations
        ]
    return EXIT_OK, out


def cmd_check_algebra(inst: InstanceFile, args) -> tuple[int, dict]:
    apa = _apa(inst)
    rep = check_condition_31(apa)
    if not rep.ok:
        raise CommandInputError("theta_x is not an isomorphism between domains", {"violations": _violation_json(inst, rep)})
    verdict = check_globalizability_32(apa, cross_check=True)
    out = verdict.to_json(apa)
    if verdict.globalizable:
        glob = build_algebra_AU(apa)
        names = glob.ug.names()

        def render(t):
            if t.ndim == 0:
                return "-" if t == UNDEF else names[int(t)]
            return [render(s) for s in t]

        out["classes"] = names
        out["operations"] = [{"arity": n, "table": render(t)} for n, t in zip(glob.algebra.signature, glob.algebra.ops)]
    elif args.verify_witness:
        k, x, a, lhs, rhs = verdict.witness
        alg = apa.alg
        moved = [apa.pa.act(x, v) for v in a]
        out["verified"] = bool(
            UNDEF not in moved
            and alg.apply(k, a) != UNDEF
            and alg.apply(k, moved) == lhs
            and apa.pa.act(x, alg.apply(k, a)) == rhs
            and lhs != rhs
        )
    return (EXIT_OK if verdict.globalizable else EXIT_NEGATIVE), out


def cmd_check_semigroup(inst: InstanceFile, args) -> tuple[int, dict]:
    ipa = _ipa(inst)
    crit = check_criterion(ipa, all_violations=True, jobs=args.jobs)
    conds = check_sufficient_conditions(ipa)
    conf = check_weak_confluence(ipa, cross_check=False)
    out = {
        "globalizable": crit.holds,
        "witness": crit.witness.to_json(ipa) if crit.witness else None,
        "violations": len(crit.violations),
        "weak_confluence": conf.to_json(ipa),
        "sufficient_conditions": conds.to_json(ipa),
    }
    if args.all_violations:
        out["all_violations"] = [w.to_json(ipa) for w in crit.violations]
    if args.verify_witness and crit.witness is not None:
        out["verified"] = verify_criterion_witness(ipa, crit.witness)
    return (EXIT_OK if crit.holds else EXIT_NEGATIVE), out


def cmd_normalize(inst: InstanceFile, args) -> tuple[int, dict]:
    ipa = _ipa(inst)
    if not args.word:
        raise CommandInputError("--word is required")
    try:
        word = parse_word(ipa, args.word)
    except ValueError as e:
        raise CommandInputError(str(e)) from None
    nf, trace = normalize_word(ipa, word)
    out = {"word": format_word(ipa, word), "normal_form": format_word(ipa, nf), "trace": trace.to_json(ipa)}
    if args.verify_witness:
        out["verified"] = verify_trace(ipa, trace)
    return EXIT_OK, out


def cmd_find_witness(inst: InstanceFile, args) -> tuple[int, dict]:
    ipa = _ipa(inst)
    if args.max_len < 1:
        raise CommandInputError("--max-len must be at least 1")
    w = find_collapse_witness(ipa, args.max_len)
    out: dict = {"max_len": args.max_len}
    if w is None:
        out["witness"] = None
        out["note"] = "no collapse within the bound; this is not a proof of globalizability"
        return EXIT_OK, out
    out["witness"] = w.to_json(ipa)
    if args.verify_witness:
        out["verified"] = verify_trace(ipa, w.trace) and w.trace.start == (w.letters[0],) and w.trace.end == (
            w.letters[1],
        )
    return EXIT_NEGATIVE, out


def cmd_unital_globalize(inst: InstanceFile, args) -> tuple[int, dict]:
    ipa = _ipa(inst)
    try:
        ug = build_unital_globalization(ipa)
    except NotUnital as e:
        conds = check_sufficient_conditions(ipa)
        return EXIT_NEGATIVE, {"unital": False, "reason": str(e), "sufficient_conditions": conds.to_json(ipa)}
    out = {"unital": True, **ug.to_json()}
    if args.verify_witness:
        ok, _ = verify_globalization(ug.embedding, ipa.pa, ipa.ug.as_action())
        out["verified"] = ok and ug.semigroup.validate().ok
    return EXIT_OK, out


def cmd_amalgam(inst: InstanceFile, args) -> tuple[int, dict]:
    if args.max_len < 1:
        raise CommandInputError("--max-len must be at least 1")
    if inst.kind == "semigroup":
        src = _ipa(inst)
    else:
        src = _apa(inst)
    try:
        am = amalgam_from_partial_action(src)
    except StructureError as e:
        raise CommandInputError(str(e)) from None
    nrep = neumann_conditions(am)
    out = am.to_json()
    out["neumann_conditions"] = {"label": "extension to non-group amalgams", "pass": nrep.ok}
    if not am.is_semigroup_kind:
        out["violation"] = None
        out["note"] = "bounded closure is only available for semigroup amalgams"
        return EXIT_OK, out
    rep = bounded_embeddability_check(am, args.max_len)
    out["max_len"] = args.max_len
    if rep.violation is None:
        out["violation"] = None
        out["note"] = "no violation within the bound; embeddability is not certified"
        return EXIT_OK, out
    out["violation"] = violation_to_json(am, rep.violation)
    if args.verify_witness:
        out["verified"] = replay_violation(am, rep.violation)
    return EXIT_NEGATIVE, out


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "globalize-set": cmd_globalize_set,
    "check-algebra": cmd_check_algebra,
    "check-semigroup": cmd_check_semigroup,
    "normalize": cmd_normalize,
    "find-witness": cmd_find_witness,
    "unital-globalize": cmd_unital_globalize,
    "amalgam": cmd_amalgam,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partglob", description="Partial group actions and their globalizations.")
    sub = p.add_subparsers(dest="command", metavar="command")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("file", help="instance JSON, or - for stdin")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--verify-witness", action="store_true")
        if name in ("find-witness", "amalgam"):
            sp.add_argument("--max-len", type=int, default=4)
        if name == "normalize":
            sp.add_argument("--word", required=True)
        if name == "check-semigroup":
            sp.add_argument("--all-violations", action="store_true")
    return p


def emit(doc: dict, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INPUT
    # nothing here is randomized today; seeding keeps any future sampling reproducible
    random.seed(args.seed)
    np.random.seed(args.seed)
    try:
        inst = parse_input(args.file)
    except InputError as e:
        emit({"command": args.command, "status": "input-error", "errors": [p.to_json() for p in e.problems]})
        return EXIT_INPUT
    try:
        code, body = COMMANDS[args.command](inst, args)
    except CommandInputError as e:
        emit({"command": args.command, "status": "input-error", "errors": [{"pointer": "", "message": str(e)}], **e.detail})
        return EXIT_INPUT
    doc = {"command": args.command, "status": "ok" if code == EXIT_OK else "negative"}
    if inst.warnings:
        doc["warnings"] = inst.warnings
    doc.update(body)
    emit(doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
