"""Command-line interface: ``relik <command> ...``.

Exit codes: 0 for SAT / true / success, 1 for UNSAT / false, 2 for errors
and resource limits.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import conditionals, oracle, prover
from .errors import AgreementFailure, RelikError
from .formulas import CONDITIONAL, LIKELIHOOD, kind, modal_leaves, parse_formula, parse_l, to_text
from .lifting import RELATIONS, dominates
from .preorders import Preorder, is_modular, is_total, sorted_worlds
from .realization import Realization, agreement, realize_partial, realize_total
from .relations import audit, parse_relation_file
from .semantics import PreferentialStructure, format_structure, parse_structure, sat, truth_set

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2
COMMANDS = ("check-sat", "model-check", "eval-order", "props", "realize", "translate")


class UsageError(RelikError):
    pass


def _read_formula(arg: str) -> str:
    if arg.startswith("@"):
        return Path(arg[1:]).read_text().strip()
    return arg


def _read_structure(path: str) -> PreferentialStructure:
    return parse_structure(Path(path).read_text())


def _world_set(text: str, M: PreferentialStructure) -> frozenset:
    body = text.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    names = [t.strip() for t in body.split(",") if t.strip()]
    by_name = {str(w): w for w in M.worlds}
    unknown = [n for n in names if n not in by_name]
    if unknown:
        raise UsageError(f"unknown world(s) {unknown}")
    return frozenset(by_name[n] for n in names)


def _parse_cap(spec: str):
    # "p=0,q=1:1" -> (frozenset({"q"}), 1)
    lhs, sep, n = spec.rpartition(":")
    if not sep or not n.isdigit():
        raise UsageError(f"cap must look like 'p=0,q=1:N', got {spec!r}")
    true_props = set()
    for item in filter(None, (t.strip() for t in lhs.split(","))):
        name, eq, bit = item.partition("=")
        if not eq or bit not in ("0", "1"):
            raise UsageError(f"bad assignment item {item!r} in cap")
        if bit == "1":
            true_props.add(name.strip())
    return frozenset(true_props), int(n)


# -- commands ------------------------------------------------------------------------

def cmd_check_sat(args):
    f = parse_l(_read_formula(args.formula))
    if args.brute_force:
        caps = dict(_parse_cap(c) for c in args.cap) or None
        res = oracle.brute_force_sat(
            f, max_copies=args.max_copies, max_worlds=args.max_worlds, caps=caps, total_only=args.total
        )
        mode = "brute-force-total" if args.total else "brute-force"
    elif args.total:
        res = prover.check_satisfiable_total(f, max_props=args.max_props)
        mode = "total"
    else:
        res = prover.check_satisfiable(f, max_props=args.max_props, max_branches=args.max_branches)
        mode = "partial"
    model_text = None
    if res.model is not None:
        model_text = format_structure(res.model)
        if args.model_out:
            Path(args.model_out).write_text(model_text)
    report = {
        "command": "check-sat",
        "formula": to_text(f),
        "mode": mode,
        "verdict": res.verdict.value,
        "model": model_text,
        "model_verified": None if res.model is None else sat(res.model, f),
        "certificate": res.certificate,
    }
    lines = [res.verdict.value]
    if model_text:
        lines.append(model_text.rstrip("\n"))
    if res.verdict is prover.Verdict.RESOURCE_LIMIT:
        lines.append(f"reason: {res.certificate.get('reason')}")
    code = {prover.Verdict.SAT: EXIT_TRUE, prover.Verdict.UNSAT: EXIT_FALSE}.get(res.verdict, EXIT_ERROR)
    return report, "\n".join(lines), code


def cmd_model_check(args):
    M = _read_structure(args.structure)
    f = parse_formula(_read_formula(args.formula))
    k = kind(f)
    if args.arrow and k != CONDITIONAL:
        raise UsageError("--arrow expects a formula built from '=>' atoms")
    if k == LIKELIHOOD:
        result = sat(M, f)
        semantics = "likelihood"
    elif k == CONDITIONAL:
        result = conditionals.sat_cond(M, f, use_best=args.best)
        semantics = "arrow-best" if args.best else "arrow"
    else:
        raise UsageError("a bare propositional formula has no truth value in a structure")
    names = lambda ws: [str(w) for w in sorted_worlds(ws)]
    leaves = []
    for leaf in modal_leaves(f):
        if k == LIKELIHOOD:
            a, b = leaf.lhs, leaf.rhs
            value = sat(M, leaf)
        else:
            a, b = leaf.antecedent, leaf.consequent
            value = conditionals.sat_cond(M, leaf, use_best=args.best)
        entry = {"formula": to_text(leaf), "value": value, "left_worlds": names(truth_set(M, a)), "right_worlds": names(truth_set(M, b))}
        if k == CONDITIONAL:
            entry["best_antecedent"] = names(conditionals.best(M.order.strict, truth_set(M, a)))
        leaves.append(entry)
    report = {"command": "model-check", "formula": to_text(f), "semantics": semantics, "result": result, "leaves": leaves}
    return report, "true" if result else "false", EXIT_TRUE if result else EXIT_FALSE


def cmd_eval_order(args):
    M = _read_structure(args.structure)
    U, V = _world_set(args.U, M), _world_set(args.V, M)
    if args.rel == "dominates":
        if len(U) != 1:
            raise UsageError("--rel dominates takes a single world as U")
        result = dominates(M.order, next(iter(U)), V)
    else:
        result = bool(RELATIONS[args.rel](M.order, U, V))
    strict = M.order.strict
    pairs = sorted([str(u), str(v)] for u, v in strict.rel)
    report = {
        "command": "eval-order",
        "relation": args.rel,
        "U": [str(w) for w in sorted_worlds(U)],
        "V": [str(w) for w in sorted_worlds(V)],
        "result": result,
        "order": {"strict_pairs": pairs, "total": is_total(M.order), "modular": is_modular(strict)},
    }
    return report, "true" if result else "false", EXIT_TRUE if result else EXIT_FALSE


def cmd_props(args):
    r = parse_relation_file(Path(args.relation).read_text())
    rep = audit(r)
    report = {
        "command": "props",
        "family_size": r.algebra.size,
        "pairs": len(r),
        "properties": rep.as_dict(),
    }
    lines = []
    for name, entry in report["properties"].items():
        line = f"{name}: {'true' if entry['holds'] else 'false'}"
        if "witness" in entry:
            line += "  witness " + " ".join("{" + ",".join(map(str, s)) + "}" for s in entry["witness"])
        lines.append(line)
    return report, "\n".join(lines), EXIT_TRUE


def cmd_realize(args):
    r = parse_relation_file(Path(args.relation).read_text())
    if args.check:
        return _check_allocation(r, _read_structure(args.check), args.total)
    real = realize_total(r) if args.total else realize_partial(r, max_atoms=args.max_atoms)
    F = r.algebra
    props = [f"atom{i + 1}" for i in range(len(F.atoms))]
    valuation = {w: frozenset({props[i]}) for w, i in real.atom_of_world.items()}
    M = PreferentialStructure(tuple(props), real.preorder, valuation)
    atom_names = ["{" + ",".join(map(str, sorted_worlds(a))) + "}" for a in F.atoms]
    comments = [f"{p} = {a}" for p, a in zip(props, atom_names)]
    text = format_structure(M, comments)
    atoms_info = []
    for i, p in enumerate(props):
        atoms_info.append(
            {"prop": p, "members": [str(x) for x in sorted_worlds(F.atoms[i])], "worlds": real.worlds_in_atom(i)}
        )
    trees = None
    if real.tree_of_world is not None:
        trees = {w: t.render(atom_names) for w, t in real.tree_of_world.items()}
    report = {
        "command": "realize",
        "mode": "total" if args.total else "partial",
        "worlds": len(real.atom_of_world),
        "atoms": atoms_info,
        "agreement": True,
        "trees": trees,
        "structure": text,
    }
    return report, text.rstrip("\n"), EXIT_TRUE


def _check_allocation(r, M, total):
    """Agreement of a given structure with the relation; its worlds must be the ground elements."""
    F = r.algebra
    by_name = {str(x): x for x in F.ground}
    names = sorted(str(w) for w in M.worlds)
    if names != sorted(by_name):
        raise UsageError("structure worlds must be exactly the ground elements of the relation file")
    order = Preorder(F.ground, {(by_name[str(u)], by_name[str(v)]) for u, v in M.order.rel})
    atom_of = {x: F.atom_index(x) for x in F.ground}
    real = Realization(F, order, atom_of, "total" if total else "partial")
    ok, witness = agreement(r, real)
    report = {
        "command": "realize",
        "mode": "check-total" if total else "check-partial",
        "worlds": len(atom_of),
        "agreement": ok,
        "witness": None if ok else [[str(x) for x in sorted_worlds(s)] for s in witness],
    }
    text = "agreement: true" if ok else "agreement: false  witness " + " ".join(
        "{" + ",".join(ws) + "}" for ws in report["witness"]
    )
    return report, text, EXIT_TRUE if ok else EXIT_FALSE


def cmd_translate(args):
    f = parse_formula(_read_formula(args.formula))
    if args.to == "arrow":
        out = conditionals.to_arrow(f, args.variant)
    else:
        out = conditionals.to_likelihood(f)
    report = {"command": "translate", "input": to_text(f), "to": args.to, "variant": args.variant if args.to == "arrow" else None, "output": to_text(out)}
    return report, to_text(out), EXIT_TRUE


def load_schema(name: str) -> dict:
    """JSON schema for a command's ``--json`` report, or ``"error"``."""
    return json.loads(resources.files("relik").joinpath("schemas", f"{name}.schema.json").read_text())


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a machine-readable JSON report")

    p = argparse.ArgumentParser(prog="relik", description="Relative likelihood over preorders: lifting, realization, satisfiability.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check-sat", parents=[common], help="decide satisfiability of a likelihood formula")
    s.add_argument("formula", help="formula text, or @FILE to read it from a file")
    s.add_argument("--total", action="store_true", help="restrict to totally preordered structures")
    s.add_argument("--brute-force", action="store_true", help="use the exhaustive small-structure oracle")
    s.add_argument("--max-copies", type=int, default=2, help="oracle: worlds per truth assignment (default 2)")
    s.add_argument("--max-worlds", type=int, default=oracle.DEFAULT_MAX_WORLDS, help="oracle: total worlds (default 6)")
    s.add_argument("--cap", action="append", default=[], metavar="ASSIGNMENT:N",
                   help="oracle: at most N worlds with this assignment, e.g. 'p=0,q=1:1' (repeatable)")
    s.add_argument("--max-props", type=int, default=prover.DEFAULT_MAX_PROPS)
    s.add_argument("--max-branches", type=int, default=prover.DEFAULT_MAX_BRANCHES)
    s.add_argument("--model-out", metavar="PATH", help="also write the witness structure here")
    s.set_defaults(func=cmd_check_sat)

    s = sub.add_parser("model-check", parents=[common], help="evaluate a formula in a structure file")
    s.add_argument("structure")
    s.add_argument("formula", help="formula text, or @FILE")
    s.add_argument("--arrow", action="store_true", help="the formula is built from '=>' atoms")
    s.add_argument("--best", action="store_true", help="evaluate '=>' through best worlds instead of domination")
    s.set_defaults(func=cmd_model_check)

    s = sub.add_parser("eval-order", parents=[common], help="compare two world sets under a lifted order")
    s.add_argument("structure")
    s.add_argument("--rel", required=True, choices=sorted(RELATIONS) + ["dominates"])
    s.add_argument("U", help="comma-separated worlds, e.g. w1,w2 (use {} for the empty set)")
    s.add_argument("V")
    s.set_defaults(func=cmd_eval_order)

    s = sub.add_parser("props", parents=[common], help="audit a relation file")
    s.add_argument("relation")
    s.set_defaults(func=cmd_props)

    s = sub.add_parser("realize", parents=[common], help="build a structure whose lifted order matches a relation file")
    s.add_argument("relation")
    s.add_argument("--total", action="store_true", help="the relation is a total preorder; use the weak lifting")
    s.add_argument("--max-atoms", type=int, default=5)
    s.add_argument("--check", metavar="STRUCTURE",
                   help="instead of building, test a structure whose worlds are the ground elements")
    s.set_defaults(func=cmd_realize)

    s = sub.add_parser("translate", parents=[common], help="convert between '>>' and '=>' presentations")
    s.add_argument("--to", required=True, choices=("arrow", "gg"))
    s.add_argument("--variant", default="prime", choices=conditionals.VARIANTS)
    s.add_argument("formula", help="formula text, or @FILE")
    s.set_defaults(func=cmd_translate)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        report, text, code = args.func(args)
    except (RelikError, ValueError, OSError) as e:
        kind_ = type(e).__name__
        if args.json:
            err = {"command": args.command, "error": {"type": kind_, "message": str(e)}}
            if isinstance(e, AgreementFailure) and e.witness is not None:
                err["error"]["witness"] = [[str(x) for x in sorted_worlds(s)] for s in e.witness]
            print(json.dumps(err, indent=2, sort_keys=True), file=stdout)
        print(f"error: {kind_}: {e}", file=stderr)
        return EXIT_ERROR
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
