"""Command-line interface.

    equivloc classes   DOC [--xi 1,2,1] [--source NAME] [--sign kirwan] [--torus]
    equivloc relations DOC [--blocks H1,H2]
    equivloc check     DOC [TUPLE_FILE | --tuple NAME]
    equivloc verify    DOC [--degree-cap 6]
    equivloc betti     DOC [--degree-cap 8]
    equivloc integrate DOC [TUPLE_FILE | --tuple NAME] [--against BASE]

DOC is a path to a schema-1 JSON document or the name of a bundled corpus
document.  Exit status: 0 success, 1 membership or verification failure,
2 invalid input.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import corpus
from .classgen import FORMULA, KIRWAN, require_valid
from .errors import EquivlocError
from .exactmath import MultiPolynomial
from .io import TORUS, dumps, load_document, load_tuple_file, render_table, table_to_dict
from .localize import CohomologyTuple, abbv_integrate, circle_eulers, membership_test, verify_relation_counts
from .model import betti_numbers, check_duality, equivariant_poincare_series, indices
from .oracle import gkm_edge_relations
from .pipeline import (
    assembled_system,
    circle_table,
    has_classes,
    is_gkm,
    localization_system,
    resolve_circle,
    torus_table,
    verify_document,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


class Outcome:
    def __init__(self, outputs, text, code=EXIT_OK):
        self.outputs = outputs
        self.text = text
        self.code = code


def _xi(text):
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--xi expects comma-separated integers, got {text!r}") from None


def _open(ref):
    p = Path(ref)
    if not p.exists() and ref in corpus.NAMES:
        p = corpus.path(ref)
    if not p.exists():
        raise EquivlocError(f"no such document: {ref}")
    return load_document(p)


def _tuple(args, doc):
    if getattr(args, "tuple_file", None):
        return load_tuple_file(args.tuple_file, doc)
    if getattr(args, "tuple", None):
        return doc.tuple_named(args.tuple)
    return None


# -- commands -------------------------------------------------------------------


def cmd_classes(args, doc):
    circle = resolve_circle(doc, args.xi)
    if args.torus:
        table = torus_table(doc, circle, args.source, args.sign)
        if table is None:
            raise EquivlocError("no torus-graded classes available for this document")
        require_valid(table, doc.model, circle)
        return Outcome({"table": table_to_dict(table)}, render_table(table))
    table = circle_table(doc, circle, args.source, args.sign)
    require_valid(table, doc.model, circle)
    eulers = circle_eulers(doc.model, circle)
    return Outcome(
        {"table": table_to_dict(table), "euler": {p: e.to_term_list() for p, e in zip(doc.model.ids, eulers)}},
        render_table(table, eulers),
    )


def _system_output(system):
    return {"relations": [r.as_dict() for r in system.relations]}


def cmd_relations(args, doc):
    outputs = {}
    lines = []
    if has_classes(doc):
        circle = resolve_circle(doc, args.xi)
        system = localization_system(doc, circle, args.source, args.sign)
        counts = verify_relation_counts(system, betti_numbers(doc.model, circle))
        outputs["localization"] = _system_output(system)
        outputs["counts"] = counts.as_dict()
        lines += [f"{r.source:>4}: {r.render()}" for r in system.relations]
        lines.append("counts " + ("ok" if counts.ok else "FAILED") + ": " + ", ".join(
            f"degree {row.degree}: {row.rank}/{row.expected}" for row in counts.rows))
    if doc.subtori:
        names = args.blocks.split(",") if args.blocks else None
        system = assembled_system(doc, names)
        outputs["assembled"] = _system_output(system)
        outputs["assembled"]["sources"] = [r.source for r in system.relations]
        lines += [f"{r.source:>8}: {r.render()}" for r in system.relations]
    if not outputs:
        raise EquivlocError("document has no classes, polytope or subtorus blocks")
    return Outcome(outputs, "\n".join(lines))


def cmd_check(args, doc):
    f = _tuple(args, doc)
    if f is None:
        raise EquivlocError("check needs a tuple file or --tuple NAME")
    if f.variables == doc.model.variables and (doc.model.rank > 1 or not has_classes(doc)):
        if doc.subtori:
            system = assembled_system(doc)
        elif doc.model.edges is not None and is_gkm(doc.model):
            system = gkm_edge_relations(doc.model)
        else:
            raise EquivlocError("torus-graded tuples need subtorus blocks or a GKM one-skeleton")
        failed = system.failures(f)
        outputs = {"passed": not failed, "grading": TORUS, "failures": [r.as_dict() for r in failed]}
        text = "pass" if not failed else "fail\n" + "\n".join(f"  {r.source}: {r.render()}" for r in failed)
        return Outcome(outputs, text, EXIT_OK if not failed else EXIT_FAIL)
    circle = resolve_circle(doc, args.xi)
    table = circle_table(doc, circle, args.source, args.sign)
    result = membership_test(f, table, doc.model, circle)
    text = "pass" if result.passed else "fail\n" + "\n".join(
        f"  {x.base}: {x.relation.render()}  witness {x.witness}" for x in result.failures)
    return Outcome(result.as_dict(), text, EXIT_OK if result.passed else EXIT_FAIL)


def _render_checks(report, indent=""):
    lines = []
    for c in report["checks"]:
        mark = "ok" if c["ok"] else ("warn" if c["severity"] == "warning" else "FAIL")
        lines.append(f"{indent}{mark:>4}  {c['name']}")
        if c["name"].startswith("subtorus:"):
            lines += _render_checks(c["detail"], indent + "      ")
    return lines


def cmd_verify(args, doc):
    circle = resolve_circle(doc, args.xi)
    report = verify_document(doc, circle, args.degree_cap, args.source, args.sign)
    return Outcome(report, "\n".join(_render_checks(report)), EXIT_OK if report["ok"] else EXIT_FAIL)


def cmd_betti(args, doc):
    circle = resolve_circle(doc, args.xi)
    idx = indices(doc.model, circle)
    betti = betti_numbers(doc.model, circle)
    series = equivariant_poincare_series(doc.model, circle, args.degree_cap)
    check_duality(doc.model, circle)
    outputs = {"indices": idx, "betti": betti, "poincare_series": series}
    text = "\n".join([
        "index  " + "  ".join(f"{p}:{i}" for p, i in idx.items()),
        "betti  " + " ".join(map(str, betti)),
        "series " + " ".join(map(str, series)),
    ])
    return Outcome(outputs, text)


def cmd_integrate(args, doc):
    circle = resolve_circle(doc, args.xi)
    var = (circle.variable,)
    f = _tuple(args, doc)
    if f is None:
        f = CohomologyTuple(doc.model.ids, [MultiPolynomial.constant(var, 1)] * len(doc.model.ids), var)
    values = list(f.values)
    if args.against:
        table = circle_table(doc, circle, args.source, args.sign)
        if args.against not in table.ids:
            raise EquivlocError(f"no class for fixed point {args.against!r}")
        values = [a * b for a, b in zip(values, table.row(args.against))]
    total = abbv_integrate(values, circle_eulers(doc.model, circle))
    outputs = {"integral": total.to_json(), "text": str(total), "is_polynomial": total.is_polynomial}
    return Outcome(outputs, str(total))


COMMANDS = {
    "classes": cmd_classes,
    "relations": cmd_relations,
    "check": cmd_check,
    "verify": cmd_verify,
    "betti": cmd_betti,
    "integrate": cmd_integrate,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="equivloc", description="Exact localization relations from fixed-point data.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("document", help="JSON document or bundled corpus name")
        p.add_argument("--xi", type=_xi, help="circle direction, comma-separated integers")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--output", help="write the report to this file instead of stdout")
        p.add_argument("--source", help="class table name, or 'polytope' to construct classes")
        p.add_argument("--sign", choices=[FORMULA, KIRWAN], help="row sign convention for constructed classes")
        if name in ("check", "integrate"):
            p.add_argument("tuple_file", nargs="?", help="JSON file with a candidate tuple")
            p.add_argument("--tuple", help="name of a tuple stored in the document")
        if name in ("verify", "betti"):
            p.add_argument("--degree-cap", type=int, default=6 if name == "verify" else 8)
        if name == "classes":
            p.add_argument("--torus", action="store_true", help="show the torus-graded table")
        if name == "relations":
            p.add_argument("--blocks", help="comma-separated subtorus blocks to assemble")
        if name == "integrate":
            p.add_argument("--against", help="multiply by the class of this fixed point first")
    return parser


def run(argv=None):
    """Parse and execute; returns (exit code, stdout text, stderr text)."""
    args = build_parser().parse_args(argv)
    code, out, err = execute(args)
    if args.output and out:
        Path(args.output).write_text(out, encoding="utf-8")
        out = ""
    return code, out, err


def execute(args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            doc = _open(args.document)
            outcome = COMMANDS[args.command](args, doc)
        except (EquivlocError, ValueError, OSError) as exc:
            return EXIT_INVALID, "", f"error: {exc}\n"
    notes = [str(w.message) for w in caught]
    if args.json:
        circle = resolve_circle(doc, args.xi) if (args.xi or doc.circle) else None
        report = {
            "command": args.command,
            "input": doc.name,
            "input_sha256": doc.digest,
            "xi": list(circle.xi) if circle else None,
            "outputs": outcome.outputs,
            "warnings": notes,
        }
        return outcome.code, dumps(report), ""
    return outcome.code, outcome.text + "\n" + "".join(f"warning: {n}\n" for n in notes), ""


def main(argv=None):
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
