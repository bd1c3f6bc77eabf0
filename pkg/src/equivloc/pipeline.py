"""Glue between input documents and the computation modules.

Resolves which class table to use, builds relation systems (including the
assembled torus system from subtorus blocks), and runs the consistency
checks behind ``equivloc verify``.
"""

from __future__ import annotations

from .classgen import (
    check_gkm_congruences,
    specialize_classes,
    toric_generating_classes,
    toric_specialized_classes,
    validate_condition_star,
)
from .errors import CapabilityError, ValidationError
from .exactmath import MultiPolynomial, poly_arith
from .io import CIRCLE, TORUS, InputDocument
from .localize import (
    CohomologyTuple,
    abbv_integrate,
    assemble_torus_system,
    circle_eulers,
    full_relation_system,
    lift_system,
    membership_test,
    verify_relation_counts,
)
from .model import (
    CircleSpec,
    betti_numbers,
    duality_defects,
    indices,
    is_generic,
    torus_poincare_dimensions,
)
from .oracle import compare_systems, gkm_edge_relations, truncated_solution_dimension

POLYTOPE = "polytope"


def resolve_circle(doc: InputDocument, xi=None) -> CircleSpec:
    if xi is not None:
        if len(xi) != doc.model.rank:
            raise ValidationError(f"--xi has {len(xi)} entries, rank is {doc.model.rank}", "xi")
        return CircleSpec(tuple(xi), doc.circle_variable)
    if doc.circle is None:
        raise ValidationError("no circle direction: give xi in the document or --xi", "xi")
    return doc.circle


def _grading(doc, table):
    return CIRCLE if table.variables == (doc.circle_variable,) else TORUS


def has_classes(doc: InputDocument) -> bool:
    return bool(doc.tables) or doc.model.polytope is not None


def circle_table(doc: InputDocument, circle: CircleSpec, source=None, sign=None):
    """Class table graded by the circle variable."""
    sign = sign or doc.sign
    if source is None:
        source = "default" if "default" in doc.tables else POLYTOPE
    if source == POLYTOPE:
        if doc.model.polytope is None:
            raise CapabilityError("document has neither a class table nor a polytope")
        return toric_specialized_classes(doc.model.polytope, circle, doc.model.ids, sign)
    if source not in doc.tables:
        raise ValidationError(f"no table named {source!r}; have {sorted(doc.tables)}", "tables")
    table = doc.tables[source]
    if _grading(doc, table) == TORUS:
        table = specialize_classes(table, circle)
    return table


def torus_table(doc: InputDocument, circle: CircleSpec, source=None, sign=None):
    """Class table graded by the torus variables, or ``None`` if there is none."""
    sign = sign or doc.sign
    if source is None or source == POLYTOPE:
        if "default" in doc.tables and source is None and _grading(doc, doc.tables["default"]) == TORUS:
            return doc.tables["default"]
        if doc.model.polytope is None:
            return None
        return toric_generating_classes(doc.model.polytope, circle, doc.model.variables, doc.model.ids, sign)
    table = doc.tables.get(source)
    if table is None:
        raise ValidationError(f"no table named {source!r}; have {sorted(doc.tables)}", "tables")
    return table if _grading(doc, table) == TORUS else None


def supplied_eulers(doc: InputDocument):
    if doc.euler is None:
        return None
    return [doc.euler[p] for p in doc.model.ids]


def localization_system(doc: InputDocument, circle: CircleSpec, source=None, sign=None):
    table = circle_table(doc, circle, source, sign)
    return full_relation_system(table, doc.model, circle, supplied_eulers(doc))


def subtorus_systems(doc: InputDocument, names=None):
    out = []
    for sub in doc.subtori:
        if names is not None and sub.name not in names:
            continue
        inner = sub.document
        system = localization_system(inner, resolve_circle(inner))
        out.append(lift_system(system, sub.residual, sub.embedding, doc.model.ids, doc.model.variables, sub.name))
    if names is not None:
        missing = set(names) - {s.name for s in doc.subtori}
        if missing:
            raise ValidationError(f"unknown subtorus blocks {sorted(missing)}", "subtori")
    return out


def assembled_system(doc: InputDocument, names=None):
    if not doc.subtori:
        raise CapabilityError("document has no subtorus blocks")
    return assemble_torus_system(subtorus_systems(doc, names))


def is_gkm(model) -> bool:
    """Weights at every point pairwise linearly independent (two-dimensional one-skeleton)."""
    for p in model.points:
        ws = p.weights
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                a, b = ws[i], ws[j]
                if all(a[k] * b[l] == a[l] * b[k] for k in range(len(a)) for l in range(len(a))):
                    return False
    return True


# -- verification -------------------------------------------------------------


def _check(name, ok, detail=None, severity="error"):
    out = {"name": name, "ok": bool(ok), "severity": severity}
    if detail is not None:
        out["detail"] = detail
    return out


def top_rows_automatic(table, model, circle):
    """For each top-index row a_t and every row a_q: sum a_q a_t / e is polynomial."""
    idx = indices(model, circle)
    eulers = circle_eulers(model, circle)
    bad = []
    for top in table.ids:
        if idx[top] // 2 < model.n_half:
            continue
        for base in table.ids:
            prods = [poly_arith(a, b, "mul") for a, b in zip(table.row(base), table.row(top))]
            if not abbv_integrate(prods, eulers).is_polynomial:
                bad.append([top, base])
    return bad


def verify_document(doc: InputDocument, circle: CircleSpec | None = None, cap: int = 6, source=None, sign=None):
    circle = circle or resolve_circle(doc)
    model = doc.model
    checks = []
    ok, bad = is_generic(model, circle)
    checks.append(_check("genericity", ok, [[p, list(w)] for p, w in bad] or None))
    if not ok:
        return {"ok": False, "checks": checks}
    betti = betti_numbers(model, circle)
    defects = duality_defects(model, circle)
    checks.append(_check("poincare_duality", not defects, {"betti": betti, "defects": defects}, "warning"))
    if model.n_half:
        ones = [MultiPolynomial.constant((circle.variable,), 1)] * len(model.ids)
        checks.append(_check("integral_of_one", abbv_integrate(ones, circle_eulers(model, circle)).is_zero()))
    if doc.euler is not None:
        computed = circle_eulers(model, circle)
        bad = [p for p, a in zip(model.ids, computed) if doc.euler[p] != a]
        checks.append(_check("euler_row", not bad, bad or None))

    if has_classes(doc):
        table = circle_table(doc, circle, source, sign)
        report = validate_condition_star(table, model, circle)
        checks.append(_check("classes", report.ok, report.as_dict()))
        if report.ok:
            system = full_relation_system(table, model, circle, supplied_eulers(doc))
            counts = verify_relation_counts(system, betti)
            checks.append(_check("relation_counts", counts.ok, counts.as_dict()))
            trunc = truncated_solution_dimension(system, cap)
            series = [sum(betti[: min(l, model.n_half) + 1]) for l in range(cap + 1)]
            checks.append(_check(
                "poincare_dimensions", list(trunc.solution_dims) == series,
                {"solution_dims": list(trunc.solution_dims), "series": series},
            ))
            failing = [b for b in table.ids if not membership_test(
                _row_tuple(table, b), table, model, circle).passed]
            checks.append(_check("basis_soundness", not failing, failing or None))
            checks.append(_check("top_rows_automatic", not top_rows_automatic(table, model, circle)))
            if model.edges is not None:
                gkm = check_gkm_congruences(table, model, circle)
                checks.append(_check("gkm_congruences_circle", gkm.ok, gkm.as_dict() if not gkm.ok else None))
                ttable = torus_table(doc, circle, source, sign)
                if ttable is not None:
                    gkm_t = check_gkm_congruences(ttable, model)
                    checks.append(_check("gkm_congruences_torus", gkm_t.ok, gkm_t.as_dict() if not gkm_t.ok else None))
                if is_gkm(model):
                    cmp = compare_systems(gkm_edge_relations(model), system, cap, specialize=circle)
                    checks.append(_check("gkm_recovery", cmp.all_equal, cmp.as_dict()))
    for sub in doc.subtori:
        inner = verify_document(sub.document, None, cap)
        checks.append(_check(f"subtorus:{sub.name}", inner["ok"], inner))
    if doc.subtori:
        system = assembled_system(doc)
        trunc = truncated_solution_dimension(system, cap)
        expected = torus_poincare_dimensions(betti, model.rank, cap)
        checks.append(_check(
            "assembly_dimensions", list(trunc.solution_dims) == expected,
            {"solution_dims": list(trunc.solution_dims), "expected": expected},
        ))
    overall = all(c["ok"] for c in checks if c["severity"] == "error")
    return {"ok": overall, "checks": checks}


def _row_tuple(table, base):
    return CohomologyTuple(table.ids, table.row(base), table.variables)
