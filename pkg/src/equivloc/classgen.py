"""Generating classes.

For a Delzant polytope the class attached to a vertex p is supported on the
flow-up face G_p; at a vertex q of G_p it is the product of the primitive
edge vectors from q to its neighbours outside G_p.  Tables can also be
supplied directly and are then only validated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import CapabilityError, DomainError, GenericityError, StructuralError, ValidationError
from .exactmath import (
    EVERY_DEGREE,
    LinearForm,
    MultiPolynomial,
    determinant,
    divide_by_linear,
    is_homogeneous,
    rational_rank,
)
from .model import (
    CircleSpec,
    DelzantPolytope,
    GKMModel,
    default_variables,
    indices,
    pairing,
    require_generic,
)

FORMULA = "formula"
KIRWAN = "kirwan"


@dataclass(frozen=True)
class FlowUpFace:
    base: str
    members: tuple
    directions: tuple

    @property
    def dimension(self):
        return len(self.directions)


@dataclass(frozen=True)
class GeneratingClassTable:
    """Row ``rows[p][j]`` is the restriction a_p(p_j), columns ordered by ``ids``.

    ``kind`` is ``"kirwan"`` for tables expected to be upper triangular in
    the Morse order with nonzero diagonal, ``"generating"`` for tables that
    only claim condition (*) and independence.
    """

    ids: tuple
    rows: dict
    variables: tuple
    xi: tuple | None = None
    kind: str = KIRWAN
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "variables", tuple(self.variables))
        rows = {}
        for base, row in self.rows.items():
            if base not in self.ids:
                raise StructuralError(f"class for unknown fixed point {base!r}")
            row = tuple(row)
            if len(row) != len(self.ids):
                raise StructuralError(f"row {base!r} has {len(row)} entries, expected {len(self.ids)}")
            for entry in row:
                if entry.variables != self.variables:
                    raise StructuralError(f"row {base!r} is over {entry.variables}, table over {self.variables}")
            rows[base] = row
        missing = [p for p in self.ids if p not in rows]
        if missing:
            raise StructuralError(f"no class given for fixed points {missing}")
        object.__setattr__(self, "rows", {p: rows[p] for p in self.ids})

    def row(self, base):
        return self.rows[base]

    def value(self, base, point):
        return self.rows[base][self.ids.index(point)]

    def label(self, base):
        return self.labels.get(base, base)

    def scaled(self, factors) -> GeneratingClassTable:
        """Rows multiplied by the given per-row rational factors."""
        rows = {b: tuple(v * Fraction(factors.get(b, 1)) for v in r) for b, r in self.rows.items()}
        return GeneratingClassTable(self.ids, rows, self.variables, self.xi, self.kind, dict(self.labels))


# -- flow-up faces ----------------------------------------------------------


def _require_polytope_generic(P: DelzantPolytope, circle: CircleSpec):
    if len(circle.xi) != P.dimension:
        raise StructuralError(f"direction has length {len(circle.xi)}, polytope dimension is {P.dimension}")
    for a, b in P.edges:
        d = P.direction(a, b)
        if circle.pair(d) == 0:
            raise GenericityError(f"edge {a}-{b} direction {d} pairs to zero with xi={circle.xi}")


def _in_span(vec, basis):
    if not basis:
        return not any(vec)
    return rational_rank(list(basis) + [list(vec)]) == rational_rank(list(basis))


def flow_up_face(P: DelzantPolytope, p: str, circle: CircleSpec) -> FlowUpFace:
    """Face spanned by the ascending edges at p.

    Members are the vertices reachable from p along edges that stay in the
    affine subspace p + span(ascending directions).
    """
    _require_polytope_generic(P, circle)
    up = [P.direction(p, w) for w in P.neighbors(p) if circle.pair(P.direction(p, w)) > 0]
    members = {p}
    frontier = [p]
    while frontier:
        v = frontier.pop()
        for w in P.neighbors(v):
            if w in members:
                continue
            if _in_span([b - a for a, b in zip(P.vertices[p], P.vertices[w])], up):
                members.add(w)
                frontier.append(w)
    order = [v for v in P.vertices if v in members]
    base_level = pairing(P.vertices[p], circle.xi)
    for v in order:
        if v != p and pairing(P.vertices[v], circle.xi) <= base_level:
            raise GenericityError(f"flow-up face of {p!r} contains {v!r} at or below its level")
    return FlowUpFace(p, tuple(order), tuple(up))


# -- toric construction -------------------------------------------------------


def _row_sign(P, p, circle, sign):
    if sign == FORMULA:
        return 1
    if sign == KIRWAN:
        down = sum(1 for w in P.neighbors(p) if circle.pair(P.direction(p, w)) < 0)
        return -1 if down % 2 else 1
    raise ValueError(f"unknown sign convention {sign!r}")


def _toric_table(P, circle, ids, sign, factor, variables):
    P.validate()
    _require_polytope_generic(P, circle)
    ids = tuple(ids) if ids else tuple(P.vertices)
    rows = {}
    for p in ids:
        face = flow_up_face(P, p, circle)
        members = set(face.members)
        s = _row_sign(P, p, circle, sign)
        row = []
        for q in ids:
            if q not in members:
                row.append(MultiPolynomial.zero(variables))
                continue
            value = MultiPolynomial.constant(variables, s)
            for r in P.neighbors(q):
                if r not in members:
                    value = value * factor(P.direction(q, r))
            row.append(value)
        rows[p] = row
    return GeneratingClassTable(ids, rows, variables, circle.xi, KIRWAN)


def toric_generating_classes(
    P: DelzantPolytope, circle: CircleSpec, variables=None, ids=None, sign=FORMULA
) -> GeneratingClassTable:
    """Classes in Q[x_1..x_n]: a_p(q) = prod over r outside G_p adjacent to q of prim(r - q).

    ``sign="kirwan"`` multiplies row p by (-1)^(index(p)/2), which gives
    a_p(p) = (-1)^k times the product of the descending weights.
    """
    variables = tuple(variables) if variables else default_variables(P.dimension)
    return _toric_table(P, circle, ids, sign, lambda d: MultiPolynomial.linear(variables, d), variables)


def toric_specialized_classes(P: DelzantPolytope, circle: CircleSpec, ids=None, sign=FORMULA):
    """Same construction with every factor projected to the circle: <prim(r - q), xi> u."""
    variables = (circle.variable,)
    return _toric_table(
        P, circle, ids, sign, lambda d: MultiPolynomial.monomial(variables, (1,), circle.pair(d)), variables
    )


def specialize_classes(table: GeneratingClassTable, circle: CircleSpec) -> GeneratingClassTable:
    """Apply x_i -> xi_i u to every entry."""
    if len(circle.xi) != len(table.variables):
        raise StructuralError("direction length does not match the table's variables")
    rows = {}
    for base, row in table.rows.items():
        new = tuple(v.specialize(circle.xi, circle.variable) for v in row)
        if table.kind == KIRWAN and new[table.ids.index(base)].is_zero():
            raise DomainError(f"diagonal entry of class {base!r} vanishes under xi={circle.xi}; xi is not generic")
        rows[base] = new
    return GeneratingClassTable(table.ids, rows, (circle.variable,), circle.xi, table.kind, dict(table.labels))


# -- validation --------------------------------------------------------------


@dataclass
class Violation:
    row: str
    column: str | None
    reason: str

    def as_dict(self):
        return {"row": self.row, "column": self.column, "reason": self.reason}


@dataclass
class TableReport:
    violations: list
    checked: list

    @property
    def ok(self):
        return not self.violations

    def as_dict(self):
        return {"ok": self.ok, "checked": list(self.checked), "violations": [v.as_dict() for v in self.violations]}


def _nonzero_determinant(table: GeneratingClassTable) -> bool:
    """Whether det[a_p(p_j)] is a nonzero polynomial.

    The determinant has degree at most D = sum of row degrees in each
    variable, so it is zero iff it vanishes on the grid {0..D}^n.  Points are
    tried in order of increasing height and the search stops at the first
    nonzero value; in practice that is one of the first few points.
    """
    n = len(table.variables)
    d = 0
    for row in table.rows.values():
        d += max((v.total_degree() or 0) for v in row)
    matrices_rows = [table.rows[b] for b in table.ids]
    seeds = [tuple(range(1, n + 1)), tuple(range(2, n + 2)), tuple(3 + i * i for i in range(n))]
    for point in seeds:
        if determinant([[v.evaluate(point) for v in row] for row in matrices_rows]):
            return True
    grid = sorted(product(range(d + 1), repeat=n), key=lambda pt: (sum(pt), pt))
    for point in grid:
        if determinant([[v.evaluate(point) for v in row] for row in matrices_rows]):
            return True
    return False


def validate_condition_star(table: GeneratingClassTable, model: GKMModel, circle: CircleSpec) -> TableReport:
    """Check condition (*), triangularity, diagonal and independence; report every violation."""
    if tuple(table.ids) != tuple(model.ids):
        raise StructuralError("table columns do not match the model's fixed points")
    require_generic(model, circle)
    idx = indices(model, circle)
    violations = []
    checked = ["condition_star"]
    for base, row in table.rows.items():
        k = idx[base] // 2
        for pid, value in zip(table.ids, row):
            deg = is_homogeneous(value)
            if deg is EVERY_DEGREE:
                continue
            if deg is None:
                violations.append(Violation(base, pid, "entry is not homogeneous"))
            elif deg != k:
                violations.append(Violation(base, pid, f"entry has degree {deg}, class of index {2 * k} needs degree {k}"))
    if table.kind == KIRWAN:
        checked.append("diagonal")
        for base, row in table.rows.items():
            if row[table.ids.index(base)].is_zero():
                violations.append(Violation(base, base, "diagonal entry vanishes"))
        if model.polytope is not None:
            checked.append("triangular")
            for base, row in table.rows.items():
                level = pairing(model.coordinates(base), circle.xi)
                for pid, value in zip(table.ids, row):
                    if pairing(model.coordinates(pid), circle.xi) < level and not value.is_zero():
                        violations.append(Violation(base, pid, "nonzero below the base point"))
    checked.append("independence")
    if not _nonzero_determinant(table):
        violations.append(Violation("*", None, "rows are linearly dependent"))
    return TableReport(violations, checked)


def require_valid(table, model, circle) -> GeneratingClassTable:
    report = validate_condition_star(table, model, circle)
    if not report.ok:
        first = report.violations[0]
        raise ValidationError(
            f"class table violates its invariants: {first.reason}"
            + (f" ({len(report.violations) - 1} more)" if len(report.violations) > 1 else ""),
            f"classes.{first.row}" + (f".{first.column}" if first.column else ""),
        )
    return table


def check_gkm_congruences(table: GeneratingClassTable, model: GKMModel, circle: CircleSpec | None = None) -> TableReport:
    """For every row and edge p-q with direction eta, a(p) - a(q) must be divisible by eta.

    A table over the torus variables is checked against eta itself; a
    one-variable table is checked against <eta, xi> u.
    """
    edges = model.require_edges()
    if table.variables == model.variables:
        form = lambda eta: LinearForm(eta)
    elif len(table.variables) == 1 and circle is not None:
        form = lambda eta: LinearForm((1,)) if circle.pair(eta) else None
    else:
        raise CapabilityError("table grading does not match the model; pass the circle it was specialized to")
    violations = []
    for base, row in table.rows.items():
        for e in edges:
            diff = table.value(base, e.source) - table.value(base, e.target)
            alpha = form(e.direction)
            if alpha is None:
                ok = diff.is_zero()
            else:
                ok = divide_by_linear(diff, alpha) is not None
            if not ok:
                violations.append(Violation(base, f"{e.source}-{e.target}", f"difference {diff} not divisible by edge weight"))
    return TableReport(violations, ["gkm"])
