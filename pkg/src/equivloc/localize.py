"""Localization relations.

For a circle action with generating classes {a_p}, a tuple f = (f_1..f_d) is
a class iff every sum  sum_j f_j a_p(p_j) / e(p_j)  is a polynomial.  With
a_p of degree k and e of degree n_half, each sum is  u^(k - n_half) times a
fixed rational combination of the f_j, so the condition is one divisibility
relation  sum_j s_j f_j in (u^(n_half - k)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .classgen import GeneratingClassTable, flow_up_face, require_valid
from .errors import DomainError, StructuralError, ValidationError
from .exactmath import (
    LaurentUnivariate,
    LinearForm,
    MultiPolynomial,
    clear_denominators,
    divide_by_linear_power,
    laurent_from_ratio,
    monomial_count,
    monomials,
    rational_nullspace,
    rational_rank,
)
from .model import CircleSpec, DelzantPolytope, GKMModel, euler_class_circle, indices, require_generic


@dataclass(frozen=True)
class CohomologyTuple:
    ids: tuple
    values: tuple
    variables: tuple

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.values) != len(self.ids):
            raise StructuralError(f"tuple has {len(self.values)} entries for {len(self.ids)} fixed points")
        for v in self.values:
            if v.variables != self.variables:
                raise StructuralError(f"entry over {v.variables}, tuple over {self.variables}")

    @classmethod
    def from_mapping(cls, ids, variables, mapping):
        unknown = set(mapping) - set(ids)
        if unknown:
            raise StructuralError(f"tuple names unknown fixed points {sorted(unknown)}")
        values = [mapping.get(pid, MultiPolynomial.zero(variables)) for pid in ids]
        return cls(ids, values, variables)

    def __getitem__(self, pid):
        return self.values[self.ids.index(pid)]


@lru_cache(maxsize=None)
def _annihilator(form: LinearForm, power: int, degree: int):
    """Vectors phi over the degree-``degree`` monomials with phi . g = 0 for all g in (form^power)."""
    n = len(form)
    size = monomial_count(n, degree)
    if degree < power:
        return tuple(tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size))
    variables = tuple(f"t{i}" for i in range(n))
    base = form.to_polynomial(variables) ** power
    span = [
        (base * MultiPolynomial.monomial(variables, m)).coefficient_vector(degree)
        for m in monomials(n, degree - power)
    ]
    return tuple(rational_nullspace(span, size))


@dataclass(frozen=True)
class DivisibilityRelation:
    """sum_j s_j f_j in (form^power), coefficients coprime integers, first nonzero positive."""

    ids: tuple
    coeffs: tuple
    form: LinearForm
    power: int
    variables: tuple
    source: str | None = field(default=None, compare=False)
    grade: int | None = field(default=None, compare=False)

    @classmethod
    def normalized(cls, ids, coeffs, form, power, variables, source=None, grade=None):
        ints = clear_denominators(coeffs)
        if not any(ints):
            raise ValueError("relation needs at least one nonzero coefficient")
        if next(c for c in ints if c) < 0:
            ints = [-c for c in ints]
        if not isinstance(form, LinearForm):
            form = LinearForm(form)
        if len(form) != len(variables):
            raise StructuralError("modulus form does not match the variables")
        if power < 1:
            raise ValueError("modulus power must be positive")
        return cls(tuple(ids), tuple(ints), form, int(power), tuple(variables), source, grade)

    def coefficient(self, pid) -> int:
        return self.coeffs[self.ids.index(pid)]

    def combination(self, values) -> MultiPolynomial:
        if isinstance(values, CohomologyTuple):
            values = values.values
        total = MultiPolynomial.zero(self.variables)
        for s, f in zip(self.coeffs, values):
            if s:
                total = total + f * s
        return total

    def holds(self, values) -> bool:
        return divide_by_linear_power(self.combination(values), self.form, self.power) is not None

    def constraint_rows(self, degree: int):
        """Linear conditions imposed on the degree-``degree`` coefficients of f.

        Unknowns are ordered point by point, each block over :func:`monomials`.
        """
        size = monomial_count(len(self.variables), degree)
        rows = []
        for phi in _annihilator(self.form, self.power, degree):
            row = []
            for s in self.coeffs:
                row.extend(s * c for c in phi)
            rows.append(row)
        assert all(len(r) == size * len(self.ids) for r in rows)
        return rows

    def render(self, names=None) -> str:
        names = names or {pid: f"f_{i + 1}" for i, pid in enumerate(self.ids)}
        out = ""
        for pid, s in zip(self.ids, self.coeffs):
            if not s:
                continue
            mag = abs(s)
            body = names[pid] if mag == 1 else f"{mag} {names[pid]}"
            if not out:
                out = ("-" if s < 0 else "") + body
            else:
                out += f" {'-' if s < 0 else '+'} {body}"
        form = self.form.render(self.variables)
        if self.power == 1:
            mod = form
        else:
            mod = f"({form})^{self.power}" if " " in form else f"{form}^{self.power}"
        return f"{out} ∈ ({mod})"

    def as_dict(self):
        return {
            "coeffs": {pid: s for pid, s in zip(self.ids, self.coeffs) if s},
            "modulus": {"form": list(self.form.coefficients), "power": self.power},
            "from_class": self.source,
        }


@dataclass(frozen=True)
class RelationSystem:
    ids: tuple
    variables: tuple
    relations: tuple
    xi: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "relations", tuple(self.relations))
        for r in self.relations:
            if r.ids != self.ids or r.variables != self.variables:
                raise StructuralError("relation is over a different model or ring than its system")

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)

    def coefficient_dimension(self, degree: int) -> int:
        return len(self.ids) * monomial_count(len(self.variables), degree)

    def constraint_matrix(self, degree: int):
        rows = []
        for r in self.relations:
            rows.extend(r.constraint_rows(degree))
        return rows

    def failures(self, values):
        return [r for r in self.relations if not r.holds(values)]

    def holds(self, values) -> bool:
        return not self.failures(values)

    def as_dict(self):
        return {
            "variables": list(self.variables),
            "points": list(self.ids),
            "relations": [r.as_dict() for r in self.relations],
        }

    def render(self):
        return [r.render() for r in self.relations]


# -- localization -------------------------------------------------------------


def _monomial_data(p: MultiPolynomial):
    """(coefficient, degree) of c*u^k; rejects anything that is not a single term."""
    if len(p.variables) != 1:
        raise StructuralError("circle-graded data must be in one variable")
    terms = p.terms
    if len(terms) != 1:
        raise DomainError(f"{p} is not a nonzero monomial")
    (exp, c), = terms.items()
    return c, exp[0]


def abbv_integrate(values, eulers) -> LaurentUnivariate:
    """sum_j values_j / eulers_j as an exact Laurent polynomial."""
    values = list(values.values) if isinstance(values, CohomologyTuple) else list(values)
    eulers = list(eulers)
    if len(values) != len(eulers):
        raise StructuralError("need one Euler class per value")
    if not eulers:
        raise StructuralError("no fixed points")
    var = eulers[0].variables
    total = LaurentUnivariate(var[0])
    for f, e in zip(values, eulers):
        if e.is_zero():
            raise DomainError("zero Euler class")
        c, k = _monomial_data(e)
        if f.variables != var:
            raise StructuralError(f"value over {f.variables}, Euler classes over {var}")
        total = total + laurent_from_ratio(f, c, k)
    return total


def circle_eulers(model: GKMModel, circle: CircleSpec):
    require_generic(model, circle)
    return [euler_class_circle(p, circle) for p in model.points]


def check_euler_row(model, circle, supplied) -> list:
    """Compare a supplied Euler row with the product of weights; return the mismatching ids."""
    computed = circle_eulers(model, circle)
    return [pid for pid, a, b in zip(model.ids, computed, supplied) if a != b]


def relation_from_class(row, eulers, index: int, n_half: int, ids, source=None):
    """Divisibility relation from one class row, or ``None`` for a top-index row."""
    k = index // 2
    if k >= n_half:
        return None
    row = list(row)
    var = eulers[0].variables
    coeffs = []
    for a, e in zip(row, eulers):
        if a.is_zero():
            coeffs.append(Fraction(0))
            continue
        ca, ka = _monomial_data(a)
        ce, ke = _monomial_data(e)
        if ka != k or ke != n_half:
            raise ValidationError(f"class {source!r} entry {a} is not of degree {k}")
        coeffs.append(ca / ce)
    return DivisibilityRelation.normalized(ids, coeffs, LinearForm((1,)), n_half - k, var, source, k)


def full_relation_system(table: GeneratingClassTable, model: GKMModel, circle: CircleSpec, eulers=None) -> RelationSystem:
    """One relation per class of index below the top, in row order."""
    require_valid(table, model, circle)
    if table.variables != (circle.variable,):
        raise StructuralError(f"table is graded by {table.variables}, expected the circle variable {circle.variable!r}")
    computed = circle_eulers(model, circle)
    if eulers is not None:
        bad = [pid for pid, a, b in zip(model.ids, computed, eulers) if a != b]
        if bad:
            raise ValidationError(f"supplied Euler classes differ from the weight products at {bad}", "euler")
    idx = indices(model, circle)
    relations = []
    for base in table.ids:
        rel = relation_from_class(table.row(base), computed, idx[base], model.n_half, model.ids, table.label(base))
        if rel is not None:
            relations.append(rel)
    return RelationSystem(model.ids, (circle.variable,), relations, circle.xi)


def flow_up_relation(P: DelzantPolytope, p: str, circle: CircleSpec, ids=None) -> DivisibilityRelation | None:
    """Relation of the toric class at p read straight off its flow-up face.

    sum over q in G_p of f_q / prod(<w, xi> u) over the edges of G_p at q.
    """
    face = flow_up_face(P, p, circle)
    ids = tuple(ids) if ids else tuple(P.vertices)
    if not face.dimension:
        return None
    members = set(face.members)
    coeffs = []
    for q in ids:
        if q not in members:
            coeffs.append(Fraction(0))
            continue
        c = 1
        for r in P.neighbors(q):
            if r in members:
                c *= circle.pair(P.direction(q, r))
        coeffs.append(Fraction(1, c))
    return DivisibilityRelation.normalized(
        ids, coeffs, LinearForm((1,)), face.dimension, (circle.variable,), p, P.dimension - face.dimension
    )


@dataclass(frozen=True)
class MembershipFailure:
    base: str
    relation: DivisibilityRelation
    witness: LaurentUnivariate

    def as_dict(self):
        return {"from_class": self.base, "relation": self.relation.render(), "witness": self.witness.to_json(), "witness_text": str(self.witness)}


@dataclass(frozen=True)
class MembershipResult:
    passed: bool
    failures: tuple
    sums: dict

    def as_dict(self):
        return {
            "passed": self.passed,
            "failures": [f.as_dict() for f in self.failures],
            "sums": {b: str(s) for b, s in self.sums.items()},
        }


def membership_test(f: CohomologyTuple, table: GeneratingClassTable, model: GKMModel, circle: CircleSpec) -> MembershipResult:
    """Evaluate every localization sum directly; fail on any negative power of u."""
    system = full_relation_system(table, model, circle)
    by_source = {r.source: r for r in system.relations}
    eulers = circle_eulers(model, circle)
    idx = indices(model, circle)
    if f.ids != model.ids:
        raise StructuralError("tuple is indexed by different fixed points")
    failures = []
    sums = {}
    for base in table.ids:
        if idx[base] // 2 >= model.n_half:
            continue
        products = [fj * a for fj, a in zip(f.values, table.row(base))]
        total = abbv_integrate(products, eulers)
        sums[table.label(base)] = total
        if not total.is_polynomial:
            failures.append(MembershipFailure(table.label(base), by_source[table.label(base)], total.principal_part()))
    return MembershipResult(not failures, tuple(failures), sums)


# -- assembling torus systems ---------------------------------------------------


def lift_relation(rel: DivisibilityRelation, residual_form, embedding, ambient_ids, ambient_variables, source=None) -> DivisibilityRelation:
    """Push a relation on a fixed submanifold into the ring of the full torus.

    Coefficients move to the embedded points (zero elsewhere); the modulus
    becomes ``residual_form`` to the same power.  With ``residual_form=None``
    the relation must already be over the ambient variables.
    """
    ambient_ids = tuple(ambient_ids)
    ambient_variables = tuple(ambient_variables)
    images = [embedding.get(pid) for pid in rel.ids]
    if None in images:
        raise StructuralError(f"embedding misses sub-model points {[p for p, i in zip(rel.ids, images) if i is None]}")
    if len(set(images)) != len(images):
        raise StructuralError("embedding is not injective")
    unknown = [i for i in images if i not in ambient_ids]
    if unknown:
        raise StructuralError(f"embedding targets unknown ambient points {unknown}")
    if residual_form is None:
        if rel.variables != ambient_variables:
            raise StructuralError("relation is not over the ambient ring and no residual form was given")
        form = rel.form
    else:
        form = residual_form if isinstance(residual_form, LinearForm) else LinearForm(residual_form)
        if len(form) != len(ambient_variables):
            raise StructuralError("residual form does not match the ambient variables")
        if len(rel.variables) != 1:
            raise StructuralError("only circle-graded relations can be lifted along a residual form")
    coeffs = [0] * len(ambient_ids)
    for pid, s in zip(rel.ids, rel.coeffs):
        coeffs[ambient_ids.index(embedding[pid])] = s
    return DivisibilityRelation.normalized(
        ambient_ids, coeffs, form, rel.power, ambient_variables, source or rel.source, rel.grade
    )


def lift_system(system: RelationSystem, residual_form, embedding, ambient_ids, ambient_variables, name=None) -> RelationSystem:
    rels = [
        lift_relation(r, residual_form, embedding, ambient_ids, ambient_variables,
                      f"{name}:{r.source}" if name else r.source)
        for r in system.relations
    ]
    return RelationSystem(ambient_ids, ambient_variables, rels)


def assemble_torus_system(systems) -> RelationSystem:
    """Concatenate lifted systems, dropping relations that repeat up to scalar."""
    systems = list(systems)
    if not systems:
        raise StructuralError("nothing to assemble")
    ids, variables = systems[0].ids, systems[0].variables
    seen = set()
    out = []
    for s in systems:
        if s.ids != ids or s.variables != variables:
            raise StructuralError("systems are lifted to different ambient models")
        for r in s.relations:
            key = (r.coeffs, r.form, r.power)
            if key not in seen:
                seen.add(key)
                out.append(r)
    return RelationSystem(ids, variables, out)


# -- counting ------------------------------------------------------------------


@dataclass
class CountRow:
    degree: int
    relations: int
    rank: int
    expected: int

    @property
    def ok(self):
        return self.rank == self.expected == self.relations


@dataclass
class CountReport:
    rows: list

    @property
    def ok(self):
        return all(r.ok for r in self.rows)

    def as_dict(self):
        return {
            "ok": self.ok,
            "degrees": [
                {"degree": r.degree, "relations": r.relations, "rank": r.rank, "expected": r.expected, "ok": r.ok}
                for r in self.rows
            ],
        }


def verify_relation_counts(system: RelationSystem, betti) -> CountReport:
    """Degree-k constraints must number b_0 + ... + b_{n_half-k-1} and be independent."""
    if len(system.variables) != 1:
        raise StructuralError("relation counts are defined for circle-graded systems")
    n_half = len(betti) - 1
    rows = []
    for k in range(n_half):
        active = [r for r in system.relations if r.power > k]
        matrix = system.constraint_matrix(k)
        rank = rational_rank(matrix) if matrix else 0
        rows.append(CountRow(k, len(active), rank, sum(betti[: n_half - k])))
    return CountReport(rows)
