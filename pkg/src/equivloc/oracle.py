"""Independent cross-checks by brute-force linear algebra.

A relation system cuts out, in each degree l, a subspace of the
coefficient space of (f_1..f_d).  Here those subspaces are computed
explicitly and compared; nothing below uses class tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StructuralError
from .exactmath import LinearForm, monomial_count, monomials, rational_nullspace, rational_rank
from .localize import DivisibilityRelation, RelationSystem
from .model import CircleSpec, GKMModel, require_generic

EQUAL = "equal"
SUBSET = "subset"
SUPERSET = "superset"
INCOMPARABLE = "incomparable"


def gkm_edge_relations(model: GKMModel, circle: CircleSpec | None = None) -> RelationSystem:
    """One relation f_p - f_q in (eta) per edge, or in (<eta, xi> u) when a circle is given."""
    edges = model.require_edges()
    if circle is not None:
        require_generic(model, circle)
        variables = (circle.variable,)
    else:
        variables = model.variables
    rels = []
    for e in edges:
        coeffs = [0] * len(model.ids)
        coeffs[model.position(e.source)] = 1
        coeffs[model.position(e.target)] = -1
        if circle is not None:
            if circle.pair(e.direction) == 0:
                raise StructuralError(f"edge {e.source}-{e.target} is fixed by the circle")
            form = LinearForm((1,))
        else:
            form = LinearForm(e.direction)
        rels.append(DivisibilityRelation.normalized(
            model.ids, coeffs, form, 1, variables, f"{e.source}-{e.target}", 0
        ))
    return RelationSystem(model.ids, variables, rels, circle.xi if circle else None)


@dataclass(frozen=True)
class DegreeTruncation:
    cap: int
    coefficient_dims: tuple
    solution_dims: tuple

    def __post_init__(self):
        for c, s in zip(self.coefficient_dims, self.solution_dims):
            assert s <= c

    def as_dict(self):
        return {"cap": self.cap, "coefficient_dims": list(self.coefficient_dims), "solution_dims": list(self.solution_dims)}


def solution_space(system: RelationSystem, degree: int):
    """Basis of the degree-``degree`` coefficient vectors satisfying every relation."""
    size = system.coefficient_dimension(degree)
    rows = system.constraint_matrix(degree)
    if not rows:
        return [tuple(int(i == j) for j in range(size)) for i in range(size)]
    return rational_nullspace(rows, size)


def truncated_solution_dimension(system: RelationSystem, cap: int) -> DegreeTruncation:
    coeff, sol = [], []
    for l in range(cap + 1):
        size = system.coefficient_dimension(l)
        rows = system.constraint_matrix(l)
        coeff.append(size)
        sol.append(size - (rational_rank(rows) if rows else 0))
    return DegreeTruncation(cap, tuple(coeff), tuple(sol))


def _specialization_matrix(nvars: int, npoints: int, degree: int, xi):
    """Matrix of x_i -> xi_i u on degree-``degree`` coefficient vectors, point blocks kept."""
    values = []
    for m in monomials(nvars, degree):
        v = 1
        for e, c in zip(m, xi):
            v *= c ** e
        values.append(v)
    size = len(values)
    rows = []
    for j in range(npoints):
        row = [0] * (size * npoints)
        row[j * size:(j + 1) * size] = values
        rows.append(row)
    return rows


def _apply(rows, vectors):
    return [tuple(sum(a * b for a, b in zip(r, v) if a) for r in rows) for v in vectors]


@dataclass(frozen=True)
class ComparisonRow:
    degree: int
    dim_a: int
    dim_b: int
    relation: str

    def as_dict(self):
        return {"degree": self.degree, "dim_a": self.dim_a, "dim_b": self.dim_b, "relation": self.relation}


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple

    def relation(self, degree):
        return self.rows[degree].relation

    @property
    def all_equal(self):
        return all(r.relation == EQUAL for r in self.rows)

    def strict_containment(self):
        """Degrees where A's solution space strictly contains B's."""
        return [r.degree for r in self.rows if r.relation == SUPERSET]

    def as_dict(self):
        return [r.as_dict() for r in self.rows]

    def render(self):
        lines = [f"{'degree':>6}  {'dim A':>6}  {'dim B':>6}  relation"]
        for r in self.rows:
            lines.append(f"{r.degree:>6}  {r.dim_a:>6}  {r.dim_b:>6}  {r.relation}")
        return "\n".join(lines)


def compare_systems(a: RelationSystem, b: RelationSystem, cap: int, specialize: CircleSpec | None = None) -> ComparisonReport:
    """Per-degree comparison of solution spaces.

    ``relation`` is "subset" when A's solutions lie inside B's.  With
    ``specialize``, A is a torus-graded system and its solution space is pushed
    through x_i -> xi_i u before being compared with the circle-graded B.
    """
    if a.ids != b.ids:
        raise StructuralError("systems are over different fixed points")
    if specialize is None:
        if a.variables != b.variables:
            raise StructuralError("systems are graded differently; pass the specializing circle")
    else:
        if len(b.variables) != 1 or len(specialize.xi) != len(a.variables):
            raise StructuralError("specialization needs a torus-graded A and circle-graded B")
    out = []
    for l in range(cap + 1):
        va = solution_space(a, l)
        if specialize is not None:
            va = _apply(_specialization_matrix(len(a.variables), len(a.ids), l, specialize.xi), va)
        vb = solution_space(b, l)
        ra = rational_rank(va) if va else 0
        rb = rational_rank(vb) if vb else 0
        rs = rational_rank(list(va) + list(vb)) if (va or vb) else 0
        if ra == rb == rs:
            rel = EQUAL
        elif rs == rb:
            rel = SUBSET
        elif rs == ra:
            rel = SUPERSET
        else:
            rel = INCOMPARABLE
        out.append(ComparisonRow(l, ra, rb, rel))
    return ComparisonReport(tuple(out))


def coefficient_dimension(npoints: int, nvars: int, degree: int) -> int:
    return npoints * monomial_count(nvars, degree)
