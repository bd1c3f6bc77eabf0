"""Combinatorial model of a torus action: fixed points, weights, one-skeleton, polytope.

Also the Morse-theoretic quantities read off from the weights along a
generic circle: indices, Betti numbers, Euler classes, Poincare series.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import CapabilityError, GenericityError, StructuralError, ValidationError
from .exactmath import MultiPolynomial, determinant, primitive_integer_vector

DEFAULT_TORUS_VARIABLES = ("x", "y", "z", "w", "v")


def default_variables(rank: int):
    if rank <= len(DEFAULT_TORUS_VARIABLES):
        return DEFAULT_TORUS_VARIABLES[:rank]
    return tuple(f"x{i + 1}" for i in range(rank))


def pairing(a, b):
    return sum(Fraction(p) * q for p, q in zip(a, b))


@dataclass(frozen=True)
class FixedPoint:
    id: str
    weights: tuple

    def __post_init__(self):
        weights = tuple(tuple(int(c) for c in w) for w in self.weights)
        for w in weights:
            if not any(w):
                raise ValidationError(f"fixed point {self.id!r} has a zero weight")
        object.__setattr__(self, "weights", weights)


@dataclass(frozen=True)
class IsotropyEdge:
    """Edge of the one-skeleton; ``direction`` is primitive, pointing source -> target."""

    source: str
    target: str
    direction: tuple


@dataclass(frozen=True)
class CircleSpec:
    """A circle in the torus, given by an integral direction and the name of its variable."""

    xi: tuple
    variable: str = "u"

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(int(c) for c in self.xi))

    def pair(self, weight) -> int:
        if len(weight) != len(self.xi):
            raise StructuralError(f"weight {weight} and direction {self.xi} differ in length")
        return sum(a * b for a, b in zip(weight, self.xi))

    def flipped(self) -> CircleSpec:
        return CircleSpec(tuple(-c for c in self.xi), self.variable)


@dataclass(frozen=True)
class DelzantPolytope:
    dimension: int
    vertices: dict
    edges: tuple

    def __post_init__(self):
        verts = {}
        for vid, coords in self.vertices.items():
            coords = tuple(Fraction(c) for c in coords)
            if len(coords) != self.dimension:
                raise ValidationError(
                    f"vertex has {len(coords)} coordinates, expected {self.dimension}",
                    f"vertices.{vid}",
                )
            verts[vid] = coords
        edges = []
        seen = set()
        for i, (a, b) in enumerate(self.edges):
            for end in (a, b):
                if end not in verts:
                    raise ValidationError(f"unknown vertex {end!r}", f"edges[{i}]")
            if a == b or frozenset((a, b)) in seen:
                raise ValidationError(f"degenerate or repeated edge {a}-{b}", f"edges[{i}]")
            seen.add(frozenset((a, b)))
            edges.append((a, b))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", tuple(edges))

    def neighbors(self, vid):
        out = []
        for a, b in self.edges:
            if a == vid:
                out.append(b)
            elif b == vid:
                out.append(a)
        return out

    def direction(self, start, end):
        """prim(end - start)."""
        diff = [q - p for p, q in zip(self.vertices[start], self.vertices[end])]
        return primitive_integer_vector(diff)

    def validate(self):
        """Simplicity and smoothness at every vertex; raises ValidationError naming the vertex."""
        for vid in self.vertices:
            nbrs = self.neighbors(vid)
            if len(nbrs) != self.dimension:
                raise ValidationError(
                    f"{len(nbrs)} edges meet at vertex {vid!r}, expected {self.dimension}",
                    f"vertices.{vid}",
                )
            dirs = [self.direction(vid, w) for w in nbrs]
            if self.dimension and abs(determinant(dirs)) != 1:
                raise ValidationError(
                    f"edge directions at vertex {vid!r} are not a lattice basis", f"vertices.{vid}"
                )
        return self


@dataclass(frozen=True)
class GKMModel:
    rank: int
    variables: tuple
    points: tuple
    edges: tuple | None = None
    polytope: DelzantPolytope | None = None
    _by_id: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.variables) != self.rank:
            raise ValidationError("number of variables differs from torus rank", "variables")
        by_id = {}
        for i, p in enumerate(self.points):
            if p.id in by_id:
                raise ValidationError(f"duplicate fixed point id {p.id!r}", f"fixed_points[{i}].id")
            by_id[p.id] = p
            for j, w in enumerate(p.weights):
                if len(w) != self.rank:
                    raise ValidationError(
                        f"weight has {len(w)} entries, torus rank is {self.rank}",
                        f"fixed_points[{i}].weights[{j}]",
                    )
        halves = {len(p.weights) for p in self.points}
        if len(halves) > 1:
            raise ValidationError("fixed points carry different numbers of weights", "fixed_points")
        object.__setattr__(self, "_by_id", by_id)
        if self.edges is not None:
            object.__setattr__(self, "edges", tuple(self.edges))
            for i, e in enumerate(self.edges):
                for end in (e.source, e.target):
                    if end not in by_id:
                        raise ValidationError(f"unknown fixed point {end!r}", f"edges[{i}]")
                for end in (e.source, e.target):
                    ws = by_id[end].weights
                    neg = tuple(-c for c in e.direction)
                    if e.direction not in ws and neg not in ws:
                        raise ValidationError(
                            f"edge direction {e.direction} is not a weight at {end!r}", f"edges[{i}]"
                        )
        if self.polytope is not None:
            P = self.polytope
            if set(P.vertices) != set(by_id):
                raise ValidationError("polytope vertex ids differ from fixed point ids", "vertices")
            for vid in P.vertices:
                dirs = sorted(P.direction(vid, w) for w in P.neighbors(vid))
                if dirs != sorted(by_id[vid].weights):
                    raise ValidationError(
                        f"weights at {vid!r} do not match the polytope edge directions",
                        f"fixed_points.{vid}.weights",
                    )

    @property
    def ids(self):
        return tuple(p.id for p in self.points)

    @property
    def n_half(self) -> int:
        return len(self.points[0].weights) if self.points else 0

    def point(self, pid) -> FixedPoint:
        try:
            return self._by_id[pid]
        except KeyError:
            raise StructuralError(f"unknown fixed point {pid!r}") from None

    def position(self, pid) -> int:
        return self.ids.index(pid)

    def require_edges(self):
        if self.edges is None:
            raise CapabilityError("model has no one-skeleton (edge) data")
        return self.edges

    def coordinates(self, pid):
        if self.polytope is None:
            return None
        return self.polytope.vertices[pid]


def polytope_to_model(P: DelzantPolytope, variables=None, ids=None) -> GKMModel:
    """Fixed point per vertex with the primitive edge directions as weights."""
    P.validate()
    variables = tuple(variables) if variables else default_variables(P.dimension)
    order = list(ids) if ids else list(P.vertices)
    points = [FixedPoint(v, tuple(P.direction(v, w) for w in P.neighbors(v))) for v in order]
    edges = [IsotropyEdge(a, b, P.direction(a, b)) for a, b in P.edges]
    return GKMModel(P.dimension, variables, points, edges, P)


# -- genericity and Morse data ---------------------------------------------


def is_generic(model: GKMModel, circle: CircleSpec):
    """(ok, violations) where violations lists (point id, weight) pairing to zero."""
    if len(circle.xi) != model.rank:
        raise StructuralError(f"direction has length {len(circle.xi)}, torus rank is {model.rank}")
    bad = [(p.id, w) for p in model.points for w in p.weights if circle.pair(w) == 0]
    return (not bad, bad)


def _require_generic_point(p: FixedPoint, circle: CircleSpec):
    for w in p.weights:
        if circle.pair(w) == 0:
            raise GenericityError(f"weight {w} at {p.id!r} pairs to zero with xi={circle.xi}")


def require_generic(model: GKMModel, circle: CircleSpec):
    ok, bad = is_generic(model, circle)
    if not ok:
        pid, w = bad[0]
        raise GenericityError(
            f"xi={circle.xi} is not generic: weight {w} at {pid!r} pairs to zero"
            + (f" (and {len(bad) - 1} more)" if len(bad) > 1 else "")
        )


def morse_index(p: FixedPoint, circle: CircleSpec) -> int:
    """Twice the number of weights pairing negatively with the circle direction."""
    _require_generic_point(p, circle)
    return 2 * sum(1 for w in p.weights if circle.pair(w) < 0)


def descending_weights(p: FixedPoint, circle: CircleSpec):
    _require_generic_point(p, circle)
    return [w for w in p.weights if circle.pair(w) < 0]


def euler_class_circle(p: FixedPoint, circle: CircleSpec) -> MultiPolynomial:
    """prod <w_i, xi> * u^{n_half}."""
    _require_generic_point(p, circle)
    c = 1
    for w in p.weights:
        c *= circle.pair(w)
    return MultiPolynomial.monomial((circle.variable,), (len(p.weights),), c)


def euler_class_torus(p: FixedPoint, variables) -> MultiPolynomial:
    """Product of the weights as linear forms in the torus variables."""
    e = MultiPolynomial.constant(variables, 1)
    for w in p.weights:
        e = e * MultiPolynomial.linear(variables, w)
    return e


def indices(model: GKMModel, circle: CircleSpec):
    require_generic(model, circle)
    return {p.id: morse_index(p, circle) for p in model.points}


def betti_numbers(model: GKMModel, circle: CircleSpec):
    """b_k = number of fixed points of index 2k, k = 0..n_half."""
    require_generic(model, circle)
    b = [0] * (model.n_half + 1)
    for p in model.points:
        b[morse_index(p, circle) // 2] += 1
    return b


def equivariant_poincare_series(model: GKMModel, circle: CircleSpec, degree_cap: int):
    """Coefficients of t^0, t^2, ..., t^{2l} with 2l <= degree_cap."""
    b = betti_numbers(model, circle)
    return [sum(b[: min(l, model.n_half) + 1]) for l in range(degree_cap // 2 + 1)]


def torus_poincare_dimensions(betti, rank: int, cap: int):
    """dim of H^{2l}_T(M) for l <= cap when H_T(M) = H(M) (x) Q[x_1..x_rank]."""
    dims = []
    for l in range(cap + 1):
        dims.append(sum(b * comb(l - k + rank - 1, rank - 1) for k, b in enumerate(betti) if k <= l))
    return dims


def duality_defects(model: GKMModel, circle: CircleSpec):
    """Degrees k with b_k != b_{n_half-k}; empty for a genuine closed manifold."""
    b = betti_numbers(model, circle)
    return [k for k in range(len(b)) if b[k] != b[-1 - k]]


def check_duality(model: GKMModel, circle: CircleSpec):
    """Emit a warning (not an error) if Poincare duality fails for the weight data."""
    bad = duality_defects(model, circle)
    if bad:
        warnings.warn(
            f"Betti numbers {betti_numbers(model, circle)} violate Poincare duality at k={bad}",
            stacklevel=2,
        )
    return not bad


def orient_edges(model: GKMModel, circle: CircleSpec):
    """Edges as (lower, upper) pairs, ordered by the circle component of the moment map.

    Uses vertex coordinates when the model has a polytope, otherwise the sign
    of the edge direction paired with xi.
    """
    edges = model.require_edges()
    out = []
    for e in edges:
        if model.polytope is not None:
            a = pairing(model.coordinates(e.source), circle.xi)
            b = pairing(model.coordinates(e.target), circle.xi)
        else:
            a, b = 0, circle.pair(e.direction)
        if a == b:
            raise GenericityError(
                f"edge {e.source}-{e.target} has equal xi-pairing at both ends for xi={circle.xi}"
            )
        out.append((e.source, e.target) if a < b else (e.target, e.source))
    return out
