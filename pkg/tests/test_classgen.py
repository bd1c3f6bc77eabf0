import pytest

from conftest import row
from equivloc.classgen import (
    FORMULA,
    KIRWAN,
    GeneratingClassTable,
    check_gkm_congruences,
    flow_up_face,
    require_valid,
    specialize_classes,
    toric_generating_classes,
    toric_specialized_classes,
    validate_condition_star,
)
from equivloc.errors import CapabilityError, DomainError, GenericityError, ValidationError
from equivloc.exactmath import MultiPolynomial, rational_rank
from equivloc.model import CircleSpec, FixedPoint, GKMModel, indices

XI = CircleSpec((1, 2, 1))
XYZ = ("x", "y", "z")


def test_flow_up_face_ex1b(docs):
    P = docs["ex1a"].model.polytope
    face = flow_up_face(P, "v3", XI)
    assert set(face.members) == {"v3", "v5", "v7", "v8"}
    assert face.dimension == 2


def test_flow_up_face_extremes(docs):
    P = docs["ex1a"].model.polytope
    assert set(flow_up_face(P, "v1", XI).members) == set(P.vertices)
    top = flow_up_face(P, "v8", XI)
    assert top.members == ("v8",) and top.directions == ()


def test_flow_up_nongeneric(docs):
    with pytest.raises(GenericityError):
        flow_up_face(docs["ex1a"].model.polytope, "v1", CircleSpec((1, 0, 0)))


def test_ex1a_rows(docs):
    T = toric_generating_classes(docs["ex1a"].model.polytope, XI)
    assert T.value("v2", "v5") in (row(["y-x"], XYZ)[0], row(["x-y"], XYZ)[0])
    assert list(T.row("v1")) == row(["1"] * 8, XYZ)
    # A5 up to the row sign: x(x-y) at v5 and v8
    a5 = T.row("v5")
    expected = row(["0", "0", "0", "0", "x(x-y)", "0", "0", "x(x-y)"], XYZ)
    assert list(a5) == expected or list(a5) == [-e for e in expected]


def test_specialize_rows(docs):
    T = toric_generating_classes(docs["ex1a"].model.polytope, XI, sign=KIRWAN)
    S = specialize_classes(T, XI)
    assert list(S.row("v2")) == row(["0", "2u", "0", "0", "u", "2u", "0", "u"])
    assert list(S.row("v6")) == row(["0", "0", "0", "0", "0", "2u^2", "0", "u^2"])
    assert list(S.row("v1")) == row(["1"] * 8)


def test_specialize_commutes_with_projection(docs):
    for name in ("ex1a", "cp2", "cp3", "hirzebruch_nonunique", "cp1"):
        doc = docs[name]
        P, c = doc.model.polytope, doc.circle
        for sign in (FORMULA, KIRWAN):
            direct = toric_specialized_classes(P, c, sign=sign)
            assert specialize_classes(toric_generating_classes(P, c, sign=sign), c).rows == direct.rows


def test_cp3_specialized(docs):
    S = toric_specialized_classes(docs["cp3"].model.polytope, CircleSpec((1, 2, 3)))
    assert list(S.row("p2")) == row(["0", "-u", "-2u", "-3u"])
    assert list(S.row("p3")) == row(["0", "0", "2u^2", "6u^2"])
    assert list(S.row("p4")) == row(["0", "0", "0", "-6u^3"])


def test_face_dimension_and_support(docs):
    for name in ("ex1a", "cp2", "cp3", "hirzebruch_nonunique"):
        doc = docs[name]
        P, c = doc.model.polytope, doc.circle
        T = toric_generating_classes(P, c)
        idx = indices(doc.model, c)
        for p in T.ids:
            face = flow_up_face(P, p, c)
            assert sum(1 for v in T.row(p) if not v.is_zero()) == len(face.members)
            assert idx[p] // 2 == P.dimension - face.dimension


def test_diagonal_is_signed_descending_product(docs):
    doc = docs["ex1a"]
    T = toric_generating_classes(doc.model.polytope, XI, sign=KIRWAN)
    for p in doc.model.points:
        down = [w for w in p.weights if XI.pair(w) < 0]
        prod = MultiPolynomial.constant(XYZ, (-1) ** len(down))
        for w in down:
            prod = prod * MultiPolynomial.linear(XYZ, w)
        assert T.value(p.id, p.id) == prod


def test_rows_independent_per_degree(docs):
    # flattening every row, scaled up to a common degree, gives full rank
    doc = docs["ex1a"]
    S = toric_specialized_classes(doc.model.polytope, XI)
    top = 3
    vectors = []
    for b in S.ids:
        r = S.row(b)
        k = next(v.total_degree() for v in r if not v.is_zero())
        vectors.append([(v * MultiPolynomial.monomial(("u",), (top - k,), 1)).coefficient((top,)) for v in r])
    assert rational_rank(vectors) == len(S.ids)


def test_validate_specialized_table(docs):
    doc = docs["ex1a"]
    S = toric_specialized_classes(doc.model.polytope, XI, sign=KIRWAN)
    report = validate_condition_star(S, doc.model, XI)
    assert report.ok
    assert report.checked == ["condition_star", "diagonal", "triangular", "independence"]


def test_validate_flags_wrong_degree(docs):
    doc = docs["cp1"]
    bad = GeneratingClassTable(("p1", "p2"), {"p1": row(["1", "1"]), "p2": row(["0", "u^2"])}, ("u",))
    report = validate_condition_star(bad, doc.model, doc.circle)
    assert not report.ok
    v = report.violations[0]
    assert (v.row, v.column) == ("p2", "p2")
    with pytest.raises(ValidationError, match="classes.p2.p2"):
        require_valid(bad, doc.model, doc.circle)


def test_validate_flags_dependent_rows(docs):
    doc = docs["cp1"]
    bad = GeneratingClassTable(("p1", "p2"), {"p1": row(["1", "1"]), "p2": row(["1", "1"])}, ("u",), kind="generating")
    report = validate_condition_star(bad, doc.model, doc.circle)
    assert "rows are linearly dependent" in [v.reason for v in report.violations]


def test_validate_flags_below_and_diagonal(docs):
    doc = docs["cp1"]
    bad = GeneratingClassTable(("p1", "p2"), {"p1": row(["1", "1"]), "p2": row(["u", "0"])}, ("u",))
    reasons = {v.reason for v in validate_condition_star(bad, doc.model, doc.circle).violations}
    assert "diagonal entry vanishes" in reasons
    assert "nonzero below the base point" in reasons


def test_reduced_orbit_table_valid(docs):
    doc = docs["so5_reduced"]
    assert validate_condition_star(doc.tables["default"], doc.model, doc.circle).ok


def test_gkm_congruences(docs):
    doc = docs["ex1a"]
    T = toric_generating_classes(doc.model.polytope, XI)
    assert check_gkm_congruences(T, doc.model).ok
    assert check_gkm_congruences(doc.tables["torus_reference"], doc.model).ok
    S = specialize_classes(T, XI)
    assert check_gkm_congruences(S, doc.model, XI).ok


def test_gkm_congruences_cp1(docs):
    doc = docs["cp1"]
    good = GeneratingClassTable(("p1", "p2"), {"p1": row(["1", "1"], ("x",)), "p2": row(["0", "-x"], ("x",))}, ("x",))
    assert check_gkm_congruences(good, doc.model).ok
    fake = GeneratingClassTable(("p1", "p2"), {"p1": row(["1", "1"], ("x",)), "p2": row(["0", "1"], ("x",))}, ("x",))
    assert not check_gkm_congruences(fake, doc.model).ok


def test_gkm_needs_edges(docs):
    doc = docs["so5_reduced"]
    with pytest.raises(CapabilityError):
        check_gkm_congruences(doc.tables["default"], doc.model, doc.circle)


def test_specialize_nongeneric_diagonal():
    T = GeneratingClassTable(("a", "b"), {"a": row(["1", "1"], ("x", "y")), "b": row(["0", "x-y"], ("x", "y"))}, ("x", "y"))
    with pytest.raises(DomainError):
        specialize_classes(T, CircleSpec((1, 1)))


def test_scaled_table_keeps_validity(docs):
    doc = docs["ex1a"]
    S = toric_specialized_classes(doc.model.polytope, XI, sign=KIRWAN)
    assert validate_condition_star(S.scaled({"v2": -3, "v8": "1/2"}), doc.model, XI).ok


def test_unknown_sign(docs):
    with pytest.raises(ValueError):
        toric_generating_classes(docs["cp1"].model.polytope, CircleSpec((1,)), sign="other")


def test_alternative_basis_valid(docs):
    doc = docs["hirzebruch_nonunique"]
    alt = doc.tables["alternative"]
    assert validate_condition_star(alt, doc.model, doc.circle).ok
    assert check_gkm_congruences(alt, doc.model).ok
    built = toric_generating_classes(doc.model.polytope, doc.circle, sign=KIRWAN)
    assert alt.rows != built.rows


def test_weight_only_model_has_no_polytope():
    m = GKMModel(1, ("x",), [FixedPoint("a", ((1,),)), FixedPoint("b", ((-1,),))])
    assert m.polytope is None and m.edges is None
