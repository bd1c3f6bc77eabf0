"""Input documents (schema 1) and their JSON rendering.

A document holds a model (weights, optional edges and vertex coordinates),
a default circle, optional class tables, an optional Euler row, optional
subtorus blocks, and named candidate tuples.  Every validation error names
the field path it came from.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .classgen import FORMULA, KIRWAN, GeneratingClassTable
from .errors import ValidationError
from .exactmath import LinearForm, MultiPolynomial, as_rational, parse_polynomial
from .localize import CohomologyTuple
from .model import CircleSpec, DelzantPolytope, FixedPoint, GKMModel, IsotropyEdge, default_variables

SCHEMA_VERSION = 1
CIRCLE = "circle"
TORUS = "torus"
GENERATING = "generating"


@dataclass
class Subtorus:
    """A fixed submanifold M^H with its own document, embedded into the ambient points."""

    name: str
    document: InputDocument
    embedding: dict
    residual: LinearForm


@dataclass
class InputDocument:
    name: str
    model: GKMModel
    circle: CircleSpec | None
    tables: dict = field(default_factory=dict)
    euler: dict | None = None
    subtori: list = field(default_factory=list)
    tuples: dict = field(default_factory=dict)
    sign: str = FORMULA
    digest: str = ""

    @property
    def circle_variable(self):
        return self.circle.variable if self.circle else "u"

    def ring(self, grading):
        return self.model.variables if grading == TORUS else (self.circle_variable,)

    def tuple_named(self, name) -> CohomologyTuple:
        if name not in self.tuples:
            raise ValidationError(f"no tuple named {name!r}; have {sorted(self.tuples)}", "tuples")
        return self.tuples[name]


def _path(parent, key):
    if isinstance(key, int):
        return f"{parent}[{key}]"
    return f"{parent}.{key}" if parent else str(key)


def _require(obj, key, kind, path):
    if key not in obj:
        raise ValidationError(f"missing required field {key!r}", path)
    value = obj[key]
    if not isinstance(value, kind):
        raise ValidationError(f"field {key!r} has the wrong type", _path(path, key))
    return value


def _int_vector(value, path, length=None):
    if not isinstance(value, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in value):
        raise ValidationError("expected a list of integers", path)
    if length is not None and len(value) != length:
        raise ValidationError(f"expected {length} entries, got {len(value)}", path)
    return tuple(value)


def _poly(value, variables, path):
    """Integer, text such as ``"x(y-x)"``, or a term list ``[[exponents], "coeff"]``."""
    if isinstance(value, list):
        for item in value:
            if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)
                    and len(item[0]) == len(variables)
                    and all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in item[0])):
                raise ValidationError(f"bad term {item!r}; expected [[{len(variables)} exponents], coeff]", path)
        try:
            return MultiPolynomial.from_term_list(variables, value)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValidationError(str(exc), path) from None
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValidationError("polynomial must be an integer, a string or a term list", path)
    try:
        return parse_polynomial(value, variables)
    except ValueError as exc:
        raise ValidationError(str(exc), path) from None


def _vertices(obj, rank, path):
    verts = {}
    for vid, coords in obj.items():
        p = _path(path, vid)
        if not isinstance(coords, list) or len(coords) != rank:
            raise ValidationError(f"vertex needs {rank} coordinates", p)
        try:
            verts[vid] = tuple(as_rational(c) for c in coords)
        except (TypeError, ValueError) as exc:
            raise ValidationError(str(exc), p) from None
    return verts


def _model(doc, path=""):
    rank = _require(doc, "rank", int, path)
    variables = tuple(doc.get("variables") or default_variables(rank))
    if len(variables) != rank:
        raise ValidationError("number of variables differs from rank", _path(path, "variables"))
    polytope = None
    raw_edges = doc.get("edges")
    if "vertices" in doc:
        verts = _vertices(_require(doc, "vertices", dict, path), rank, _path(path, "vertices"))
        if raw_edges is None:
            raise ValidationError("a polytope needs its edge list", _path(path, "edges"))
        pairs = []
        for i, e in enumerate(raw_edges):
            ep = _path(_path(path, "edges"), i)
            if not isinstance(e, dict):
                raise ValidationError("edge must be an object", ep)
            pairs.append((_require(e, "from", str, ep), _require(e, "to", str, ep)))
        polytope = DelzantPolytope(rank, verts, pairs)
    points = []
    if "fixed_points" in doc:
        for i, fp in enumerate(_require(doc, "fixed_points", list, path)):
            fpath = _path(_path(path, "fixed_points"), i)
            if not isinstance(fp, dict):
                raise ValidationError("fixed point must be an object", fpath)
            pid = _require(fp, "id", str, fpath)
            ws = _require(fp, "weights", list, fpath)
            weights = [_int_vector(w, _path(_path(fpath, "weights"), j), rank) for j, w in enumerate(ws)]
            try:
                points.append(FixedPoint(pid, tuple(weights)))
            except ValidationError as exc:
                raise ValidationError(exc.message, fpath) from None
    elif polytope is not None:
        polytope.validate()
        points = [FixedPoint(v, tuple(polytope.direction(v, w) for w in polytope.neighbors(v))) for v in polytope.vertices]
    else:
        raise ValidationError("need fixed_points or vertices", _path(path, "fixed_points"))
    edges = None
    if raw_edges is not None:
        edges = []
        ids = {p.id for p in points}
        for i, e in enumerate(raw_edges):
            ep = _path(_path(path, "edges"), i)
            a, b = _require(e, "from", str, ep), _require(e, "to", str, ep)
            for end in (a, b):
                if end not in ids:
                    raise ValidationError(f"unknown fixed point {end!r}", ep)
            if polytope is not None:
                d = polytope.direction(a, b)
                if "weight" in e and _int_vector(e["weight"], _path(ep, "weight"), rank) != d:
                    raise ValidationError("edge weight disagrees with the vertex coordinates", _path(ep, "weight"))
            elif "weight" in e:
                d = _int_vector(e["weight"], _path(ep, "weight"), rank)
            else:
                raise ValidationError("edge needs a weight when no vertices are given", ep)
            edges.append(IsotropyEdge(a, b, d))
    if polytope is not None:
        polytope.validate()
    return GKMModel(rank, variables, points, edges, polytope)


def _table(obj, doc, model, circle_variable, path, grading=None, kind=None, labels=None):
    grading = grading or (TORUS if model.rank > 1 else CIRCLE)
    if grading not in (CIRCLE, TORUS):
        raise ValidationError(f"unknown grading {grading!r}", path)
    variables = model.variables if grading == TORUS else (circle_variable,)
    rows = {}
    for base, entries in obj.items():
        bpath = _path(path, base)
        if base not in model.ids:
            raise ValidationError(f"class for unknown fixed point {base!r}", bpath)
        if not isinstance(entries, dict):
            raise ValidationError("class row must map point ids to polynomials", bpath)
        for pid in entries:
            if pid not in model.ids:
                raise ValidationError(f"unknown fixed point {pid!r}", _path(bpath, pid))
        rows[base] = [
            _poly(entries[pid], variables, _path(bpath, pid)) if pid in entries else MultiPolynomial.zero(variables)
            for pid in model.ids
        ]
    missing = [p for p in model.ids if p not in rows]
    if missing:
        raise ValidationError(f"no class given for fixed points {missing}", path)
    kind = kind or KIRWAN
    if kind not in (KIRWAN, GENERATING):
        raise ValidationError(f"unknown class kind {kind!r}", path)
    return GeneratingClassTable(model.ids, rows, variables, None, kind, dict(labels or {}))


def _tuple(obj, model, circle_variable, path):
    grading = CIRCLE
    values = obj
    if isinstance(obj, dict) and "values" in obj:
        grading = obj.get("grading", CIRCLE)
        values = obj["values"]
    if grading not in (CIRCLE, TORUS):
        raise ValidationError(f"unknown grading {grading!r}", _path(path, "grading"))
    if not isinstance(values, dict):
        raise ValidationError("tuple must map point ids to polynomials", path)
    variables = model.variables if grading == TORUS else (circle_variable,)
    for pid in values:
        if pid not in model.ids:
            raise ValidationError(f"unknown fixed point {pid!r}", _path(path, pid))
    parsed = {pid: _poly(v, variables, _path(path, pid)) for pid, v in values.items()}
    return CohomologyTuple.from_mapping(model.ids, variables, parsed)


def document_from_dict(doc, name="document", path="", digest="") -> InputDocument:
    if not isinstance(doc, dict):
        raise ValidationError("document must be a JSON object", path or "$")
    if not path:
        schema = doc.get("schema")
        if schema != SCHEMA_VERSION:
            raise ValidationError(f"unsupported schema {schema!r}; expected {SCHEMA_VERSION}", "schema")
    model = _model(doc, path)
    circle_variable = doc.get("circle_variable", "u")
    circle = None
    if "xi" in doc:
        circle = CircleSpec(_int_vector(doc["xi"], _path(path, "xi"), model.rank), circle_variable)
    tables = {}
    if "classes" in doc:
        tables["default"] = _table(
            _require(doc, "classes", dict, path), doc, model, circle_variable, _path(path, "classes"),
            doc.get("class_grading"), doc.get("class_kind"), doc.get("class_labels"),
        )
    for tname, spec in (doc.get("tables") or {}).items():
        tpath = _path(_path(path, "tables"), tname)
        if not isinstance(spec, dict):
            raise ValidationError("table must be an object", tpath)
        tables[tname] = _table(
            _require(spec, "classes", dict, tpath), doc, model, circle_variable, _path(tpath, "classes"),
            spec.get("grading"), spec.get("kind"), spec.get("labels"),
        )
    euler = None
    if "euler" in doc:
        epath = _path(path, "euler")
        raw = _require(doc, "euler", dict, path)
        missing = [p for p in model.ids if p not in raw]
        if missing:
            raise ValidationError(f"Euler row misses {missing}", epath)
        euler = {pid: _poly(raw[pid], (circle_variable,), _path(epath, pid)) for pid in model.ids}
    subtori = []
    for i, sub in enumerate(doc.get("subtori") or []):
        spath = _path(_path(path, "subtori"), i)
        sname = _require(sub, "name", str, spath)
        inner = document_from_dict(_require(sub, "model", dict, spath), sname, _path(spath, "model"))
        embedding = _require(sub, "embedding", dict, spath)
        for k, v in embedding.items():
            if k not in inner.model.ids:
                raise ValidationError(f"unknown sub-model point {k!r}", _path(_path(spath, "embedding"), k))
            if v not in model.ids:
                raise ValidationError(f"unknown ambient point {v!r}", _path(_path(spath, "embedding"), k))
        residual = _int_vector(_require(sub, "residual", list, spath), _path(spath, "residual"), model.rank)
        if not any(residual):
            raise ValidationError("residual form is zero", _path(spath, "residual"))
        subtori.append(Subtorus(sname, inner, dict(embedding), LinearForm(residual)))
    tuples = {}
    for tname, obj in (doc.get("tuples") or {}).items():
        tuples[tname] = _tuple(obj, model, circle_variable, _path(_path(path, "tuples"), tname))
    sign = doc.get("sign", FORMULA)
    if sign not in (FORMULA, KIRWAN):
        raise ValidationError(f"unknown sign convention {sign!r}", _path(path, "sign"))
    return InputDocument(doc.get("name", name), model, circle, tables, euler, subtori, tuples, sign, digest)


def load_document(path) -> InputDocument:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read document: {exc}", "$") from None
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"not valid JSON: {exc}", "$") from None
    return document_from_dict(data, path.stem, digest=hashlib.sha256(raw).hexdigest())


def load_tuple_file(path, document: InputDocument) -> CohomologyTuple:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read tuple file: {exc}", "$") from None
    if not isinstance(data, dict):
        raise ValidationError("tuple file must hold an object", "$")
    return _tuple(data, document.model, document.circle_variable, "$")


# -- rendering ---------------------------------------------------------------


def table_to_dict(table: GeneratingClassTable):
    """Serialized as {"classes": {base: {point: term list}}}; zero entries omitted."""
    return {
        "variables": list(table.variables),
        "kind": table.kind,
        "labels": {b: table.label(b) for b in table.ids},
        "classes": {
            base: {pid: v.to_term_list() for pid, v in zip(table.ids, row) if not v.is_zero()}
            for base, row in table.rows.items()
        },
    }


def render_table(table: GeneratingClassTable, euler=None) -> str:
    cells = [["class"] + list(table.ids)]
    if euler is not None:
        cells.append(["e"] + [str(e) for e in euler])
    for base in table.ids:
        cells.append([table.label(base)] + [str(v) for v in table.row(base)])
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() for row in cells)


def dumps(report) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"

