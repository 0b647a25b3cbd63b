"""JSON encodings of forms, Laurent polynomials and correspondences.

Scalars are always strings ("3", "-1/2") so that no value passes through a
float.  Parse errors carry a JSON-path style location.
"""

from __future__ import annotations

import json
from pathlib import Path

from .corr import GM, AffineModel, Correspondence, validate
from .exactalg.fields import BaseField, FieldError, parse_field
from .exactalg.matrix import Matrix
from .exactalg.poly import LaurentPoly, LaurentRing
from .quadform import GWClass, QuadSpace


class InputError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def load_document(arg: str, path: str = "$"):
    """Parse ``arg`` as inline JSON, or else read it as a file path."""
    text = arg
    stripped = arg.lstrip()
    if not stripped.startswith(("{", "[")):
        p = Path(arg)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(path, f"cannot read {arg!r}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(path, f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None


# scalars and fields


def scalar_to_json(x) -> str:
    return str(x)


def scalar_from_json(F: BaseField, x, path: str):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise InputError(path, f"expected a scalar string such as \"3\" or \"-1/2\", got {json.dumps(x)}")
    try:
        return F(str(x))
    except (ValueError, ZeroDivisionError, FieldError) as e:
        raise InputError(path, f"cannot read {x!r} as an element of {F}: {e}") from None


def field_from_json(doc, default: BaseField | None, path: str) -> BaseField:
    if doc is None:
        if default is None:
            raise InputError(path, "no field given (add a \"field\" entry or pass --field)")
        return default
    try:
        return parse_field(doc)
    except (FieldError, KeyError, ValueError, TypeError) as e:
        raise InputError(path, f"bad field descriptor: {e}") from None


def _matrix_rows(doc, path: str) -> list:
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise InputError(path, "expected an array of arrays")
    n = len(doc)
    for i, r in enumerate(doc):
        if len(r) != n:
            raise InputError(f"{path}[{i}]", f"row has {len(r)} entries, expected {n} (square matrix)")
    return doc


# forms


def form_to_json(Q: QuadSpace) -> dict:
    return {
        "field": Q.field.descriptor(),
        "gram": [[scalar_to_json(x) for x in row] for row in Q.gram.rows],
    }


def form_from_json(doc, default_field: BaseField | None = None, path: str = "$") -> QuadSpace:
    if not isinstance(doc, dict):
        raise InputError(path, "expected an object with a \"gram\" entry")
    F = field_from_json(doc.get("field"), default_field, f"{path}.field")
    if "gram" not in doc:
        raise InputError(path, "missing \"gram\"")
    rows = _matrix_rows(doc["gram"], f"{path}.gram")
    vals = [[scalar_from_json(F, x, f"{path}.gram[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    G = Matrix(F, vals, len(vals))
    if not G.is_symmetric():
        raise InputError(f"{path}.gram", "invariant violated: gram is not symmetric")
    try:
        return QuadSpace(F, G)
    except ValueError as e:
        raise InputError(f"{path}.gram", f"invariant violated: {e}") from None


def class_to_json(c: GWClass) -> dict:
    return {"pos": form_to_json(c.pos), "neg": form_to_json(c.neg), "virtual_rank": c.rank}


# Laurent polynomials and correspondences


def laurent_to_json(p: LaurentPoly) -> dict:
    if p.is_zero():
        return {"val": 0, "coeffs": []}
    return {"val": p.val, "coeffs": [scalar_to_json(c) for c in p.body.coeffs]}


def laurent_from_json(F: BaseField, doc, path: str) -> LaurentPoly:
    if isinstance(doc, (str, int)) and not isinstance(doc, bool):
        return LaurentPoly.constant(F, scalar_from_json(F, doc, path))
    if not isinstance(doc, dict) or "coeffs" not in doc:
        raise InputError(path, "expected {\"val\": <int>, \"coeffs\": [scalars]} or a scalar string")
    val = doc.get("val", 0)
    if isinstance(val, bool) or not isinstance(val, int):
        raise InputError(f"{path}.val", "expected an integer")
    coeffs = doc["coeffs"]
    if not isinstance(coeffs, list):
        raise InputError(f"{path}.coeffs", "expected an array")
    return LaurentPoly(F, [scalar_from_json(F, c, f"{path}.coeffs[{i}]") for i, c in enumerate(coeffs)], val)


def _entry_to_json(x):
    return laurent_to_json(x) if isinstance(x, LaurentPoly) else scalar_to_json(x)


def corr_to_json(C: Correspondence) -> dict:
    out = {
        "field": C.field.descriptor(),
        "source": C.source.value,
        "target": C.target.value,
        "rank": C.rank,
        "gram": [[_entry_to_json(x) for x in row] for row in C.gram.rows],
    }
    if C.action is not None:
        out["action"] = [[_entry_to_json(x) for x in row] for row in C.action.rows]
    return out


def corr_from_json(doc, default_field: BaseField | None = None, path: str = "$") -> Correspondence:
    if not isinstance(doc, dict):
        raise InputError(path, "expected a correspondence object")
    F = field_from_json(doc.get("field"), default_field, f"{path}.field")
    models = {}
    for key in ("source", "target"):
        try:
            models[key] = AffineModel(doc.get(key))
        except ValueError:
            raise InputError(f"{path}.{key}", "expected \"pt\" or \"gm\"") from None
    src = models["source"]
    ring = src.ring(F)

    def entry(x, p):
        if src is GM:
            return laurent_from_json(F, x, p)
        return scalar_from_json(F, x, p)

    def matrix(key):
        rows = _matrix_rows(doc[key], f"{path}.{key}")
        vals = [[entry(x, f"{path}.{key}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
        return Matrix(ring, vals, len(vals))

    if "gram" not in doc:
        raise InputError(path, "missing \"gram\"")
    G = matrix("gram")
    U = matrix("action") if "action" in doc else None
    if "rank" in doc and doc["rank"] != G.nrows:
        raise InputError(f"{path}.rank", f"rank {doc['rank']} does not match the {G.nrows}x{G.nrows} gram")
    C = Correspondence(F, src, models["target"], G, U)
    rep = validate(C)
    if not rep.valid:
        raise InputError(path, "invariant violated: " + "; ".join(rep.violations))
    return C


def laurent_ring(F: BaseField) -> LaurentRing:
    return LaurentRing(F)
