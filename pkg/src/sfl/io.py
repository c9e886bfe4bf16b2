"""JSON schemas for fields, maps, matrices and operators, plus built-in map names.

Built-in maps are written ``name:args`` with the field as the last argument,
``gfp:P`` or ``rational``::

    sgn:3,gfp:7            one:4,rational         per:3,gfp:5 / det:3,gfp:5
    sgn-nfix:2,3,4,gfp:7   (alpha, beta, n, field)
    ex-g:5,gfp:7           ex-g:5,3,gfp:7 (x = 3)
    ex-h:4,1,2,3,gfp:7     (n, x_1..x_{n-1}, field)
    ex-f4:3,gfp:7          (x, field)
"""

from __future__ import annotations

import json
import os

from .errors import SchemaError, SflError
from .field import Field
from .groupmap import GroupMap, ex_f4_map, ex_g_map, ex_h_map, one_map, sgn_map, sgn_nfix_map
from .linmap import TransformationMatrix
from .matrix import SquareMatrix
from .perm import Permutation, symmetric_group


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _expect(cond, path, msg):
    if not cond:
        raise SchemaError(path, msg)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def field_from_json(obj, path="$.field") -> Field:
    _expect(isinstance(obj, dict), path, "expected an object")
    kind = obj.get("kind")
    if kind == "gfp":
        p = obj.get("p")
        _expect(_is_int(p), path + ".p", "expected an integer")
        try:
            return Field.gf(p)
        except SflError as exc:
            raise SchemaError(path + ".p", str(exc)) from None
    if kind in ("rational", "rationals"):
        return Field.rationals()
    raise SchemaError(path + ".kind", f"expected 'gfp' or 'rational', got {kind!r}")


def element_from_json(F: Field, v, path):
    try:
        return F.from_json(v)
    except SflError as exc:
        raise SchemaError(path, str(exc)) from None


def map_to_json(f: GroupMap):
    return {"n": f.n, "field": f.field.describe(), "values": [f.field.to_json(v) for v in f.values]}


def map_from_json(obj, path="$") -> GroupMap:
    _expect(isinstance(obj, dict), path, "expected an object")
    n = obj.get("n")
    _expect(_is_int(n) and 1 <= n <= 8, path + ".n", "expected an integer in 1..8")
    F = field_from_json(obj.get("field"), path + ".field")
    vals = obj.get("values")
    _expect(isinstance(vals, list), path + ".values", "expected an array")
    order = symmetric_group(n).order
    _expect(len(vals) == order, path + ".values", f"expected {order} values, got {len(vals)}")
    parsed = [element_from_json(F, v, f"{path}.values[{k}]") for k, v in enumerate(vals)]
    for k, v in enumerate(parsed):
        _expect(v != 0, f"{path}.values[{k}]", "values must be nonzero")
    return GroupMap(n, F, parsed)


def matrix_from_json(obj, F: Field, path="$") -> SquareMatrix:
    if isinstance(obj, dict) and "rows" in obj:
        obj = obj["rows"]
        path += ".rows"
    _expect(isinstance(obj, list) and obj, path, "expected a non-empty array of rows")
    n = len(obj)
    rows = []
    for i, r in enumerate(obj):
        _expect(isinstance(r, list) and len(r) == n, f"{path}[{i}]", f"expected a row of length {n}")
        rows.append([element_from_json(F, v, f"{path}[{i}][{j}]") for j, v in enumerate(r)])
    return SquareMatrix._raw(F, rows)


def transformation_from_json(obj, F: Field, path="$") -> TransformationMatrix:
    _expect(isinstance(obj, dict), path, "expected an object")
    n = obj.get("n")
    _expect(_is_int(n) and n >= 1, path + ".n", "expected a positive integer")
    ent = obj.get("entries")
    N = n * n
    _expect(isinstance(ent, list) and len(ent) == N, path + ".entries", f"expected {N} rows")
    rows = []
    for i, r in enumerate(ent):
        _expect(isinstance(r, list) and len(r) == N, f"{path}.entries[{i}]", f"expected {N} entries")
        rows.append([element_from_json(F, v, f"{path}.entries[{i}][{j}]") for j, v in enumerate(r)])
    return TransformationMatrix(F, n, rows, coerce=False)


def permutation_from_text(text: str, path="$") -> Permutation:
    try:
        images = [int(x) for x in text.replace("[", "").replace("]", "").split(",") if x.strip()]
        return Permutation(images)
    except (ValueError, SflError) as exc:
        raise SchemaError(path, f"not a permutation in one-line notation: {exc}") from None


def vector_from_text(text: str, F: Field, path="$"):
    toks = text.replace("[", "").replace("]", "").split(",")
    try:
        return [_scalar(F, t) for t in toks if t.strip()]
    except (ValueError, SflError) as exc:
        raise SchemaError(path, f"bad vector entry: {exc}") from None


# -- built-ins -------------------------------------------------------------------


def _field_token(tok: str) -> Field:
    tok = tok.strip()
    if tok in ("rational", "rationals", "q", "Q"):
        return Field.rationals()
    if tok.startswith("gfp:"):
        try:
            return Field.gf(int(tok[4:]))
        except ValueError:
            pass
    raise SflError(f"bad field token {tok!r}; use gfp:P or rational")


def _scalar(F, tok):
    tok = tok.strip()
    if F.is_finite:
        return int(tok) % F.p
    return F(tok)


BUILTINS = ("sgn", "det", "one", "per", "sgn-nfix", "ex-g", "ex-h", "ex-f4")


def builtin_map(text: str) -> GroupMap:
    name, _, rest = text.partition(":")
    if name not in BUILTINS or not rest:
        raise SflError(f"unknown built-in map {text!r}")
    head, sep, tail = rest.rpartition(",gfp:")
    if sep:
        args, F = head.split(",") if head else [], _field_token("gfp:" + tail)
    else:
        parts = rest.split(",")
        args, F = parts[:-1], _field_token(parts[-1])
    try:
        if name in ("sgn", "det", "one", "per"):
            (n,) = (int(a) for a in args)
            return sgn_map(n, F) if name in ("sgn", "det") else one_map(n, F)
        if name == "sgn-nfix":
            a, b, n = args
            return sgn_nfix_map(int(n), F, _scalar(F, a), _scalar(F, b))
        if name == "ex-g":
            n = int(args[0])
            return ex_g_map(n, F, _scalar(F, args[1])) if len(args) > 1 else ex_g_map(n, F)
        if name == "ex-h":
            return ex_h_map(int(args[0]), F, [_scalar(F, x) for x in args[1:]])
        (x,) = args
        return ex_f4_map(F, _scalar(F, x))
    except ValueError as exc:
        raise SflError(f"bad arguments in {text!r}: {exc}") from None


def load_json_arg(text: str, what: str):
    """Inline JSON, or a path to a JSON file."""
    stripped = text.strip()
    if stripped[:1] in ("{", "["):
        source = stripped
    elif os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            source = fh.read()
    else:
        raise SflError(f"{what}: no such file {text!r}")
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"{what} is not valid JSON: {exc}") from None


def load_map(text: str) -> GroupMap:
    name = text.partition(":")[0]
    if name in BUILTINS and not os.path.exists(text):
        return builtin_map(text)
    return map_from_json(load_json_arg(text, "map"))
