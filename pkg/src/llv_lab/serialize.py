"""Canonical JSON persistence for algebras.

Schema (all unknown fields rejected):

    {
      "half_dim": n,
      "degrees":  [{"deg": 0, "dim": 1, "labels": ["1"]}, ...],
      "products": [{"da": 2, "ia": 0, "db": 2, "ib": 0,
                    "out": [{"ic": 0, "coef": "1/1"}, ...]}, ...],
      "bb_form":  [["2/1", "0/1"], ...]
    }

Rationals are strings "p/q" with q > 0 and gcd(p, q) = 1 (so "2/4" or "3"
are rejected). Products are listed with canonical keys only (degree-0
factors implicit, (da, ia) <= (db, ib)), sorted strictly ascending, each
"out" sorted by ic with nonzero coefficients. The byte serialization is
sorted-key compact JSON plus a trailing newline, which makes
save(load(f)) == canonicalize(f) an identity on bytes.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

from .errors import MalformedAlgebraError, SchemaError
from .ring import GradedAlgebra, validate

_RATIONAL_RE = re.compile(r"^(-?[1-9][0-9]*|0)/([1-9][0-9]*)$")


def format_rational(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_rational(s, where: str) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL_RE.match(s):
        raise SchemaError(f"{where}: {s!r} is not a canonical rational \"p/q\"")
    p, q = s.split("/")
    f = Fraction(int(p), int(q))
    if f.numerator != int(p) or f.denominator != int(q):
        raise SchemaError(f"{where}: {s!r} is not reduced")
    return f


def _expect_keys(obj, keys: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    got = set(obj)
    if got != keys:
        unknown = sorted(got - keys)
        missing = sorted(keys - got)
        parts = []
        if unknown:
            parts.append(f"unknown fields {unknown}")
        if missing:
            parts.append(f"missing fields {missing}")
        raise SchemaError(f"{where}: " + ", ".join(parts))


def _expect_int(x, where: str, minimum=None) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise SchemaError(f"{where}: expected an integer")
    if minimum is not None and x < minimum:
        raise SchemaError(f"{where}: must be >= {minimum}")
    return x


def algebra_to_json_dict(alg: GradedAlgebra) -> dict:
    degrees = []
    for d in alg.degrees():
        degrees.append({"deg": d, "dim": alg.dim(d),
                        "labels": list(alg.labels[d // 2])})
    products = []
    for key in sorted(alg.products):
        da, ia, db, ib = key
        vec = alg.products[key]
        out = [{"ic": i, "coef": format_rational(c)}
               for i, c in enumerate(vec) if c]
        products.append({"da": da, "ia": ia, "db": db, "ib": ib, "out": out})
    bb = [[format_rational(x) for x in row] for row in alg.bb_form]
    return {"half_dim": alg.half_dim, "degrees": degrees,
            "products": products, "bb_form": bb}


def algebra_from_json_dict(obj) -> GradedAlgebra:
    _expect_keys(obj, {"half_dim", "degrees", "products", "bb_form"}, "top level")
    n = _expect_int(obj["half_dim"], "half_dim", minimum=1)
    degrees = obj["degrees"]
    if not isinstance(degrees, list) or len(degrees) != 2 * n + 1:
        raise SchemaError(f"degrees: expected a list of {2 * n + 1} entries")
    dims = []
    labels = []
    for k, entry in enumerate(degrees):
        where = f"degrees[{k}]"
        _expect_keys(entry, {"deg", "dim", "labels"}, where)
        if _expect_int(entry["deg"], where + ".deg") != 2 * k:
            raise SchemaError(f"{where}.deg: expected {2 * k}")
        dim = _expect_int(entry["dim"], where + ".dim", minimum=0)
        labs = entry["labels"]
        if (not isinstance(labs, list) or len(labs) != dim
                or not all(isinstance(s, str) for s in labs)):
            raise SchemaError(f"{where}.labels: expected {dim} strings")
        dims.append(dim)
        labels.append(labs)

    def dim_of(d):
        return dims[d // 2] if 0 <= d <= 4 * n and d % 2 == 0 else 0

    prods = {}
    prev_key = None
    if not isinstance(obj["products"], list):
        raise SchemaError("products: expected a list")
    for k, entry in enumerate(obj["products"]):
        where = f"products[{k}]"
        _expect_keys(entry, {"da", "ia", "db", "ib", "out"}, where)
        da = _expect_int(entry["da"], where + ".da")
        ia = _expect_int(entry["ia"], where + ".ia", minimum=0)
        db = _expect_int(entry["db"], where + ".db")
        ib = _expect_int(entry["ib"], where + ".ib", minimum=0)
        if da < 2 or db < 2 or da % 2 or db % 2:
            raise SchemaError(f"{where}: factor degrees must be even and >= 2 "
                              "(degree-0 products are implicit)")
        if (da, ia) > (db, ib):
            raise SchemaError(f"{where}: key not in canonical order (da, ia) <= (db, ib)")
        if da + db > 4 * n:
            raise SchemaError(f"{where}: output degree {da + db} exceeds {4 * n}")
        if ia >= dim_of(da) or ib >= dim_of(db):
            raise SchemaError(f"{where}: basis index out of range")
        key = (da, ia, db, ib)
        if prev_key is not None and key <= prev_key:
            raise SchemaError(f"{where}: products not sorted strictly ascending")
        prev_key = key
        out = entry["out"]
        if not isinstance(out, list) or not out:
            raise SchemaError(f"{where}.out: expected a non-empty list")
        vec = [Fraction(0)] * dim_of(da + db)
        prev_ic = -1
        for t, term in enumerate(out):
            moniker = f"{where}.out[{t}]"
            _expect_keys(term, {"ic", "coef"}, moniker)
            ic = _expect_int(term["ic"], moniker + ".ic", minimum=0)
            if ic >= dim_of(da + db):
                raise SchemaError(f"{moniker}.ic: index {ic} out of range")
            if ic <= prev_ic:
                raise SchemaError(f"{moniker}.ic: not strictly ascending")
            prev_ic = ic
            coef = parse_rational(term["coef"], moniker + ".coef")
            if coef == 0:
                raise SchemaError(f"{moniker}.coef: zero coefficients are omitted")
            vec[ic] = coef
        prods[key] = tuple(vec)

    bb = obj["bb_form"]
    b2 = dim_of(2)
    if not isinstance(bb, list) or len(bb) != b2:
        raise SchemaError(f"bb_form: expected {b2} rows")
    form = []
    for i, row in enumerate(bb):
        if not isinstance(row, list) or len(row) != b2:
            raise SchemaError(f"bb_form[{i}]: expected {b2} entries")
        form.append([parse_rational(x, f"bb_form[{i}][{j}]")
                     for j, x in enumerate(row)])

    alg = GradedAlgebra.create(n, dims, labels, prods, form)
    report = validate(alg)
    if not report.ok:
        first = report.failures[0]
        raise MalformedAlgebraError(
            f"algebra fails validation: [{first.kind}] {first.message} "
            f"(witness {first.witness})")
    return alg


def dumps_algebra(alg: GradedAlgebra) -> str:
    return json.dumps(algebra_to_json_dict(alg), sort_keys=True,
                      separators=(",", ":")) + "\n"


def loads_algebra(text: str) -> GradedAlgebra:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return algebra_from_json_dict(obj)


def save_algebra(alg: GradedAlgebra, path) -> None:
    Path(path).write_text(dumps_algebra(alg), encoding="utf-8")


def load_algebra(path) -> GradedAlgebra:
    return loads_algebra(Path(path).read_text(encoding="utf-8"))


def canonicalize(text: str) -> str:
    """Parse, validate and re-emit in canonical bytes."""
    return dumps_algebra(loads_algebra(text))
