"""JSON interchange for algebras, deformations and filtered algebras, and page reports.

Document layout (format "ainfss/1")::

    {"format": "ainfss/1", "field": "GF(101)" | "Q", "kind": "algebra" | "deformation" | "filtered",
     "s_type": 0, "unit": "1" | null,
     "basis": [["x", 0, 0], ...],
     "maps": [{"arity": 1, "order": 1, "inputs": ["x"], "output": [["y", "1"]]}, ...]}

``order`` is the ħ-order for deformations, the filtration shift for filtered
algebras and 0 for plain algebras.  Coefficients are canonical strings
("a/b" in lowest terms over Q, a residue in [0, p) over GF(p)).  The
canonical text has sorted keys and one basis or map entry per line, with maps
sorted by (arity, order, input positions) and outputs by basis position.
"""

from __future__ import annotations

import json
from typing import Union

from .ainf import AInfinityAlgebra, StructureError, _Structured
from .bigraded import BigradedSpace
from .deformations import FilteredAInfinity, FormalBigradedDeformation
from .linalg import Field

FORMAT = "ainfss/1"
PAGES_FORMAT = "ainfss-pages/1"
KINDS = ("algebra", "deformation", "filtered")

Structure = Union[AInfinityAlgebra, FormalBigradedDeformation, FilteredAInfinity]


class ParseError(ValueError):
    """Malformed text; the message carries the location."""


class ValidationError(ValueError):
    """Well-formed text that breaks a law of the target type."""

    def __init__(self, law: str, detail: str):
        self.law = law
        super().__init__(f"{law}: {detail}")


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _expect(cond: bool, law: str, detail: str) -> None:
    if not cond:
        raise ValidationError(law, detail)


def _keys(obj: dict, required: set[str], optional: set[str], where: str) -> None:
    _expect(isinstance(obj, dict), "schema", f"{where} must be an object")
    unknown = set(obj) - required - optional
    _expect(not unknown, "schema", f"unknown field(s) {sorted(unknown)} in {where}")
    missing = required - set(obj)
    _expect(not missing, "schema", f"missing field(s) {sorted(missing)} in {where}")


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse(text: str) -> Structure:
    """Parse and validate a structure document (Stasheff laws are left to ``check``)."""
    doc = _load_json(text)
    _keys(doc, {"format", "field", "kind", "s_type", "basis", "maps"}, {"unit"}, "document")
    _expect(doc["format"] == FORMAT, "schema", f"unsupported format {doc['format']!r}")
    _expect(isinstance(doc["field"], str), "schema", "field must be a string")
    try:
        F = Field.from_name(doc["field"])
    except ValueError as exc:
        raise ValidationError("field", str(exc)) from None
    kind = doc["kind"]
    _expect(kind in KINDS, "schema", f"kind must be one of {list(KINDS)}")
    s = doc["s_type"]
    _expect(_is_int(s) and s >= 0, "schema", "s_type must be a nonnegative integer")
    _expect(kind != "filtered" or s == 0, "bidegree", "filtered algebras are of 0-th type")
    _expect(isinstance(doc["basis"], list), "schema", "basis must be a list")
    basis = []
    for k, entry in enumerate(doc["basis"]):
        _expect(isinstance(entry, list) and len(entry) == 3 and isinstance(entry[0], str)
                and _is_int(entry[1]) and _is_int(entry[2]), "schema", f"basis entry {k} must be [name, p, q]")
        basis.append((entry[0], entry[1], entry[2]))
    try:
        V = BigradedSpace(F, basis)
    except ValueError as exc:
        raise ValidationError("names", str(exc)) from None
    unit = doc.get("unit")
    _expect(unit is None or (isinstance(unit, str) and unit in V.index), "names",
            f"unit {unit!r} is not a declared basis name")
    _expect(isinstance(doc["maps"], list), "schema", "maps must be a list")
    family: dict = {}
    for k, entry in enumerate(doc["maps"]):
        where = f"maps[{k}]"
        _keys(entry, {"arity", "order", "inputs", "output"}, set(), where)
        n, j = entry["arity"], entry["order"]
        _expect(_is_int(n) and n >= 1, "schema", f"{where}: arity must be a positive integer")
        _expect(_is_int(j) and j >= 0, "schema", f"{where}: order must be a nonnegative integer")
        _expect(kind != "algebra" or j == 0, "schema", f"{where}: plain algebras only have order 0")
        ins = entry["inputs"]
        _expect(isinstance(ins, list) and len(ins) == n and all(isinstance(x, str) for x in ins), "schema",
                f"{where}: inputs must be a list of {n} names")
        for x in ins:
            _expect(x in V.index, "names", f"{where}: undeclared basis name {x!r}")
        key = tuple(V.index[x] for x in ins)
        _expect(key not in family.get((n, j), {}), "schema", f"{where}: duplicate entry for inputs {ins}")
        out = entry["output"]
        _expect(isinstance(out, list), "schema", f"{where}: output must be a list")
        vec: dict = {}
        for term in out:
            _expect(isinstance(term, list) and len(term) == 2 and isinstance(term[0], str)
                    and isinstance(term[1], str), "schema", f"{where}: output terms are [name, coefficient]")
            _expect(term[0] in V.index, "names", f"{where}: undeclared basis name {term[0]!r}")
            try:
                c = F.parse(term[1])
            except ValueError as exc:
                raise ValidationError("coefficient", f"{where}: {exc}") from None
            _expect(c != 0, "coefficient", f"{where}: zero coefficients are not written")
            o = V.index[term[0]]
            _expect(o not in vec, "schema", f"{where}: output {term[0]!r} listed twice")
            vec[o] = c
        family.setdefault((n, j), {})[key] = vec
    try:
        if kind == "algebra":
            return AInfinityAlgebra(V, s, family, unit)
        if kind == "deformation":
            return FormalBigradedDeformation(V, s, family, unit)
        for (n, j), m in family.items():
            for key, vec in m.items():
                fil = sum(V.bideg[i][0] for i in key)
                for o in vec:
                    _expect(V.bideg[o][0] - fil == j, "filtration",
                            f"entry {[V.name(i) for i in key]} -> {V.name(o)} has filtration shift "
                            f"{V.bideg[o][0] - fil}, declared order {j}")
        merged: dict = {}
        for (n, j), m in family.items():
            acc = merged.setdefault(n, {})
            for key, vec in m.items():
                acc.setdefault(key, {}).update(vec)
        return FilteredAInfinity(V, merged, unit)
    except StructureError as exc:
        v = exc.report.violations[0]
        raise ValidationError(v.law, v.line()) from None


def _kind(X: Structure) -> str:
    if isinstance(X, FilteredAInfinity):
        return "filtered"
    if isinstance(X, FormalBigradedDeformation):
        return "deformation"
    if isinstance(X, AInfinityAlgebra):
        return "algebra"
    raise TypeError(f"cannot serialize {type(X).__name__}")


def to_document(X: Structure) -> dict:
    V = X.space
    F = V.field
    fam = X.components() if isinstance(X, FilteredAInfinity) else X.family
    maps = []
    for (n, j) in sorted(fam):
        for key in sorted(fam[(n, j)]):
            vec = fam[(n, j)][key]
            maps.append({
                "arity": n, "order": j, "inputs": [V.name(k) for k in key],
                "output": [[V.name(o), F.format(vec[o])] for o in sorted(vec)],
            })
    return {
        "format": FORMAT, "field": F.name, "kind": _kind(X), "s_type": X.s_type,
        "unit": X.unit_name, "basis": [[name, p, q] for name, p, q in V.basis], "maps": maps,
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _compact(x) -> str:
    return json.dumps(x, sort_keys=True, ensure_ascii=False, separators=(", ", ": "))


def serialize(X: Structure) -> str:
    """Canonical text: sorted keys, one basis entry and one map entry per line."""
    d = to_document(X)
    lines = ["{"]
    keys = sorted(d)
    for n, key in enumerate(keys):
        comma = "," if n < len(keys) - 1 else ""
        val = d[key]
        if key in ("basis", "maps"):
            if not val:
                lines.append(f'  "{key}": []{comma}')
                continue
            lines.append(f'  "{key}": [')
            lines += [f"    {_compact(v)}{',' if k < len(val) - 1 else ''}" for k, v in enumerate(val)]
            lines.append(f"  ]{comma}")
        else:
            lines.append(f'  "{key}": {_compact(val)}{comma}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load(path: str) -> Structure:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(X: Structure, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(X))


# --- page reports -------------------------------------------------------------------------


def _bd(text: str) -> tuple[int, int]:
    p, q = text.split(",")
    return int(p), int(q)


class PageInvariants:
    """A page rebuilt from a report: only the invariants compare_pages looks at."""

    def __init__(self, r: int, dims: dict, d_ranks: dict, mu_ranks: dict):
        self.r, self.dims, self.d_ranks, self.mu_ranks = r, dims, d_ranks, mu_ranks


def page_report(P, verdicts: dict | None = None) -> dict:
    out = {"format": PAGES_FORMAT}
    out.update(P.to_json())
    if verdicts:
        out["verdicts"] = verdicts
    return out


def is_page_report(text: str) -> bool:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return False
    return isinstance(doc, dict) and doc.get("format") == PAGES_FORMAT


def parse_page_report(text: str):
    from .pages import PageSet
    doc = _load_json(text)
    _keys(doc, {"format", "route", "start", "pages", "checks"}, {"e_inf", "verdicts"}, "page report")
    _expect(doc["format"] == PAGES_FORMAT, "schema", f"unsupported format {doc['format']!r}")
    try:
        pages = []
        for pg in doc["pages"]:
            _keys(pg, {"r", "dims", "d_ranks", "mu_ranks"}, set(), "page")
            mu = {}
            for k, v in pg["mu_ranks"].items():
                a, b = k.split("|")
                mu[(_bd(a), _bd(b))] = v
            pages.append(PageInvariants(pg["r"], {_bd(k): v for k, v in pg["dims"].items()},
                                        {_bd(k): v for k, v in pg["d_ranks"].items()}, mu))
        einf = {_bd(k): v for k, v in doc["e_inf"].items()} if "e_inf" in doc else None
    except (ValueError, AttributeError, TypeError) as exc:
        raise ValidationError("schema", f"malformed page report: {exc}") from None
    return PageSet(doc["start"], pages, doc["route"], einf)
