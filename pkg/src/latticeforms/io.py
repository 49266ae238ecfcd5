"""JSON file formats.

Lattice      {"gram": [[int, ...], ...], "name": str (optional)}
Sublattice   {"basis": [[int, ...], ...]}        one basis vector per row
Grassmannian {"vectors": [[int|"p/q", ...], ...]}  spanning vectors of z
Table        {"elementary_divisors": [...], "max_norm": "p/q",
              "entries": [{"coset": [...], "n": "p/q", "re": x, "im": y}
                          or {"coset": [...], "n": "p/q", "value": int}, ...]}

Rationals are always written as strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .discriminant import discriminant_group
from .errors import SchemaError
from .lattice import EvenLattice, Sublattice, sublattice, transpose, validate_lattice
from .theta import CoefficientTable


def dumps(doc: Any) -> str:
    """Canonical compact JSON; key order is insertion order."""
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True, allow_nan=True)


def frac_str(x) -> str:
    return str(Fraction(x))


def parse_fraction(text, where: str = "value") -> Fraction:
    if isinstance(text, bool):
        raise SchemaError(f"{where}: expected a rational, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(f"{where}: expected an integer or a 'p/q' string, got {text!r}")


def read_json(path) -> Any:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _int_matrix(obj, where: str) -> list[list[int]]:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise SchemaError(f"{where}: expected a list of integer rows")
    for i, row in enumerate(obj):
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise SchemaError(f"{where}[{i}][{j}]: expected an integer, got {x!r}")
    return obj


def lattice_from_json(doc: Any, where: str = "lattice") -> EvenLattice:
    if not isinstance(doc, dict) or "gram" not in doc:
        raise SchemaError(f"{where}: missing field 'gram'")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SchemaError(f"{where}.name: expected a string")
    return validate_lattice(_int_matrix(doc["gram"], f"{where}.gram"), name)


def lattice_to_json(L: EvenLattice) -> dict:
    doc: dict = {"gram": [list(r) for r in L.gram]}
    if L.name is not None:
        doc["name"] = L.name
    return doc


def parse_lattice_file(path) -> EvenLattice:
    return lattice_from_json(read_json(path), str(path))


def sublattice_from_json(L: EvenLattice, doc: Any, where: str = "sublattice") -> Sublattice:
    if not isinstance(doc, dict) or "basis" not in doc:
        raise SchemaError(f"{where}: missing field 'basis'")
    rows = _int_matrix(doc["basis"], f"{where}.basis")
    if len(rows) != L.rank or any(len(r) != L.rank for r in rows):
        raise SchemaError(f"{where}.basis: expected {L.rank} vectors of length {L.rank}")
    return sublattice(L, transpose(rows))


def sublattice_to_json(M: Sublattice) -> dict:
    return {"basis": [list(r) for r in transpose(M.basis)]}


def zbasis_from_json(doc: Any, where: str = "z-basis") -> list[list[Fraction]]:
    if not isinstance(doc, dict) or "vectors" not in doc or not isinstance(doc["vectors"], list):
        raise SchemaError(f"{where}: missing list field 'vectors'")
    out = []
    for i, v in enumerate(doc["vectors"]):
        if not isinstance(v, list):
            raise SchemaError(f"{where}.vectors[{i}]: expected a list")
        out.append([parse_fraction(x, f"{where}.vectors[{i}][{j}]") for j, x in enumerate(v)])
    return out


def table_to_json(t: CoefficientTable) -> dict:
    entries = []
    for (lam, n), a in sorted(t.entries.items()):
        e: dict = {"coset": list(lam), "n": frac_str(n)}
        if isinstance(a, int) or (isinstance(a, Fraction) and a.denominator == 1):
            e["value"] = int(a)
        else:
            z = complex(a)
            e["re"], e["im"] = z.real, z.imag
        entries.append(e)
    return {"elementary_divisors": list(t.divisors), "max_norm": frac_str(t.max_norm), "entries": entries}


def table_from_json(doc: Any, L: EvenLattice | None = None, where: str = "table") -> CoefficientTable:
    """Parse a table; with ``L`` given, divisors are checked and indices validated."""
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    for key in ("elementary_divisors", "max_norm", "entries"):
        if key not in doc:
            raise SchemaError(f"{where}: missing field '{key}'")
    divs = doc["elementary_divisors"]
    if not isinstance(divs, list) or not all(isinstance(d, int) and d > 1 for d in divs):
        raise SchemaError(f"{where}.elementary_divisors: expected integers > 1")
    divs = tuple(divs)
    max_norm = parse_fraction(doc["max_norm"], f"{where}.max_norm")
    disc = None
    if L is not None:
        disc = discriminant_group(L)
        if disc.divisors != divs:
            raise SchemaError(f"{where}.elementary_divisors: {list(divs)} do not match lattice {list(disc.divisors)}")
    entries = {}
    if not isinstance(doc["entries"], list):
        raise SchemaError(f"{where}.entries: expected a list")
    for i, e in enumerate(doc["entries"]):
        w = f"{where}.entries[{i}]"
        if not isinstance(e, dict) or "coset" not in e or "n" not in e:
            raise SchemaError(f"{w}: expected an object with 'coset' and 'n'")
        lam = e["coset"]
        if not isinstance(lam, list) or len(lam) != len(divs) or not all(isinstance(x, int) for x in lam):
            raise SchemaError(f"{w}.coset: expected {len(divs)} integers")
        lam = tuple(x % d for x, d in zip(lam, divs))
        n = parse_fraction(e["n"], f"{w}.n")
        if "value" in e:
            if isinstance(e["value"], bool) or not isinstance(e["value"], int):
                raise SchemaError(f"{w}.value: expected an integer")
            val = e["value"]
        elif "re" in e:
            try:
                val = complex(float(e["re"]), float(e.get("im", 0.0)))
            except (TypeError, ValueError):
                raise SchemaError(f"{w}: 're'/'im' must be numbers") from None
        else:
            raise SchemaError(f"{w}: needs 'value' or 're'/'im'")
        entries[(lam, n)] = val
    t = CoefficientTable(divs, max_norm, entries, disc)
    t.validate()
    return t
