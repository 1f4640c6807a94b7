"""Versioned JSON interchange ("scx/1 ...") with strict field checking.

Unknown fields are rejected, not ignored: documents feed theorem-oracle
suites, and silent schema drift would poison their verdicts.  All
rationals travel as "p/q" strings; Laurent coefficients use the text
grammar of the scalar layer ("T^-2+1+T^3").
"""

from __future__ import annotations

import json
from fractions import Fraction

from .complexes import FIELD_F2, FIELD_NOVIKOV, FilteredChainComplex, Generator
from .fields import INF, LaurentPoly, format_extended, parse_extended
from .filtration import Barcode
from .morse import CorrespondenceData, EquivariantOrbitData, MorseData, NovikovMorseData
from .scomplex import SComplex, SMorphism

SCHEMA_COMPLEX = "scx/1 complex"
SCHEMA_SCOMPLEX = "scx/1 scomplex"
SCHEMA_SMAP = "scx/1 smap"
SCHEMA_MORSE = "scx/1 morse"
SCHEMA_ORBIT = "scx/1 orbit"
SCHEMA_CORR = "scx/1 corr"
SCHEMA_NOVIKOV_MORSE = "scx/1 novikov-morse"
SCHEMA_BARCODE = "scx/1 barcode"
SCHEMA_PAGES = "scx/1 pages"


class SchemaError(ValueError):
    """Malformed document: wrong fields, types, or version tag."""


def _require_fields(obj: dict, required: tuple, optional: tuple = ()) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"expected an object, got {type(obj).__name__}")
    missing = [f for f in required if f not in obj]
    if missing:
        raise SchemaError(f"missing fields: {', '.join(missing)}")
    unknown = [f for f in obj if f not in required and f not in optional]
    if unknown:
        raise SchemaError(f"unknown fields rejected: {', '.join(unknown)}")


_RATIONAL_RE = None


def _rational(text) -> Fraction:
    global _RATIONAL_RE
    if _RATIONAL_RE is None:
        import re

        _RATIONAL_RE = re.compile(r"-?\d+(/\d+)?$")
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise SchemaError(f"rationals are 'p/q' strings, got {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise SchemaError(f"bad rational {text!r}: zero denominator") from None


def _int(value, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise SchemaError(f"{what} must be an integer, got {value!r}")
    return value


def _str(value, what: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{what} must be a string, got {value!r}")
    return value


def format_rational(x: Fraction) -> str:
    return format_extended(x)


# ---------------------------------------------------------------------------
# generators and entry arrays


def _gen_from(obj: dict) -> Generator:
    _require_fields(obj, ("id", "degree", "level"))
    return Generator(
        _str(obj["id"], "id"), _int(obj["degree"], "degree"), _rational(obj["level"])
    )


def _gen_to(g: Generator) -> dict:
    return {"id": g.gid, "degree": g.degree, "level": format_rational(g.level)}


def _coeff_from(text, field: str):
    if field == FIELD_F2:
        if text != "1":
            raise SchemaError(f"F2 coefficients are '1', got {text!r}")
        return 1
    try:
        return LaurentPoly.parse(_str(text, "coeff"))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def _coeff_to(c, field: str) -> str:
    return "1" if field == FIELD_F2 else str(c)


def _entries_from(arr, field: str) -> list:
    if not isinstance(arr, list):
        raise SchemaError("entry arrays must be lists")
    out = []
    for item in arr:
        _require_fields(item, ("from", "to", "coeff"))
        out.append(
            (_str(item["from"], "from"), _str(item["to"], "to"),
             _coeff_from(item["coeff"], field))
        )
    return out


def _entries_to(entries: dict, field: str) -> list:
    return [
        {"from": f, "to": t, "coeff": _coeff_to(c, field)}
        for (f, t), c in sorted(entries.items())
    ]


# ---------------------------------------------------------------------------
# complexes


def complex_to_doc(c: FilteredChainComplex) -> dict:
    doc = {
        "schema": SCHEMA_COMPLEX,
        "field": c.field,
        "generators": [_gen_to(g) for g in c.generators],
        "differential": _entries_to(dict(c._diff), c.field),
    }
    if c.deck:
        doc["deck_shift"] = 1
    return doc


def complex_from_doc(obj: dict, *, unchecked: bool = False) -> FilteredChainComplex:
    _require_fields(obj, ("schema", "field", "generators", "differential"),
                    ("deck_shift",))
    if obj["schema"] != SCHEMA_COMPLEX:
        raise SchemaError(f"expected {SCHEMA_COMPLEX}, got {obj['schema']!r}")
    field = obj["field"]
    if field not in (FIELD_F2, FIELD_NOVIKOV):
        raise SchemaError(f"field must be 'F2' or 'novikov', got {field!r}")
    deck = False
    if "deck_shift" in obj:
        if field != FIELD_NOVIKOV:
            raise SchemaError("deck_shift applies to novikov complexes only")
        if obj["deck_shift"] != 1:
            raise SchemaError("only deck shift 1 is supported")
        deck = True
    gens = [_gen_from(g) for g in _list(obj["generators"], "generators")]
    entries = _entries_from(obj["differential"], field)
    return FilteredChainComplex(field, gens, entries, deck=deck, unchecked=unchecked)


def _list(value, what: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{what} must be a list")
    return value


# ---------------------------------------------------------------------------
# S-complexes and morphisms


def scomplex_to_doc(s: SComplex) -> dict:
    doc = {
        "schema": SCHEMA_SCOMPLEX,
        "field": s.field,
        "generators": [_gen_to(g) for g in s.irr.generators],
        "differential": _entries_to(dict(s.irr._diff), s.field),
        "reducible": [_gen_to(g) for g in s.red],
        "u": _entries_to(s.u, s.field),
        "delta1": _entries_to(s.delta1, s.field),
        "delta2": _entries_to(s.delta2, s.field),
    }
    if s.chamber is not None:
        doc["chamber"] = format_rational(s.chamber)
    return doc


def scomplex_from_doc(obj: dict, *, unchecked: bool = False) -> SComplex:
    _require_fields(
        obj,
        ("schema", "field", "generators", "differential", "reducible", "u",
         "delta1", "delta2"),
        ("chamber",),
    )
    if obj["schema"] != SCHEMA_SCOMPLEX:
        raise SchemaError(f"expected {SCHEMA_SCOMPLEX}, got {obj['schema']!r}")
    field = obj["field"]
    if field not in (FIELD_F2, FIELD_NOVIKOV):
        raise SchemaError(f"field must be 'F2' or 'novikov', got {field!r}")
    gens = [_gen_from(g) for g in _list(obj["generators"], "generators")]
    irr = FilteredChainComplex(
        field, gens, _entries_from(obj["differential"], field),
        deck=(field == FIELD_NOVIKOV), unchecked=True,
    )
    chamber = _rational(obj["chamber"]) if "chamber" in obj else None
    return SComplex(
        irr,
        [_gen_from(g) for g in _list(obj["reducible"], "reducible")],
        u=_entries_from(obj["u"], field),
        delta1=_entries_from(obj["delta1"], field),
        delta2=_entries_from(obj["delta2"], field),
        chamber=chamber,
        unchecked=unchecked,
    )


def smap_to_doc(m: SMorphism) -> dict:
    return {
        "schema": SCHEMA_SMAP,
        "degree": m.degree,
        "level_shift": format_extended(m.level_shift),
        "lambda": _entries_to(m.lam, m.field),
        "eta": _entries_to(m.eta, m.field),
        "Delta1": _entries_to(m.Delta1, m.field),
        "Delta2": _entries_to(m.Delta2, m.field),
    }


def smap_from_doc(obj: dict, source: SComplex, target: SComplex,
                  *, unchecked: bool = False) -> SMorphism:
    _require_fields(
        obj, ("schema", "degree", "level_shift", "lambda", "eta", "Delta1", "Delta2")
    )
    if obj["schema"] != SCHEMA_SMAP:
        raise SchemaError(f"expected {SCHEMA_SMAP}, got {obj['schema']!r}")
    shift = parse_extended(_str(obj["level_shift"], "level_shift"))
    field = source.field
    return SMorphism(
        source, target, _int(obj["degree"], "degree"),
        lam=_entries_from(obj["lambda"], field),
        eta=_entries_from(obj["eta"], field),
        Delta1=_entries_from(obj["Delta1"], field),
        Delta2=_entries_from(obj["Delta2"], field),
        level_shift=shift,
        unchecked=unchecked,
    )


# ---------------------------------------------------------------------------
# Morse-side documents


def _flows_from(arr) -> dict:
    flows = {}
    for item in _list(arr, "flow counts"):
        _require_fields(item, ("from", "to", "count"))
        count = item["count"]
        if count not in (0, 1):
            raise SchemaError(f"F2 counts are 0 or 1, got {count!r}")
        flows[(_str(item["from"], "from"), _str(item["to"], "to"))] = count
    return flows


def _flows_to(flows: dict) -> list:
    return [
        {"from": f, "to": t, "count": v & 1} for (f, t), v in sorted(flows.items())
    ]


def _points_from(arr, what: str) -> list:
    out = []
    for item in _list(arr, what):
        _require_fields(item, ("id", "index", "value"))
        out.append(
            (_str(item["id"], "id"), _int(item["index"], "index"),
             _rational(item["value"]))
        )
    return out


def _points_to(points) -> list:
    return [
        {"id": pid, "index": idx, "value": format_rational(Fraction(val))}
        for pid, idx, val in points
    ]


def morse_to_doc(m: MorseData) -> dict:
    return {
        "schema": SCHEMA_MORSE,
        "points": _points_to(m.points),
        "flows": _flows_to(m.flows),
    }


def morse_from_doc(obj: dict) -> MorseData:
    _require_fields(obj, ("schema", "points", "flows"))
    if obj["schema"] != SCHEMA_MORSE:
        raise SchemaError(f"expected {SCHEMA_MORSE}, got {obj['schema']!r}")
    return MorseData(_points_from(obj["points"], "points"), _flows_from(obj["flows"]))


def orbit_to_doc(e: EquivariantOrbitData) -> dict:
    doc = {
        "schema": SCHEMA_ORBIT,
        "free": _points_to(e.free),
        "fixed": _points_to(e.fixed),
        "d": _flows_to(e.d),
        "u": _flows_to(e.u),
        "delta1": _flows_to(e.delta1),
        "delta2": _flows_to(e.delta2),
    }
    if e.chamber is not None:
        doc["chamber"] = format_rational(e.chamber)
    return doc


def orbit_from_doc(obj: dict) -> EquivariantOrbitData:
    _require_fields(
        obj, ("schema", "free", "fixed", "d", "u", "delta1", "delta2"), ("chamber",)
    )
    if obj["schema"] != SCHEMA_ORBIT:
        raise SchemaError(f"expected {SCHEMA_ORBIT}, got {obj['schema']!r}")
    return EquivariantOrbitData(
        free=_points_from(obj["free"], "free"),
        fixed=_points_from(obj["fixed"], "fixed"),
        d=_flows_from(obj["d"]),
        u=_flows_from(obj["u"]),
        delta1=_flows_from(obj["delta1"]),
        delta2=_flows_from(obj["delta2"]),
        chamber=_rational(obj["chamber"]) if "chamber" in obj else None,
    )


def corr_to_doc(c: CorrespondenceData) -> dict:
    if isinstance(c.source, SComplex):
        source = scomplex_to_doc(c.source)
        target = scomplex_to_doc(c.target)
    else:
        source = complex_to_doc(c.source)
        target = complex_to_doc(c.target)
    return {
        "schema": SCHEMA_CORR,
        "source": source,
        "target": target,
        "shift": c.shift,
        "counts": _flows_to(c.counts),
        "u_counts": _flows_to(c.u_counts),
        "delta1_counts": _flows_to(c.delta1_counts),
        "delta2_counts": _flows_to(c.delta2_counts),
    }


def corr_from_doc(obj: dict) -> CorrespondenceData:
    _require_fields(
        obj,
        ("schema", "source", "target", "shift", "counts"),
        ("u_counts", "delta1_counts", "delta2_counts"),
    )
    if obj["schema"] != SCHEMA_CORR:
        raise SchemaError(f"expected {SCHEMA_CORR}, got {obj['schema']!r}")

    def load_side(side):
        schema = side.get("schema") if isinstance(side, dict) else None
        if schema == SCHEMA_COMPLEX:
            return complex_from_doc(side)
        if schema == SCHEMA_SCOMPLEX:
            return scomplex_from_doc(side)
        raise SchemaError("corr source/target must embed a complex or scomplex")

    return CorrespondenceData(
        source=load_side(obj["source"]),
        target=load_side(obj["target"]),
        counts=_flows_from(obj["counts"]),
        shift=_int(obj["shift"], "shift"),
        u_counts=_flows_from(obj.get("u_counts", [])),
        delta1_counts=_flows_from(obj.get("delta1_counts", [])),
        delta2_counts=_flows_from(obj.get("delta2_counts", [])),
    )


def novikov_morse_to_doc(m: NovikovMorseData) -> dict:
    return {
        "schema": SCHEMA_NOVIKOV_MORSE,
        "lifts": _points_to(m.lifts),
        "counts": [
            {"from": f, "to": t, "coeff": str(p)}
            for (f, t), p in sorted(m.counts.items())
        ],
    }


def novikov_morse_from_doc(obj: dict) -> NovikovMorseData:
    _require_fields(obj, ("schema", "lifts", "counts"))
    if obj["schema"] != SCHEMA_NOVIKOV_MORSE:
        raise SchemaError(f"expected {SCHEMA_NOVIKOV_MORSE}, got {obj['schema']!r}")
    counts = {}
    for item in _list(obj["counts"], "counts"):
        _require_fields(item, ("from", "to", "coeff"))
        counts[(item["from"], item["to"])] = _coeff_from(item["coeff"], FIELD_NOVIKOV)
    return NovikovMorseData(_points_from(obj["lifts"], "lifts"), counts)


# ---------------------------------------------------------------------------
# outputs


def barcode_to_doc(bc: Barcode) -> dict:
    return {
        "schema": SCHEMA_BARCODE,
        "bars": [
            {
                "degree": b.degree,
                "birth": format_rational(b.birth),
                "death": "inf" if b.death is INF else format_rational(b.death),
            }
            for b in bc.bars
        ],
        "essential": {str(q): n for q, n in sorted(bc.essential.items())},
    }


def pages_to_doc(pages, reconstruction=None) -> dict:
    out_pages = []
    for page in pages:
        cells = [
            {"p": p, "q": q, "dim": d}
            for (p, q), d in sorted(page.cells.items())
            if d
        ]
        diffs = []
        for (p, q), m in sorted(page.differentials.items()):
            if not m.data:
                continue
            diffs.append(
                {
                    "p": p,
                    "q": q,
                    "entries": [
                        {"row": i, "col": j,
                         "coeff": "1" if isinstance(v, int) else str(v)}
                        for (i, j, v) in m.entries()
                    ],
                }
            )
        out_pages.append({"r": page.r, "cells": cells, "differentials": diffs})
    doc = {"schema": SCHEMA_PAGES, "pages": out_pages}
    if reconstruction is not None:
        doc["reconstruction"] = {
            "stable": reconstruction.stable,
            "match": reconstruction.match,
            "homology": {str(n): d for n, d in sorted(reconstruction.homology_dims.items())},
            "graded": {str(n): d for n, d in sorted(reconstruction.graded_dims.items())},
        }
    return doc


# ---------------------------------------------------------------------------
# dispatch


LOADERS = {
    SCHEMA_COMPLEX: complex_from_doc,
    SCHEMA_SCOMPLEX: scomplex_from_doc,
    SCHEMA_MORSE: morse_from_doc,
    SCHEMA_ORBIT: orbit_from_doc,
    SCHEMA_CORR: corr_from_doc,
    SCHEMA_NOVIKOV_MORSE: novikov_morse_from_doc,
}


def load_document(obj: dict):
    """Dispatch on the schema tag; returns the typed object."""
    if not isinstance(obj, dict) or "schema" not in obj:
        raise SchemaError("document has no schema tag")
    schema = obj["schema"]
    if schema == SCHEMA_SCOMPLEX:
        return scomplex_from_doc(obj)
    if schema in LOADERS:
        return LOADERS[schema](obj)
    raise SchemaError(f"unsupported schema {schema!r}")


def dumps(doc: dict) -> str:
    """Canonical byte-stable serialization."""
    return json.dumps(doc, sort_keys=True, separators=(",", ": "), indent=1) + "\n"


def loads(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None
