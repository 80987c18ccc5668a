"""Reading and writing presentation documents.

A document is a JSON object holding one presentation plus optional sign
choices, strip triples and render options.  Exact numbers are written as
"p/q" strings; :func:`emit` produces the canonical form, so
``emit(parse(text)) == text`` for any text that :func:`emit` wrote.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import List

import jsonschema

from .cartography import Presentation
from .cuts import FocusError, FocusSet, SignChoice
from .region import Region, RegionError, ValidationReport, validate
from .strips import AdmissibleTriple, HalfStrip, StripError
from .zaffine import as_point, rat_str

VERSION = "1"


class DocumentError(ValueError):
    """Input error with the location of the offending field."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class InvalidRegion(DocumentError):
    """The document is well formed but its region breaks the region laws."""

    def __init__(self, report: ValidationReport, region: Region):
        self.report = report
        self.region = region
        kinds = ", ".join(report.kinds())
        super().__init__(f"region is not valid ({kinds})", "presentation.region")


@dataclass
class Document:
    presentation: Presentation
    sign_choices: List[SignChoice] = field(default_factory=list)
    triples: List[AdmissibleTriple] = field(default_factory=list)
    render: dict = field(default_factory=dict)
    version: str = VERSION


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("vatcarto").joinpath("data/document.schema.json").read_text()
    return json.loads(text)


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def parse(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from exc
    return from_data(data)


def from_data(data) -> Document:
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise DocumentError(err.message, _path(err.absolute_path) or "document")
    p = data["presentation"]
    try:
        region = Region.from_json(p["region"])
    except (RegionError, ValueError) as exc:
        raise DocumentError(str(exc), "presentation.region") from exc
    report = validate(region)
    if not report.ok:
        raise InvalidRegion(report, region)

    pts, mult = [], []
    for i, f in enumerate(p["focus"]):
        try:
            pt = as_point((f["x"], f["y"]))
        except (ValueError, TypeError) as exc:
            raise DocumentError(str(exc), f"presentation.focus[{i}]") from exc
        if not region.in_interior(pt):
            raise DocumentError(
                f"focus value ({rat_str(pt[0])}, {rat_str(pt[1])}) must lie in the interior of the region",
                f"presentation.focus[{i}]")
        pts.append(pt)
        mult.append(int(f.get("r", 1)))
    n = len(pts)
    if list(pts) != sorted(pts):
        raise DocumentError("focus values must be listed in index order (by x, then y)", "presentation.focus")
    eps0 = p["eps0"]
    if len(eps0) != n:
        raise DocumentError(f"eps0 has {len(eps0)} signs but there are {n} focus values", "presentation.eps0")
    try:
        focus = FocusSet(tuple(pts), tuple(mult), int(p.get("offset", 0)))
        s0, s1 = focus.slot(0), focus.slot(1)
        if 0 <= s0 < n and 0 <= s1 < n and pts[s0][0] == pts[s1][0]:
            raise FocusError("indices 0 and 1 must lie on different vertical lines (x_0 < x_1)")
        pres = Presentation(region, focus, SignChoice(tuple(eps0)), int(p.get("sgn", 1)))
    except (FocusError, ValueError) as exc:
        raise DocumentError(str(exc), "presentation") from exc

    signs = []
    for i, s in enumerate(data.get("sign_choices", [])):
        if len(s) != n:
            raise DocumentError(f"sign choice has {len(s)} signs but there are {n} focus values",
                                f"sign_choices[{i}]")
        signs.append(SignChoice(tuple(s)))
    triples = []
    for i, t in enumerate(data.get("triples", [])):
        if len(t["strips"]) != n:
            raise DocumentError(f"triple has {len(t['strips'])} strips but there are {n} focus values",
                                f"triples[{i}]")
        try:
            triples.append(AdmissibleTriple(tuple(HalfStrip.from_json(s) for s in t["strips"])))
        except (StripError, RegionError, ValueError) as exc:
            raise DocumentError(str(exc), f"triples[{i}]") from exc
    return Document(pres, signs, triples, dict(data.get("render", {})), data["version"])


def to_data(doc: Document) -> dict:
    out = {"version": doc.version, "presentation": doc.presentation.to_json()}
    if doc.sign_choices:
        out["sign_choices"] = [list(s) for s in doc.sign_choices]
    if doc.triples:
        out["triples"] = [t.to_json() for t in doc.triples]
    if doc.render:
        out["render"] = dict(doc.render)
    return out


def emit(doc: Document) -> str:
    return json.dumps(to_data(doc), indent=2) + "\n"


def load(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from exc
    return parse(text)


def bundled(name: str) -> str:
    """Text of one of the bundled example documents."""
    return resources.files("vatcarto").joinpath(f"data/{name}.json").read_text()


BUNDLED = ("square_empty", "square_one_ff", "two_ff_one_line", "negative_window")
