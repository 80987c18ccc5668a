"""Command-line interface.

Exit codes: 0 success, 1 validation failure (the input is well formed but
fails a check), 2 input error (unreadable file, schema or parse error,
inconsistent lengths, bad flags).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import cartography, cuts, document, render, smoothing, strips
from .cuts import FocusError, SignChoice, as_signs
from .region import agl_equivalence, check_delzant, validate
from .zaffine import as_rat, rat_str

OK, FAILED, BAD_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _vertices(region) -> list:
    return [[rat_str(x), rat_str(y)] for x, y in region.vertices()]


def _signs_str(eps) -> str:
    return str(as_signs(eps))


def _load(args) -> document.Document:
    doc = document.load(args.input)
    if args.offset is not None:
        p = doc.presentation
        try:
            focus = cuts.order_focus(p.focus.points, args.offset, p.region, p.focus.multiplicities)
        except FocusError as exc:
            raise InputError(str(exc)) from exc
        doc.presentation = cartography.Presentation(p.region, focus, p.ref_signs, p.global_sign)
    return doc


def _eps(args, doc: document.Document) -> SignChoice:
    n = len(doc.presentation.focus)
    if getattr(args, "eps", None) is not None:
        try:
            eps = as_signs(args.eps)
        except FocusError as exc:
            raise InputError(str(exc)) from exc
        if len(eps) != n:
            raise InputError(f"--eps has {len(eps)} signs but there are {n} focus values")
        return eps
    if doc.sign_choices:
        return doc.sign_choices[0]
    return doc.presentation.ref_signs


def _scale(args) -> Fraction:
    try:
        f = as_rat(args.eta_scale)
    except (TypeError, ValueError) as exc:
        raise InputError(f"--eta-scale: {exc}") from exc
    if not 0 < f <= 1:
        raise InputError("--eta-scale must lie in (0, 1]")
    return f


def _triple(args, doc, eps):
    if doc.triples and getattr(args, "eps", None) is None and tuple(doc.triples[0].signs) == tuple(eps):
        triple = doc.triples[0]
    else:
        triple = strips.construct_admissible(doc.presentation.region, doc.presentation.focus, eps)
    return triple.scaled(_scale(args))


# subcommands


def cmd_validate(args, doc):
    pres = doc.presentation
    report = validate(pres.region)
    delz = check_delzant(pres.region, skip_x=pres.focus_lines())
    ok = report.ok and delz.ok
    payload = {"ok": ok, "region": report.to_json(),
               "delzant": {"ok": delz.ok, "checked": delz.checked, "issues": delz.issues},
               "focus": pres.focus.to_json(), "indices": pres.focus.indices}
    lines = [f"region: {'ok' if report.ok else 'INVALID'}"]
    lines += [f"  {v.kind}: {v.message}" for v in report.violations]
    lines.append(f"corners away from focus lines: {'ok' if delz.ok else 'FAILED'} ({delz.checked} checked)")
    lines += [f"  {msg}" for msg in delz.issues]
    return (OK if ok else FAILED), payload, lines


def cmd_cuts(args, doc):
    pres = doc.presentation
    eps = _eps(args, doc)
    cs = cuts.cut_set(pres.focus, eps, pres.region)
    bad = cuts.disconnecting_lines(pres.focus, eps)
    rays = [{"index": pres.focus.index(c.slot), "from": [rat_str(v) for v in c.base], "sign": c.sign,
             "to": rat_str(c.end)} for c in cs.rays]
    payload = {"eps": list(eps), "cuts": rays, "connected": not bad,
               "disconnecting_lines": [rat_str(x) for x in bad]}
    if pres.focus.simple:
        payload["reduced"] = list(cuts.reduce_signs(pres.focus, eps))
    lines = [f"eps = {_signs_str(eps)}"]
    lines += [f"  cut {r['index']}: x = {r['from'][0]}, y from {r['from'][1]} to {r['to']} "
              f"({'up' if r['sign'] > 0 else 'down'})" for r in rays]
    lines.append("complement connected" if not bad else
                 "complement disconnected along x = " + ", ".join(payload["disconnecting_lines"]))
    if "reduced" in payload and bad:
        lines.append(f"reduced sign choice: {_signs_str(payload['reduced'])}")
    return OK, payload, lines


def cmd_family(args, doc):
    fam = cartography.cartographic_family(doc.presentation)
    payload = {"count": len(fam), "images": [{"eps": list(e), "vertices": _vertices(r)} for e, r in fam]}
    lines = [f"{len(fam)} distinct images"]
    for e, r in fam:
        lines.append(f"  eps = {_signs_str(e)}: " + " ".join(f"({x}, {y})" for x, y in _vertices(r)))
    return OK, payload, lines


def cmd_transform(args, doc):
    eps = _eps(args, doc)
    t, image = cartography.transition(doc.presentation, eps)
    payload = {"eps": list(eps), "map": t.to_json(), "vertices": _vertices(image.region),
               "presentation": image.to_json()}
    lines = [f"eps = {_signs_str(eps)}", "image vertices: " + " ".join(f"({x}, {y})" for x, y in payload["vertices"])]
    for ch, g in zip(t.chambers, t.pieces):
        lo = "-inf" if ch.x_lo is None else rat_str(ch.x_lo)
        hi = "+inf" if ch.x_hi is None else rat_str(ch.x_hi)
        lines.append(f"  on ({lo}, {hi}): A = {g.A}, b = ({rat_str(g.b[0])}, {rat_str(g.b[1])})")
    return OK, payload, lines


def cmd_strips(args, doc):
    pres = doc.presentation
    eps = _eps(args, doc)
    triple = _triple(args, doc, eps)
    rep = strips.check_admissible(triple, pres.region, pres.focus)
    conn = strips.strips_complement_connected(pres.region, triple)
    ok = rep.ok and conn.ok
    payload = {"eps": list(eps), "admissible": rep.to_json(), "complement": conn.to_json(),
               **triple.to_json()}
    lines = [f"eps = {_signs_str(eps)}: {'admissible' if rep.ok else 'NOT admissible'}"]
    for s in triple:
        lines.append(f"  strip at ({rat_str(s.center[0])}, {rat_str(s.center[1])}) sign {s.sign:+d} "
                     f"width {rat_str(s.width)}")
    lines += [f"  {v.rule}: {v.message}" for v in rep.violations]
    lines.append("complement connected" if conn.ok else f"complement disconnected at x = {rat_str(conn.witness)}")
    return (OK if ok else FAILED), payload, lines


def cmd_smooth(args, doc):
    pres = doc.presentation
    eps = _eps(args, doc)
    triple = _triple(args, doc, eps)
    F = smoothing.build_embedding(pres, eps, triple)
    rep = smoothing.check_embedding(F, grid=args.grid, csv_path=args.out)
    payload = {"eps": list(eps), "embedding": F.to_json(), "check": rep.to_json()}
    lines = [f"eps = {_signs_str(eps)}: {'ok' if rep.ok else 'FAILED'}",
             f"  seam discontinuity {rep.seam_discontinuity:.3e}",
             f"  C1 defect: seam {rep.seam_c1_defect:.3e}, cut {rep.cut_c1_defect:.3e}",
             f"  injectivity violations {rep.injectivity_violations}, "
             f"agreement violations {rep.agreement_violations}, samples {rep.samples}"]
    return (OK if rep.ok else FAILED), payload, lines


def cmd_equiv(args, doc):
    if not args.other:
        raise InputError("equiv needs --other FILE")
    other = document.load(args.other)
    h = agl_equivalence(doc.presentation.region, other.presentation.region)
    payload = {"equivalent": h is not None, "map": None if h is None else h.to_json()}
    if h is None:
        lines = ["regions are not equivalent under AGL(2;Z)"]
    else:
        lines = [f"equivalent: A = {h.A}, b = ({rat_str(h.b[0])}, {rat_str(h.b[1])})"]
    return (OK if h is not None else FAILED), payload, lines


def cmd_render(args, doc):
    pres = doc.presentation
    size = {k: doc.render[k] for k in ("width", "height") if k in doc.render}
    if args.family:
        svg = render.render_family(pres, options=render.RenderOptions(**size))
    else:
        eps = _eps(args, doc)
        show = doc.render.get("show_strips", True)
        triple = None
        if show and eps == pres.ref_signs and doc.triples and tuple(doc.triples[0].signs) == tuple(eps):
            triple = doc.triples[0]
        if eps != pres.ref_signs:
            _, pres = cartography.transition(pres, eps)
        svg = render.render_svg(pres, render.RenderOptions(eps=eps, triple=triple, **size))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
        payload = {"out": args.out, "bytes": len(svg.encode())}
        return OK, payload, [f"wrote {args.out}"]
    return OK, None, [svg.rstrip("\n")]


COMMANDS = {
    "validate": (cmd_validate, "check the region laws and corners"),
    "cuts": (cmd_cuts, "list the cuts for a sign choice and test connectivity"),
    "family": (cmd_family, "all distinct cartographic images"),
    "transform": (cmd_transform, "transition map and image for a sign choice"),
    "strips": (cmd_strips, "build and check admissible half-strips"),
    "smooth": (cmd_smooth, "build and check the smoothed embedding"),
    "equiv": (cmd_equiv, "test two regions for AGL(2;Z) equivalence"),
    "render": (cmd_render, "draw the presentation as SVG"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vatcarto", description="Cartographic images of vertical almost-toric systems.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", "-i", required=True, help="document file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--offset", type=int, help="index offset of the focus window")
        if name in ("cuts", "transform", "strips", "smooth", "render"):
            p.add_argument("--eps", help='sign choice such as "+,-,+"')
        if name in ("strips", "smooth"):
            p.add_argument("--eta-scale", default="1", help="shrink strip widths by p/q")
        if name == "smooth":
            p.add_argument("--grid", type=int, default=512, help="samples per axis")
        if name in ("smooth", "render"):
            p.add_argument("--out", help="CSV of samples (smooth) or SVG file (render)")
        if name == "render":
            p.add_argument("--family", action="store_true", help="one panel per image")
        if name == "equiv":
            p.add_argument("--other", help="second document")
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    try:
        doc = _load(args)
        code, payload, lines = fn(args, doc)
    except document.InvalidRegion as exc:
        payload = {"ok": False, "region": exc.report.to_json()}
        lines = ["region: INVALID"] + [f"  {v.kind}: {v.message}" for v in exc.report.violations]
        _print(args, payload, lines)
        return FAILED
    except (document.DocumentError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except (strips.StripError, smoothing.EmbeddingError, cartography.CartographyError, FocusError) as exc:
        _print(args, {"ok": False, "error": str(exc)}, [f"failed: {exc}"])
        return FAILED
    _print(args, payload, lines)
    return code


def _print(args, payload, lines):
    if args.json and payload is not None:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


if __name__ == "__main__":
    sys.exit(main())
