"""Sign changes of cartographic images.

A :class:`Presentation` is a region together with its focus-focus values and
the sign choice eps0 for which the stored region is the cartographic image.
Changing eps0 to another sign choice acts on the region by a piecewise
vertical shear that bends only along focus lines; this module builds those
maps, checks them against the derivative-jump law, and enumerates all images.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from . import cuts
from .cuts import FocusError, FocusSet, SignChoice, as_signs
from .region import Region, apply_affine, check_delzant, validate
from .zaffine import (Matrix, Point, ZAffine2, as_point, as_rat, is_vert,
                      matinv, matmul, rat_str, shear_matrix)


class CartographyError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    """The eps0-cartographic image of a system, with its focus-focus values."""

    region: Region
    focus: FocusSet
    ref_signs: SignChoice
    global_sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ref_signs", as_signs(self.ref_signs))
        if len(self.ref_signs) != len(self.focus):
            raise FocusError(f"eps0 has {len(self.ref_signs)} signs but there are {len(self.focus)} focus values")
        if self.global_sign not in (1, -1):
            raise CartographyError("global sign must be +1 or -1")
        for p in self.focus.points:
            if not self.region.in_interior(p):
                raise FocusError(
                    f"focus value ({rat_str(p[0])}, {rat_str(p[1])}) must lie in the interior of the region")

    def focus_lines(self) -> List[Fraction]:
        return self.focus.xs()

    def to_json(self) -> dict:
        return {
            "region": self.region.to_json(),
            "focus": self.focus.to_json(),
            "offset": self.focus.offset,
            "eps0": list(self.ref_signs),
            "sgn": self.global_sign,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        region = Region.from_json(data["region"])
        pts = [(f["x"], f["y"]) for f in data.get("focus", [])]
        mult = [int(f.get("r", 1)) for f in data.get("focus", [])]
        focus = cuts.order_focus(pts, int(data.get("offset", 0)), region, mult)
        if [as_point(p) for p in pts] != list(focus.points):
            raise FocusError("focus values must be listed in index order (by x, then y)")
        return cls(region, focus, SignChoice(tuple(data.get("eps0", []))), int(data.get("sgn", 1)))


def validate_presentation(pres: Presentation):
    """Region laws plus corner checks away from the focus lines."""
    report = validate(pres.region)
    delz = check_delzant(pres.region, skip_x=pres.focus_lines()) if report.ok else None
    return report, delz


# piecewise vertical maps


@dataclass(frozen=True)
class Chamber:
    """Open vertical slab between consecutive bending lines (None = unbounded)."""

    index: int
    x_lo: Optional[Fraction]
    x_hi: Optional[Fraction]

    def contains_x(self, x) -> bool:
        x = as_rat(x)
        return (self.x_lo is None or x > self.x_lo) and (self.x_hi is None or x < self.x_hi)


@dataclass(frozen=True)
class PiecewiseVertMap:
    """A map of the plane that is a Vert(2;Z) element on each chamber.

    ``pieces[i]`` acts on chamber i, i.e. between ``breaks[i-1]`` and
    ``breaks[i]``.  A point on a break line is sent by the piece on its right;
    continuity makes the choice immaterial for valid maps.
    """

    breaks: Tuple[Fraction, ...] = ()
    pieces: Tuple[ZAffine2, ...] = (ZAffine2.identity(),)

    def __post_init__(self):
        breaks = tuple(as_rat(b) for b in self.breaks)
        if list(breaks) != sorted(set(breaks)):
            raise CartographyError("break lines must be strictly increasing")
        if len(self.pieces) != len(breaks) + 1:
            raise CartographyError(f"{len(self.pieces)} pieces for {len(breaks)} break lines")
        for g in self.pieces:
            if is_vert(g) is None:
                raise CartographyError(f"piece {g!r} does not preserve vertical lines")
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @classmethod
    def identity(cls) -> "PiecewiseVertMap":
        return cls()

    @property
    def chambers(self) -> List[Chamber]:
        edges = (None,) + self.breaks + (None,)
        return [Chamber(i, edges[i], edges[i + 1]) for i in range(len(self.pieces))]

    def piece_index(self, x) -> int:
        x = as_rat(x)
        return sum(1 for b in self.breaks if b <= x)

    def piece_at(self, x) -> ZAffine2:
        return self.pieces[self.piece_index(x)]

    def left_piece(self, x) -> ZAffine2:
        """Piece acting just left of the line {x}."""
        x = as_rat(x)
        return self.pieces[sum(1 for b in self.breaks if b < x)]

    def right_piece(self, x) -> ZAffine2:
        return self.piece_at(x)

    def __call__(self, p) -> Point:
        p = as_point(p)
        return self.piece_at(p[0])(p)

    def compose(self, inner: "PiecewiseVertMap") -> "PiecewiseVertMap":
        """self o inner."""
        breaks = sorted(set(self.breaks) | set(inner.breaks))
        pieces = []
        for lo, hi in zip([None] + breaks, breaks + [None]):
            x = _sample_x(lo, hi)
            pieces.append(self.piece_at(x) @ inner.piece_at(x))
        return PiecewiseVertMap(tuple(breaks), tuple(pieces)).simplified()

    __matmul__ = compose

    def inverse(self) -> "PiecewiseVertMap":
        return PiecewiseVertMap(self.breaks, tuple(g.inverse() for g in self.pieces))

    def simplified(self) -> "PiecewiseVertMap":
        """Drop break lines whose two sides carry the same piece."""
        breaks, pieces = [], [self.pieces[0]]
        for b, g in zip(self.breaks, self.pieces[1:]):
            if g == pieces[-1]:
                continue
            breaks.append(b)
            pieces.append(g)
        return PiecewiseVertMap(tuple(breaks), tuple(pieces))

    def is_identity(self) -> bool:
        s = self.simplified()
        return not s.breaks and s.pieces[0] == ZAffine2.identity()

    def continuity_defects(self) -> List[Fraction]:
        """Break lines along which the two adjacent pieces disagree."""
        bad = []
        for b, gl, gr in zip(self.breaks, self.pieces, self.pieces[1:]):
            if any(gl((b, y)) != gr((b, y)) for y in (Fraction(0), Fraction(1))):
                bad.append(b)
        return bad

    def orientation(self) -> int:
        ds = {is_vert(g).d for g in self.pieces}
        if len(ds) != 1:
            raise CartographyError("pieces mix orientations; the map is not a homeomorphism")
        return ds.pop()

    def apply_region(self, region: Region) -> Region:
        """Exact image of a region; the map must be continuous."""
        if self.continuity_defects():
            raise CartographyError("map is discontinuous along a break line")
        refined = region.with_breakpoints(self.breaks)
        d = self.orientation()
        lo = refined.lower.map(lambda x, y: self((x, y))[1])
        up = refined.upper.map(lambda x, y: self((x, y))[1])
        closure = dict(region.closure)
        if d < 0:
            lo, up = up, lo
            closure["lower"], closure["upper"] = region.closure["upper"], region.closure["lower"]
        return Region(region.x_min, region.x_max, lo.canonical(), up.canonical(), closure)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseVertMap):
            return NotImplemented
        a, b = self.simplified(), other.simplified()
        return a.breaks == b.breaks and a.pieces == b.pieces

    def __hash__(self):
        s = self.simplified()
        return hash((s.breaks, s.pieces))

    def to_json(self) -> dict:
        return {"breaks": [rat_str(b) for b in self.breaks], "pieces": [g.to_json() for g in self.pieces]}


def _sample_x(lo, hi) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def piecewise(x0, left: ZAffine2, right: ZAffine2) -> PiecewiseVertMap:
    return PiecewiseVertMap((as_rat(x0),), (left, right))


# transitions between sign choices


def k_coeff(eps_i: int, eps_hat_i: int, global_sign: int = 1) -> int:
    """Shear exponent sgn * (eps_i - eps_hat_i) / 2 for one focus index."""
    return global_sign * (eps_i - eps_hat_i) // 2


def _k(i: int, focus: FocusSet, eps, eps_hat, sign: int) -> Tuple[Fraction, int]:
    s = focus.slot(i)
    if not 0 <= s < len(focus):
        raise CartographyError(f"index {i} is outside the focus window {focus.indices}")
    return focus.points[s][0], k_coeff(as_signs(eps)[s], as_signs(eps_hat)[s], sign)


def l_map(i: int, focus: FocusSet, eps, eps_hat, sign: int = 1) -> PiecewiseVertMap:
    """Identity left of x_i, the shear T^k fixing {x = x_i} on x >= x_i; identity if i <= 0."""
    if i <= 0:
        return PiecewiseVertMap.identity()
    x_i, k = _k(i, focus, eps, eps_hat, sign)
    return piecewise(x_i, ZAffine2.identity(), ZAffine2.shear(k, x_i)).simplified()


def r_map(i: int, focus: FocusSet, eps, eps_hat, sign: int = 1) -> PiecewiseVertMap:
    """The shear T^-k on x <= x_i, identity right of x_i; identity if i > 0."""
    if i > 0:
        return PiecewiseVertMap.identity()
    x_i, k = _k(i, focus, eps, eps_hat, sign)
    return piecewise(x_i, ZAffine2.shear(-k, x_i), ZAffine2.identity()).simplified()


def transition_map(focus: FocusSet, eps, eps_hat, sign: int = 1) -> PiecewiseVertMap:
    """r o l over the whole window, normalised to fix the basepoint chamber."""
    eps, eps_hat = as_signs(eps), as_signs(eps_hat)
    if len(eps) != len(focus) or len(eps_hat) != len(focus):
        raise CartographyError(
            f"sign choices of length {len(eps)} and {len(eps_hat)} do not match {len(focus)} focus values")
    focus.require_simple()
    pos = [i for i in focus.indices if i > 0]
    nonpos = [i for i in focus.indices if i <= 0]
    left = PiecewiseVertMap.identity()
    for i in pos:  # l_n o ... o l_1
        left = l_map(i, focus, eps, eps_hat, sign) @ left
    right = PiecewiseVertMap.identity()
    for i in sorted(nonpos, reverse=True):  # r_min o ... o r_0
        right = r_map(i, focus, eps, eps_hat, sign) @ right
    return right @ left


def transition(pres: Presentation, eps_hat) -> Tuple[PiecewiseVertMap, Presentation]:
    """Map the eps0-image to the eps_hat-image and return both."""
    eps_hat = as_signs(eps_hat)
    t = transition_map(pres.focus, pres.ref_signs, eps_hat, pres.global_sign)
    region = t.apply_region(pres.region)
    pts = tuple(t(p) for p in pres.focus.points)
    focus = FocusSet(pts, pres.focus.multiplicities, pres.focus.offset)
    return t, Presentation(region, focus, eps_hat, pres.global_sign)


def basepoint_x(focus: FocusSet, region: Region) -> Fraction:
    """An x strictly between the last non-positive and the first positive index."""
    if not len(focus):
        return (region.x_min + region.x_max) / 2
    xs = {i: focus.points[focus.slot(i)][0] for i in focus.indices}
    nonpos = [xs[i] for i in xs if i <= 0]
    pos = [xs[i] for i in xs if i > 0]
    if nonpos and pos:
        return (max(nonpos) + min(pos)) / 2
    if pos:
        x1 = min(pos)
        return x1 - (x1 - region.x_min) / 2
    x0 = max(nonpos)
    return x0 + (region.x_max - x0) / 2


def _line_segments(focus: FocusSet, x) -> List[Fraction]:
    """One sample height per open sub-segment of {x = x0} minus the focus values."""
    ys = [focus.points[s][1] for s in focus.on_line(x)]
    return [ys[0] - 1] + [(a + b) / 2 for a, b in zip(ys, ys[1:])] + [ys[-1] + 1]


def _jump_exponent(focus: FocusSet, eps, eps0, sign: int, x) -> int:
    """Exponent m_right - m_left of the atlas shear across {x}, constant along the line."""
    vals = {
        sign * (cuts.j_direct(focus, eps0, (x, y), weighted=True) - cuts.j_direct(focus, eps, (x, y), weighted=True))
        for y in _line_segments(focus, x)
    }
    if len(vals) != 1:
        raise CartographyError(f"jump across x = {rat_str(x)} is not constant along the line")
    return vals.pop()


def develop_atlas(pres: Presentation, eps) -> PiecewiseVertMap:
    """Propagate charts from the basepoint chamber across each focus line."""
    eps = as_signs(eps)
    if len(eps) != len(pres.focus):
        raise FocusError(f"{len(eps)} signs for {len(pres.focus)} focus values")
    if cuts.disconnecting_lines(pres.focus, eps):
        raise CartographyError("the cuts disconnect the region; reduce the sign choice first")
    lines = pres.focus_lines()
    if not lines:
        return PiecewiseVertMap.identity()
    base = pres.focus.xs()
    b = basepoint_x(pres.focus, pres.region)
    start = sum(1 for x in base if x < b)
    pieces: List[Optional[ZAffine2]] = [None] * (len(lines) + 1)
    pieces[start] = ZAffine2.identity()
    s = pres.global_sign
    for c in range(start, len(lines)):
        x = lines[c]
        m = _jump_exponent(pres.focus, eps, pres.ref_signs, s, x)
        pieces[c + 1] = _continue_across(pieces[c], x, m)
    for c in range(start, 0, -1):
        x = lines[c - 1]
        m = _jump_exponent(pres.focus, eps, pres.ref_signs, s, x)
        pieces[c - 1] = _continue_across(pieces[c], x, -m)
    return PiecewiseVertMap(tuple(lines), tuple(pieces))


def _continue_across(g: ZAffine2, x, m: int) -> ZAffine2:
    """The piece on the other side of {x}: linear part g.A * T^m, equal to g on the line."""
    return g @ ZAffine2.shear(m, x)


@dataclass
class JumpViolation:
    """A focus line where the law fails, with the failing sub-segments (0 = lowest)."""

    x: Fraction
    kind: str
    segments: Tuple[int, ...]
    detail: str

    def to_json(self) -> dict:
        return {"x": rat_str(self.x), "kind": self.kind, "segments": list(self.segments), "detail": self.detail}


@dataclass
class JumpReport:
    violations: List[JumpViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def verify_jump(atlas: PiecewiseVertMap, pres: Presentation, eps) -> JumpReport:
    """Check the derivative-jump law and continuity on every focus line.

    Derivatives are taken in the eps0 chart of the stored region, whose own
    jump across a line is T^(sgn*j_eps0).  The law for the developed map is
    therefore  L * T^(sgn*j_eps0) = T^(sgn*j_eps) * R  with L, R the linear
    parts just left and right of the line.  Each sub-segment of the line
    between focus values is checked; failures are grouped per line.
    """
    eps = as_signs(eps)
    report = JumpReport()
    s = pres.global_sign
    for x in pres.focus_lines():
        gl, gr = atlas.left_piece(x), atlas.right_piece(x)
        jump_bad, cont_bad, details = [], [], []
        for seg, y in enumerate(_line_segments(pres.focus, x)):
            j = cuts.j_direct(pres.focus, eps, (x, y), weighted=True)
            j0 = cuts.j_direct(pres.focus, pres.ref_signs, (x, y), weighted=True)
            lhs = matmul(gl.A, shear_matrix(s * j0))
            rhs = matmul(shear_matrix(s * j), gr.A)
            if lhs != rhs:
                jump_bad.append(seg)
                details.append(f"segment {seg}: left*T^{s * j0} = {lhs} but T^{s * j}*right = {rhs}")
            if gl((x, y)) != gr((x, y)):
                cont_bad.append(seg)
        if jump_bad:
            report.violations.append(JumpViolation(x, "jump", tuple(jump_bad), "; ".join(details)))
        if cont_bad:
            report.violations.append(JumpViolation(
                x, "continuity", tuple(cont_bad), f"adjacent pieces disagree on x = {rat_str(x)}"))
    return report


def line_segments(pres: Presentation, eps, x) -> List[Tuple[Fraction, int]]:
    """(sample height, j_eps) for each sub-segment of a focus line."""
    return [(y, cuts.j_direct(pres.focus, eps, (x, y))) for y in _line_segments(pres.focus, as_rat(x))]


def monodromy_at(pres: Presentation, eps, i: int) -> Matrix:
    """Affine holonomy of a small loop around the focus value with index i."""
    eps = as_signs(eps)
    slot = pres.focus.slot(i)
    if not 0 <= slot < len(pres.focus):
        raise CartographyError(f"index {i} is outside the focus window {pres.focus.indices}")
    x, y = pres.focus.points[slot]
    if len(pres.focus.on_line(x)) != 1:
        raise CartographyError(f"the window around index {i} contains another focus value on x = {rat_str(x)}")
    atlas = develop_atlas(pres, eps)
    s = pres.global_sign
    gl, gr = atlas.left_piece(x).A, atlas.right_piece(x).A

    def jump(yy):
        j0 = cuts.j_direct(pres.focus, pres.ref_signs, (x, yy), weighted=True)
        # L * T^(s*j0) * R^-1, the jump of the eps-chart seen from the eps0 chart
        return matmul(matmul(gl, shear_matrix(s * j0)), matinv(gr))

    return matmul(jump(y + 1), matinv(jump(y - 1)))


def vert_twist(pres: Presentation, h) -> Presentation:
    """Compose the presentation on the left with an element of Vert(2;Z)."""
    if isinstance(h, ZAffine2):
        v = is_vert(h)
        if v is None:
            raise CartographyError("twist must be an element of Vert(2;Z)")
        h = v
    g = h.to_affine()
    region = apply_affine(pres.region, g)
    moved = [(g(p), r, e) for p, r, e in zip(pres.focus.points, pres.focus.multiplicities, pres.ref_signs)]
    moved.sort(key=lambda t: t[0])
    focus = FocusSet(tuple(m[0] for m in moved), tuple(m[1] for m in moved), pres.focus.offset)
    signs = SignChoice(tuple(h.d * m[2] for m in moved))
    return Presentation(region, focus, signs, pres.global_sign * h.d)


def cartographic_family(pres: Presentation, bound: int = 12) -> List[Tuple[SignChoice, Region]]:
    """Images for every sign choice whose cuts leave the region connected."""
    n = len(pres.focus)
    if n > bound:
        raise CartographyError(f"{n} focus values exceed the enumeration bound {bound}")
    pres.focus.require_simple()
    out: List[Tuple[SignChoice, Region]] = []
    for signs in itertools.product((1, -1), repeat=n):
        eps = SignChoice(signs)
        if not cuts.complement_connected(pres.focus, eps):
            continue
        _, image = transition(pres, eps)
        if any(image.region.same_set(r) for _, r in out):
            continue
        out.append((eps, image.region))
    return out
