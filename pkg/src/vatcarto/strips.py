"""Half-strips around cuts and admissible (eps, eta, gamma) triples.

A half-strip of sign eps centred at (x0, y0) is the closed set
``{|x - x0| <= eta/2, eps*y >= eps*gamma(x)}`` where gamma is a PL curve
on the side of the centre away from the cut.  Its base is the part with
``eps*y < eps*y0 + eta/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from . import cuts
from .cuts import FocusError, FocusSet, SignChoice, as_signs
from .region import PLBoundaryFn, Region
from .zaffine import Point, VertElement, as_point, as_rat, rat_str


class StripError(ValueError):
    pass


@dataclass(frozen=True)
class HalfStrip:
    center: Point
    sign: int
    width: Fraction
    gamma: PLBoundaryFn

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "width", as_rat(self.width))
        if self.sign not in (1, -1):
            raise StripError("strip sign must be +1 or -1")
        if self.width <= 0:
            raise StripError("strip width must be positive")
        if self.gamma.jumps():
            raise StripError("bounding curve must be continuous")
        if self.gamma.x_min != self.x_lo or self.gamma.x_max != self.x_hi:
            raise StripError(
                f"bounding curve spans [{rat_str(self.gamma.x_min)}, {rat_str(self.gamma.x_max)}], "
                f"expected [{rat_str(self.x_lo)}, {rat_str(self.x_hi)}]")
        y0 = self.center[1]
        if any(self.sign * y0 <= self.sign * g for g in self.gamma.ys):
            raise StripError("bounding curve must stay strictly on the far side of the centre from the cut")

    @classmethod
    def standard(cls, center, sign: int, width) -> "HalfStrip":
        """The constant bounding curve gamma = y0 - sign*width/2."""
        x0, y0 = as_point(center)
        w = as_rat(width)
        return cls((x0, y0), sign, w, PLBoundaryFn.constant(x0 - w / 2, x0 + w / 2, y0 - sign * w / 2))

    @property
    def x_lo(self) -> Fraction:
        return self.center[0] - self.width / 2

    @property
    def x_hi(self) -> Fraction:
        return self.center[0] + self.width / 2

    @property
    def top(self) -> Fraction:
        """The level eps*y0 + eta/2 written as a y value."""
        return self.center[1] + self.sign * self.width / 2

    def contains(self, p) -> bool:
        x, y = as_point(p)
        if not self.x_lo <= x <= self.x_hi:
            return False
        return self.sign * y >= self.sign * self.gamma(x)

    def in_base(self, p) -> bool:
        x, y = as_point(p)
        return self.contains((x, y)) and self.sign * y < self.sign * self.top

    def is_standard(self) -> bool:
        return self == HalfStrip.standard(self.center, self.sign, self.width)

    def scaled(self, factor) -> "HalfStrip":
        """Shrink the width by ``factor`` and pull gamma towards y0 by the same factor."""
        f = as_rat(factor)
        if not 0 < f <= 1:
            raise StripError("scale factor must lie in (0, 1]")
        x0, y0 = self.center
        w = self.width * f
        g = self.gamma.restrict(x0 - w / 2, x0 + w / 2)
        g = PLBoundaryFn(g.xs, [y0 - f * (y0 - y) for y in g.ys]).canonical()
        return HalfStrip(self.center, self.sign, w, g)

    def twisted(self, h: VertElement) -> "HalfStrip":
        gamma = self.gamma.map(lambda x, y: h((x, y))[1])
        return HalfStrip(h(self.center), self.sign * h.d, self.width, gamma)

    def to_json(self) -> dict:
        return {
            "center": [rat_str(c) for c in self.center],
            "sign": self.sign,
            "eta": rat_str(self.width),
            "gamma": self.gamma.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "HalfStrip":
        return cls(tuple(data["center"]), int(data["sign"]), data["eta"], PLBoundaryFn.from_json(data["gamma"]))


def strip_contains(strip: HalfStrip, p) -> bool:
    return strip.contains(p)


def strip_base(strip: HalfStrip) -> dict:
    """Describe the base as {x range, lower curve, upper level, which end is open}."""
    return {
        "x": [strip.x_lo, strip.x_hi],
        "gamma": strip.gamma,
        "level": strip.top,
        "open_side": "upper" if strip.sign > 0 else "lower",
    }


@dataclass(frozen=True)
class AdmissibleTriple:
    """One half-strip per focus slot, in index order."""

    strips: Tuple[HalfStrip, ...]

    def __post_init__(self):
        object.__setattr__(self, "strips", tuple(self.strips))

    def __len__(self):
        return len(self.strips)

    def __iter__(self):
        return iter(self.strips)

    @property
    def signs(self) -> SignChoice:
        return SignChoice(tuple(s.sign for s in self.strips))

    @property
    def widths(self) -> List[Fraction]:
        return [s.width for s in self.strips]

    def scaled(self, factor) -> "AdmissibleTriple":
        return AdmissibleTriple(tuple(s.scaled(factor) for s in self.strips))

    def halved(self, times: int = 1) -> "AdmissibleTriple":
        return self.scaled(Fraction(1, 2 ** times))

    def twisted(self, h: VertElement) -> "AdmissibleTriple":
        """Transport along a Vert(2;Z) element, re-sorted into the new index order."""
        moved = [s.twisted(h) for s in self.strips]
        return AdmissibleTriple(tuple(sorted(moved, key=lambda s: s.center)))

    def contains(self, p) -> bool:
        return any(s.contains(p) for s in self.strips)

    def maximal(self) -> List[int]:
        """Slots of strips not contained in another strip (one per line and sign)."""
        out = []
        for i, s in enumerate(self.strips):
            inside = False
            for j, t in enumerate(self.strips):
                if i != j and _contained(s, t) and not (_contained(t, s) and j > i):
                    inside = True
                    break
            if not inside:
                out.append(i)
        return out

    def to_json(self) -> dict:
        return {"strips": [s.to_json() for s in self.strips]}

    @classmethod
    def from_json(cls, data: dict) -> "AdmissibleTriple":
        return cls(tuple(HalfStrip.from_json(s) for s in data["strips"]))


# exact PL comparisons


def _grid(a: Fraction, b: Fraction, *fns: PLBoundaryFn) -> List[Fraction]:
    xs = {a, b}
    for f in fns:
        xs.update(x for x in f.xs if a < x < b)
    return sorted(xs)


def _contained(s: HalfStrip, t: HalfStrip) -> bool:
    """s is a subset of t."""
    if s.sign != t.sign or s.x_lo < t.x_lo or s.x_hi > t.x_hi:
        return False
    e = s.sign
    return all(e * s.gamma(x) >= e * t.gamma(x) for x in _grid(s.x_lo, s.x_hi, s.gamma, t.gamma))


def _disjoint(s: HalfStrip, t: HalfStrip) -> bool:
    a, b = max(s.x_lo, t.x_lo), min(s.x_hi, t.x_hi)
    if a > b:
        return True
    if s.sign == t.sign:
        return False
    up, down = (s, t) if s.sign > 0 else (t, s)
    return all(up.gamma(x) > down.gamma(x) for x in _grid(a, b, up.gamma, down.gamma))


def _base_violation(strip: HalfStrip, region: Region) -> Optional[str]:
    """Witness text if the base is not inside Int(B)."""
    a, b = strip.x_lo, strip.x_hi
    if a <= region.x_min or b >= region.x_max:
        return f"width [{rat_str(a)}, {rat_str(b)}] reaches the end of the region"
    e, top, g = strip.sign, strip.top, strip.gamma
    xs = _grid(a, b, g, region.lower, region.upper)
    # crossings of gamma with the level where the base slice becomes empty
    for x0, x1 in zip(xs, xs[1:]):
        g0, g1 = g(x0) - top, g(x1) - top
        if g0 * g1 < 0:
            xs.append(x0 + (x1 - x0) * g0 / (g0 - g1))
    xs = sorted(set(xs))
    probes = xs + [(p + q) / 2 for p, q in zip(xs, xs[1:])]
    for x in probes:
        gx, lo, hi = g(x), region.lower(x), region.upper(x)
        nonempty = e * gx < e * top
        if e > 0:
            near_ok, far_ok = lo < gx, top <= hi
            soft = lo <= gx and top <= hi
        else:
            near_ok, far_ok = gx < hi, lo <= top
            soft = gx <= hi and lo <= top
        if (nonempty and not (near_ok and far_ok)) or (not nonempty and e * gx == e * top and not soft):
            return f"base leaves the interior at x = {rat_str(x)}"
    return None


@dataclass
class StripViolation:
    rule: str
    slots: Tuple[int, ...]
    message: str

    def to_json(self) -> dict:
        return {"rule": self.rule, "slots": list(self.slots), "message": self.message}


@dataclass
class AdmissibilityReport:
    violations: List[StripViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    @property
    def rules(self) -> List[str]:
        return sorted({v.rule for v in self.violations})

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def check_admissible(triple: AdmissibleTriple, region: Region, focus: FocusSet) -> AdmissibilityReport:
    """Report every violated admissibility rule.

    Rules: ``base`` (base inside Int(B)), ``focus_in_strip`` (a strip holds a
    foreign focus value off its centre line), ``width`` (equal widths on a
    shared centre line), ``overlap`` (two strips meet without one containing
    the other) and ``corners`` (at most one corner of B per strip, on its
    centre line).
    """
    rep = AdmissibilityReport()
    if len(triple) != len(focus):
        rep.violations.append(StripViolation(
            "count", (), f"{len(triple)} strips for {len(focus)} focus values"))
        return rep
    for i, (s, c) in enumerate(zip(triple, focus.points)):
        if s.center != c:
            rep.violations.append(StripViolation(
                "center", (i,), f"strip {i} is centred at {_fmt(s.center)}, focus value is {_fmt(c)}"))
    for i, s in enumerate(triple):
        msg = _base_violation(s, region)
        if msg:
            rep.violations.append(StripViolation("base", (i,), msg))
    for i, s in enumerate(triple):
        for j, c in enumerate(focus.points):
            if i != j and s.contains(c) and c[0] != s.center[0]:
                rep.violations.append(StripViolation(
                    "focus_in_strip", (i, j), f"strip {i} contains focus value {_fmt(c)} off its centre line"))
    n = len(triple)
    for i in range(n):
        for j in range(i + 1, n):
            s, t = triple.strips[i], triple.strips[j]
            if s.center[0] == t.center[0] and s.width != t.width:
                rep.violations.append(StripViolation(
                    "width", (i, j), f"strips {i} and {j} share x = {rat_str(s.center[0])} "
                                     f"but have widths {rat_str(s.width)} and {rat_str(t.width)}"))
            if not (_disjoint(s, t) or _contained(s, t) or _contained(t, s)):
                rep.violations.append(StripViolation(
                    "overlap", (i, j), f"strips {i} and {j} meet but neither contains the other"))
    verts = region.vertices()
    for i, s in enumerate(triple):
        inside = [v for v in verts if s.contains(v)]
        if len(inside) > 1 or (inside and inside[0][0] != s.center[0]):
            where = ", ".join(_fmt(v) for v in inside)
            rep.violations.append(StripViolation(
                "corners", (i,), f"strip {i} contains corners {where}; allowed is one, on the centre line"))
    return rep


def _fmt(p) -> str:
    return f"({rat_str(p[0])}, {rat_str(p[1])})"


def default_width(region: Region, focus: FocusSet, x) -> Fraction:
    """Half the smallest clearance of the focus values on the line {x}."""
    x = as_rat(x)
    gaps = [x - region.x_min, region.x_max - x]
    gaps += [abs(x - other) for other in focus.xs() if other != x]
    gaps += [abs(x - v[0]) for v in region.vertices() if v[0] != x]
    ys = [focus.points[s][1] for s in focus.on_line(x)]
    for y in ys:
        gaps.append(2 * min(y - region.lower(x), region.upper(x) - y))
    gaps += [b - a for a, b in zip(ys, ys[1:])]
    return min(gaps) / 2


def construct_admissible(region: Region, focus: FocusSet, eps, max_halvings: int = 40) -> AdmissibleTriple:
    """Standard strips with per-line widths, halved until admissible."""
    eps = as_signs(eps)
    if len(eps) != len(focus):
        raise FocusError(f"{len(eps)} signs for {len(focus)} focus values")
    focus.require_simple()
    if not cuts.complement_connected(focus, eps):
        bad = ", ".join(rat_str(x) for x in cuts.disconnecting_lines(focus, eps))
        raise StripError(f"no admissible strips: the cuts disconnect the region along x = {bad}")
    widths = {x: default_width(region, focus, x) for x in focus.xs()}
    for _ in range(max_halvings + 1):
        triple = AdmissibleTriple(tuple(
            HalfStrip.standard(c, e, widths[c[0]]) for c, e in zip(focus.points, eps)))
        if check_admissible(triple, region, focus).ok:
            return triple
        widths = {x: w / 2 for x, w in widths.items()}
    raise StripError("could not find admissible widths")


@dataclass
class ComplementCheck:
    ok: bool
    witness: Optional[Fraction] = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"connected": self.ok, "witness_x": None if self.witness is None else rat_str(self.witness)}


def strips_complement_connected(region: Region, triple: AdmissibleTriple) -> ComplementCheck:
    """Check that every vertical slice of B minus the strips is non-empty.

    Each slice of the complement is an interval (upward strips remove a top
    part, downward strips a bottom part), so the complement is connected iff
    no slice over the region's x range is empty.  The remaining height is
    concave on each interval where the covering strips do not change, so the
    endpoints of those intervals are the only places to look.
    """
    xs = {region.x_min, region.x_max}
    xs.update(region.breakpoints())
    for s in triple:
        xs.update(x for x in s.gamma.xs)
    xs = sorted(x for x in xs if region.x_min <= x <= region.x_max)

    def gap(x, active):
        lo, hi = region.lower(x), region.upper(x)
        for s in active:
            g = s.gamma(x)
            if s.sign > 0:
                hi = min(hi, g)
            else:
                lo = max(lo, g)
        return hi - lo, hi > lo or (hi == lo and not active)

    for x in xs:
        active = [s for s in triple if s.x_lo <= x <= s.x_hi]
        if not gap(x, active)[1]:
            return ComplementCheck(False, x)
    for a, b in zip(xs, xs[1:]):
        mid = (a + b) / 2
        active = [s for s in triple if s.x_lo <= mid <= s.x_hi]
        if not active:
            continue
        # one-sided limits at the ends, with the strips active inside (a, b)
        for x in (a, b):
            if gap(x, active)[0] < 0:
                return ComplementCheck(False, x)
        if not gap(mid, active)[1]:
            return ComplementCheck(False, mid)
    return ComplementCheck(True)
