"""Rational piecewise-linear regions bounded by two graphs over an x-interval.

A region B is stored as {x_min <= x <= x_max, lower(x) <= y <= upper(x)}.
Every vertical slice is an interval by construction, which is the shape
required of moment images of vertical almost-toric systems.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .zaffine import Point, ZAffine2, as_point, as_rat, is_vert, rat_str


class RegionError(ValueError):
    """Malformed region data that cannot be represented at all."""


def primitive(v) -> Tuple[int, int]:
    """Primitive integer vector pointing along the rational vector v."""
    vx, vy = as_point(v)
    if vx == 0 and vy == 0:
        raise ValueError("zero vector has no primitive direction")
    scale = math.lcm(vx.denominator, vy.denominator)
    ix, iy = int(vx * scale), int(vy * scale)
    g = math.gcd(ix, iy)
    return (ix // g, iy // g)


def cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


class PLBoundaryFn:
    """A continuous piecewise-linear function given by its breakpoints.

    Consecutive equal x-values are tolerated so that a vertical jump can be
    represented and reported by :func:`validate`; decreasing x-values are a
    hard error.
    """

    __slots__ = ("xs", "ys")

    def __init__(self, xs: Sequence, ys: Sequence):
        xs = tuple(as_rat(x) for x in xs)
        ys = tuple(as_rat(y) for y in ys)
        if len(xs) != len(ys):
            raise RegionError(f"breakpoint count {len(xs)} != value count {len(ys)}")
        if len(xs) < 2:
            raise RegionError("a boundary function needs at least 2 breakpoints")
        for a, b in zip(xs, xs[1:]):
            if b < a:
                raise RegionError(f"breakpoints must be non-decreasing, got {rat_str(a)} then {rat_str(b)}")
        for a, b, c in zip(xs, xs[1:], xs[2:]):
            if a == b == c:
                raise RegionError(f"breakpoint {rat_str(a)} repeated more than twice")
        if xs[0] == xs[1] or xs[-1] == xs[-2]:
            raise RegionError("vertical pieces at the ends belong to the region, not the boundary function")
        self.xs = xs
        self.ys = ys

    @classmethod
    def constant(cls, x0, x1, y) -> "PLBoundaryFn":
        return cls([x0, x1], [y, y])

    @property
    def x_min(self) -> Fraction:
        return self.xs[0]

    @property
    def x_max(self) -> Fraction:
        return self.xs[-1]

    def jumps(self) -> List[Fraction]:
        return [a for a, b in zip(self.xs, self.xs[1:]) if a == b]

    def _locate(self, x: Fraction) -> int:
        i = bisect.bisect_right(self.xs, x) - 1
        return min(max(i, 0), len(self.xs) - 2)

    def __call__(self, x) -> Fraction:
        return self.right_value(x)

    def right_value(self, x) -> Fraction:
        x = as_rat(x)
        if x < self.xs[0] or x > self.xs[-1]:
            raise ValueError(f"x = {rat_str(x)} outside [{rat_str(self.xs[0])}, {rat_str(self.xs[-1])}]")
        i = self._locate(x)
        if self.xs[i] == self.xs[i + 1]:
            i += 1
        x0, x1, y0, y1 = self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]
        if x == x1:
            return y1
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def left_value(self, x) -> Fraction:
        x = as_rat(x)
        i = bisect.bisect_left(self.xs, x)
        if i < len(self.xs) and self.xs[i] == x:
            return self.ys[i]
        return self.right_value(x)

    def slope_at(self, x, side: int = +1) -> Fraction:
        """Slope of the piece just right (side=+1) or just left (side=-1) of x."""
        x = as_rat(x)
        for i in range(len(self.xs) - 1):
            x0, x1 = self.xs[i], self.xs[i + 1]
            if x0 == x1:
                continue
            if (side > 0 and x0 <= x < x1) or (side < 0 and x0 < x <= x1):
                return (self.ys[i + 1] - self.ys[i]) / (x1 - x0)
        raise ValueError(f"no piece on side {side} of x = {rat_str(x)}")

    def with_breakpoints(self, extra: Iterable) -> "PLBoundaryFn":
        """Same function with extra breakpoints inserted inside the domain."""
        pts = dict(zip(self.xs, self.ys)) if not self.jumps() else None
        if pts is None:
            raise RegionError("cannot refine a boundary with vertical jumps")
        for x in extra:
            x = as_rat(x)
            if self.xs[0] < x < self.xs[-1] and x not in pts:
                pts[x] = self(x)
        xs = sorted(pts)
        return PLBoundaryFn(xs, [pts[x] for x in xs])

    def restrict(self, a, b) -> "PLBoundaryFn":
        a, b = as_rat(a), as_rat(b)
        xs = [a] + [x for x in self.xs if a < x < b] + [b]
        return PLBoundaryFn(xs, [self.right_value(a)] + [self(x) for x in xs[1:-1]] + [self.left_value(b)])

    def map(self, fn) -> "PLBoundaryFn":
        """Apply (x, y) -> new y at every breakpoint."""
        return PLBoundaryFn(self.xs, [fn(x, y) for x, y in zip(self.xs, self.ys)])

    def canonical(self) -> "PLBoundaryFn":
        """Drop breakpoints where the slope does not change."""
        xs, ys = [self.xs[0]], [self.ys[0]]
        for i in range(1, len(self.xs) - 1):
            x0, y0 = xs[-1], ys[-1]
            x1, y1 = self.xs[i], self.ys[i]
            x2, y2 = self.xs[i + 1], self.ys[i + 1]
            if x0 != x1 and x1 != x2 and (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0):
                continue
            xs.append(x1)
            ys.append(y1)
        xs.append(self.xs[-1])
        ys.append(self.ys[-1])
        return PLBoundaryFn(xs, ys)

    def __eq__(self, other):
        if not isinstance(other, PLBoundaryFn):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.xs == b.xs and a.ys == b.ys

    def __hash__(self):
        c = self.canonical()
        return hash((c.xs, c.ys))

    def to_json(self) -> dict:
        return {"xs": [rat_str(x) for x in self.xs], "ys": [rat_str(y) for y in self.ys]}

    @classmethod
    def from_json(cls, data: dict) -> "PLBoundaryFn":
        return cls(data["xs"], data["ys"])

    def __repr__(self):
        pts = ", ".join(f"({rat_str(x)}, {rat_str(y)})" for x, y in zip(self.xs, self.ys))
        return f"PLBoundaryFn([{pts}])"


SIDES = ("left", "right", "lower", "upper")


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def contains(self, y) -> bool:
        y = as_rat(y)
        above = y > self.lo or (self.lo_closed and y == self.lo)
        below = y < self.hi or (self.hi_closed and y == self.hi)
        return above and below


@dataclass(frozen=True, eq=False)
class Region:
    x_min: Fraction
    x_max: Fraction
    lower: PLBoundaryFn
    upper: PLBoundaryFn
    closure: Dict[str, bool] = field(default_factory=lambda: dict.fromkeys(SIDES, True))

    def __post_init__(self):
        object.__setattr__(self, "x_min", as_rat(self.x_min))
        object.__setattr__(self, "x_max", as_rat(self.x_max))
        closure = dict.fromkeys(SIDES, True)
        unknown = set(self.closure) - set(SIDES)
        if unknown:
            raise RegionError(f"unknown closure flags {sorted(unknown)}")
        closure.update({k: bool(v) for k, v in self.closure.items()})
        object.__setattr__(self, "closure", closure)
        for name, fn in (("lower", self.lower), ("upper", self.upper)):
            if fn.x_min != self.x_min or fn.x_max != self.x_max:
                raise RegionError(
                    f"{name} boundary spans [{rat_str(fn.x_min)}, {rat_str(fn.x_max)}], "
                    f"expected [{rat_str(self.x_min)}, {rat_str(self.x_max)}]"
                )
        if self.x_max <= self.x_min:
            raise RegionError("x_max must exceed x_min")

    # construction

    @classmethod
    def box(cls, x0, x1, y0, y1) -> "Region":
        return cls(x0, x1, PLBoundaryFn.constant(x0, x1, y0), PLBoundaryFn.constant(x0, x1, y1))

    @classmethod
    def from_polygon(cls, vertices: Sequence) -> "Region":
        """Build a region from the vertex cycle of an x-monotone polygon."""
        pts = [as_point(v) for v in vertices]
        pts = [p for i, p in enumerate(pts) if p != pts[i - 1]] if len(pts) > 1 else pts
        if len(pts) < 3:
            raise RegionError("a polygon needs at least 3 distinct vertices")
        area2 = sum(cross(p, q) for p, q in zip(pts, pts[1:] + pts[:1]))
        if area2 == 0:
            raise RegionError("degenerate polygon")
        if area2 < 0:
            pts.reverse()
        s = min(range(len(pts)), key=lambda i: pts[i])
        seq = pts[s:] + pts[:s] + [pts[s]]
        lower = [seq[0]]
        i = 1
        while i < len(seq) and seq[i][0] > lower[-1][0]:
            lower.append(seq[i])
            i += 1
        rest = seq[i - 1:]
        if len(rest) > 1 and rest[1][0] == rest[0][0]:
            rest = rest[1:]
        if len(rest) > 1 and rest[-2][0] == rest[-1][0]:
            rest = rest[:-1]
        upper = rest[::-1]
        for a, b in zip(upper, upper[1:]):
            if b[0] <= a[0]:
                raise RegionError("polygon is not x-monotone")
        if len(lower) < 2 or upper[0][0] != lower[0][0] or upper[-1][0] != lower[-1][0]:
            raise RegionError("polygon is not x-monotone")
        return cls(
            lower[0][0],
            lower[-1][0],
            PLBoundaryFn([p[0] for p in lower], [p[1] for p in lower]),
            PLBoundaryFn([p[0] for p in upper], [p[1] for p in upper]),
        )

    # queries

    def slice(self, x0) -> Optional[Interval]:
        return slice_region(self, x0)

    def contains(self, p, closed: bool = True) -> bool:
        """Membership in B; closed=True tests the closed hull."""
        x, y = as_point(p)
        if not self.x_min <= x <= self.x_max:
            return False
        lo, hi = self.lower(x), self.upper(x)
        if closed:
            return lo <= y <= hi
        iv = slice_region(self, x)
        return iv is not None and iv.contains(y)

    def in_interior(self, p) -> bool:
        x, y = as_point(p)
        return self.x_min < x < self.x_max and self.lower(x) < y < self.upper(x)

    def vertices(self) -> List[Point]:
        """Counter-clockwise vertex cycle with collinear points removed."""
        lo, up = self.lower.canonical(), self.upper.canonical()
        cyc = list(zip(lo.xs, lo.ys)) + list(zip(up.xs, up.ys))[::-1]
        cyc = [p for i, p in enumerate(cyc) if p != cyc[i - 1]]
        changed = True
        while changed and len(cyc) > 3:
            changed = False
            for i in range(len(cyc)):
                a, b, c = cyc[i - 1], cyc[i], cyc[(i + 1) % len(cyc)]
                if cross((b[0] - a[0], b[1] - a[1]), (c[0] - b[0], c[1] - b[1])) == 0:
                    del cyc[i]
                    changed = True
                    break
        return cyc

    def breakpoints(self) -> List[Fraction]:
        return sorted(set(self.lower.xs) | set(self.upper.xs))

    def bbox(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.x_min, min(self.lower.ys), self.x_max, max(self.upper.ys))

    def area(self) -> Fraction:
        v = self.vertices()
        return sum(cross(p, q) for p, q in zip(v, v[1:] + v[:1])) / 2

    def restrict(self, a, b, open_left=False, open_right=False) -> "Region":
        closure = dict(self.closure)
        if a != self.x_min or open_left:
            closure["left"] = not open_left
        if b != self.x_max or open_right:
            closure["right"] = not open_right
        return Region(a, b, self.lower.restrict(a, b), self.upper.restrict(a, b), closure)

    def with_breakpoints(self, extra) -> "Region":
        extra = list(extra)
        return Region(self.x_min, self.x_max, self.lower.with_breakpoints(extra),
                      self.upper.with_breakpoints(extra), self.closure)

    def same_set(self, other: "Region") -> bool:
        return (
            self.x_min == other.x_min
            and self.x_max == other.x_max
            and self.lower == other.lower
            and self.upper == other.upper
        )

    def __eq__(self, other):
        if not isinstance(other, Region):
            return NotImplemented
        return self.same_set(other) and self.closure == other.closure

    def __hash__(self):
        return hash((self.x_min, self.x_max, self.lower, self.upper))

    def to_json(self) -> dict:
        return {
            "x_min": rat_str(self.x_min),
            "x_max": rat_str(self.x_max),
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "closure": {k: self.closure[k] for k in SIDES},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Region":
        return cls(
            data["x_min"],
            data["x_max"],
            PLBoundaryFn.from_json(data["lower"]),
            PLBoundaryFn.from_json(data["upper"]),
            dict(data.get("closure", {})),
        )

    def __repr__(self):
        verts = ", ".join(f"({rat_str(x)}, {rat_str(y)})" for x, y in self.vertices())
        return f"Region([{verts}])"


# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    where: Optional[Tuple] = None


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def kinds(self) -> List[str]:
        return [v.kind for v in self.violations]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {"kind": v.kind, "message": v.message,
                 "where": [rat_str(c) if isinstance(c, Fraction) else c for c in v.where] if v.where else None}
                for v in self.violations
            ],
        }


def validate(region: Region) -> ValidationReport:
    """Check the vertical-slice and boundary laws of a region."""
    report = ValidationReport()
    for name, fn in (("lower", region.lower), ("upper", region.upper)):
        for x in fn.jumps():
            report.violations.append(Violation(
                "interior_vertical",
                f"{name} boundary has a vertical segment at interior x = {rat_str(x)}",
                (x,),
            ))
    xs = region.breakpoints()
    for x in xs:
        for lo, hi in ((region.lower.left_value(x), region.upper.left_value(x)),
                       (region.lower.right_value(x), region.upper.right_value(x))):
            interior = region.x_min < x < region.x_max
            if lo > hi:
                report.violations.append(Violation(
                    "empty_slice",
                    f"upper({rat_str(x)}) = {rat_str(hi)} < lower({rat_str(x)}) = {rat_str(lo)}",
                    (x,),
                ))
                break
            if lo == hi and interior:
                report.violations.append(Violation(
                    "pinched_slice", f"interior slice at x = {rat_str(x)} is a single point", (x,)))
                break
    for side, x in (("left", region.x_min), ("right", region.x_max)):
        if region.lower(x) == region.upper(x) and not region.closure[side]:
            report.violations.append(Violation(
                "degenerate_open_end", f"{side} end collapses to a point but is marked open", (x,)))
    return report


def slice_region(region: Region, x0) -> Optional[Interval]:
    x0 = as_rat(x0)
    if x0 < region.x_min or x0 > region.x_max:
        return None
    lo, hi = region.lower(x0), region.upper(x0)
    if x0 in (region.x_min, region.x_max):
        side = "left" if x0 == region.x_min else "right"
        if not region.closure[side]:
            return None
        return Interval(lo, hi, True, True)
    return Interval(lo, hi, region.closure["lower"], region.closure["upper"])


# corners and lattice checks


@dataclass(frozen=True)
class CornerData:
    """A corner with the primitive directions of its two edges.

    Both directions point away from the corner: ``incoming_edge`` back along
    the edge arriving in counter-clockwise order, ``outgoing_edge`` along the
    edge leaving it.
    """

    position: Point
    incoming_edge: Tuple[int, int]
    outgoing_edge: Tuple[int, int]
    convex: bool
    on_open_edge: bool = False

    @property
    def determinant(self) -> int:
        a, b = self.outgoing_edge, self.incoming_edge
        return a[0] * b[1] - a[1] * b[0]


def _edge_is_open(region: Region, p, q) -> bool:
    if p[0] == q[0]:
        side = "left" if p[0] == region.x_min else "right"
        return not region.closure[side]
    # counter-clockwise: lower edges run left to right
    side = "lower" if q[0] > p[0] else "upper"
    return not region.closure[side]


def corners(region: Region) -> List[CornerData]:
    verts = region.vertices()
    out = []
    n = len(verts)
    for i, v in enumerate(verts):
        prev, nxt = verts[i - 1], verts[(i + 1) % n]
        back = (prev[0] - v[0], prev[1] - v[1])
        fwd = (nxt[0] - v[0], nxt[1] - v[1])
        turn = cross((v[0] - prev[0], v[1] - prev[1]), fwd)
        out.append(CornerData(
            position=v,
            incoming_edge=primitive(back),
            outgoing_edge=primitive(fwd),
            convex=turn > 0,
            on_open_edge=_edge_is_open(region, prev, v) or _edge_is_open(region, v, nxt),
        ))
    return out


@dataclass
class DelzantReport:
    ok: bool
    issues: List[str] = field(default_factory=list)
    checked: int = 0

    def __bool__(self):
        return self.ok


def check_delzant(region: Region, skip_x: Iterable = ()) -> DelzantReport:
    """Unimodular, locally convex corners; corners on lines in skip_x are ignored."""
    skip = {as_rat(x) for x in skip_x}
    issues = []
    checked = 0
    for c in corners(region):
        if c.on_open_edge or c.position[0] in skip:
            continue
        checked += 1
        where = f"({rat_str(c.position[0])}, {rat_str(c.position[1])})"
        if abs(c.determinant) != 1:
            issues.append(f"corner {where}: edge directions {c.incoming_edge}, {c.outgoing_edge} "
                          f"have determinant {c.determinant}")
        if not c.convex:
            issues.append(f"corner {where} is not locally convex")
    return DelzantReport(not issues, issues, checked)


# affine images and equivalence


def apply_affine(region: Region, h: ZAffine2) -> Region:
    """Image h(B); vertical maps keep the breakpoints, others go through the vertex cycle."""
    v = is_vert(h)
    if v is not None:
        fl = lambda fn: fn.map(lambda x, y: v.k * x + v.d * y + v.a)
        lo, up = fl(region.lower), fl(region.upper)
        closure = dict(region.closure)
        if v.d < 0:
            lo, up = up, lo
            closure["lower"], closure["upper"] = region.closure["upper"], region.closure["lower"]
        return Region(region.x_min, region.x_max, lo, up, closure)
    return Region.from_polygon([h(p) for p in region.vertices()])


def _canonical_cycle(verts: Sequence[Point]) -> Tuple[Point, ...]:
    verts = list(verts)
    area2 = sum(cross(p, q) for p, q in zip(verts, verts[1:] + verts[:1]))
    if area2 < 0:
        verts.reverse()
    s = min(range(len(verts)), key=lambda i: verts[i])
    return tuple(verts[s:] + verts[:s])


def agl_equivalence(P: Region, Q: Region) -> Optional[ZAffine2]:
    """Find h in AGL(2;Z) with h(P) = Q, or None.

    The search matches the first corner of P to each corner of Q in both
    orientations, solves for A from the two adjacent edge vectors, and then
    checks the whole vertex cycle.
    """
    vp, vq = P.vertices(), Q.vertices()
    if len(vp) != len(vq):
        return None
    target = _canonical_cycle(vq)
    n = len(vp)
    p0, p1, pm = vp[0], vp[1], vp[-1]
    u = (p1[0] - p0[0], p1[1] - p0[1])
    w = (pm[0] - p0[0], pm[1] - p0[1])
    du = cross(u, w)
    for j in range(n):
        for step in (1, -1):
            q0, q1, qm = vq[j], vq[(j + step) % n], vq[(j - step) % n]
            u2 = (q1[0] - q0[0], q1[1] - q0[1])
            w2 = (qm[0] - q0[0], qm[1] - q0[1])
            # A [u w] = [u2 w2]  =>  A = [u2 w2] [u w]^-1
            inv = ((w[1] / du, -w[0] / du), (-u[1] / du, u[0] / du))
            a = u2[0] * inv[0][0] + w2[0] * inv[1][0]
            b = u2[0] * inv[0][1] + w2[0] * inv[1][1]
            c = u2[1] * inv[0][0] + w2[1] * inv[1][0]
            d = u2[1] * inv[0][1] + w2[1] * inv[1][1]
            if any(e.denominator != 1 for e in (a, b, c, d)):
                continue
            A = ((int(a), int(b)), (int(c), int(d)))
            if A[0][0] * A[1][1] - A[0][1] * A[1][0] not in (1, -1):
                continue
            Ap0 = (A[0][0] * p0[0] + A[0][1] * p0[1], A[1][0] * p0[0] + A[1][1] * p0[1])
            h = ZAffine2(A, (q0[0] - Ap0[0], q0[1] - Ap0[1]))
            if _canonical_cycle([h(p) for p in vp]) == target:
                return h
    return None


def regions_equal_as_sets(P: Region, Q: Region) -> bool:
    return _canonical_cycle(P.vertices()) == _canonical_cycle(Q.vertices())
