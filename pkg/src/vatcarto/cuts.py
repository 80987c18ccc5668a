"""Focus-focus values, vertical cuts and the jump function.

Focus-focus values are kept in the lexicographic order (x, then y).  Slot s
(1-based) carries the index s + offset, so a finite list can stand for a
window of an infinite index set that includes non-positive indices.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .region import Region, as_point
from .zaffine import Point, as_rat, rat_str


class FocusError(ValueError):
    pass


@dataclass(frozen=True)
class FocusSet:
    points: Tuple[Point, ...] = ()
    multiplicities: Tuple[int, ...] = ()
    offset: int = 0

    def __post_init__(self):
        pts = tuple(as_point(p) for p in self.points)
        mult = tuple(self.multiplicities) or (1,) * len(pts)
        if len(mult) != len(pts):
            raise FocusError(f"{len(mult)} multiplicities for {len(pts)} focus points")
        if any(r < 1 for r in mult):
            raise FocusError("multiplicities must be positive")
        if list(pts) != sorted(pts):
            raise FocusError("focus points must be ordered by (x, y)")
        if len(set(pts)) != len(pts):
            raise FocusError("focus points must be pairwise distinct")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", mult)

    def __len__(self):
        return len(self.points)

    @property
    def simple(self) -> bool:
        return all(r == 1 for r in self.multiplicities)

    def index(self, slot: int) -> int:
        """Index of the 0-based list position ``slot``."""
        return slot + 1 + self.offset

    def slot(self, index: int) -> int:
        return index - 1 - self.offset

    @property
    def indices(self) -> List[int]:
        return [self.index(s) for s in range(len(self))]

    def xs(self) -> List[Fraction]:
        return sorted({p[0] for p in self.points})

    def on_line(self, x) -> List[int]:
        """0-based slots of the focus values on the line {x = x0}, bottom to top."""
        x = as_rat(x)
        return [s for s, p in enumerate(self.points) if p[0] == x]

    def require_simple(self):
        if not self.simple:
            raise FocusError("operation needs a simple focus set (all multiplicities 1)")

    def to_json(self) -> list:
        return [{"x": rat_str(x), "y": rat_str(y), "r": r}
                for (x, y), r in zip(self.points, self.multiplicities)]


MAX_PER_LINE = 8


def order_focus(points: Sequence, offset: int = 0, region: Optional[Region] = None,
                multiplicities: Optional[Sequence[int]] = None, max_per_line: int = MAX_PER_LINE) -> FocusSet:
    """Sort focus values into index order and check they lie in Int(B)."""
    pts = [as_point(p) for p in points]
    mult = list(multiplicities) if multiplicities is not None else [1] * len(pts)
    if len(mult) != len(pts):
        raise FocusError(f"{len(mult)} multiplicities for {len(pts)} focus points")
    if len(set(pts)) != len(pts):
        raise FocusError("two focus values coincide")
    if region is not None:
        for p in pts:
            if not region.in_interior(p):
                raise FocusError(
                    f"focus value ({rat_str(p[0])}, {rat_str(p[1])}) is not in the interior of the region")
    per_line = defaultdict(int)
    for x, _ in pts:
        per_line[x] += 1
    crowded = [x for x, c in per_line.items() if c > max_per_line]
    if crowded:
        raise FocusError(f"more than {max_per_line} focus values on the line x = {rat_str(min(crowded))}")
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    fs = FocusSet(tuple(pts[i] for i in order), tuple(mult[i] for i in order), offset)
    s0, s1 = fs.slot(0), fs.slot(1)
    if 0 <= s0 < len(fs) and 0 <= s1 < len(fs) and fs.points[s0][0] == fs.points[s1][0]:
        raise FocusError("indices 0 and 1 must lie on different vertical lines (x_0 < x_1)")
    return fs


@dataclass(frozen=True)
class SignChoice:
    signs: Tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (1, -1) for s in signs):
            raise FocusError(f"signs must be +1 or -1, got {signs}")
        object.__setattr__(self, "signs", signs)

    def __len__(self):
        return len(self.signs)

    def __getitem__(self, i):
        return self.signs[i]

    def __iter__(self):
        return iter(self.signs)

    def negated(self) -> "SignChoice":
        return SignChoice(tuple(-s for s in self.signs))

    def __str__(self):
        return ",".join("+" if s > 0 else "-" for s in self.signs)


def as_signs(eps) -> SignChoice:
    if isinstance(eps, SignChoice):
        return eps
    if isinstance(eps, str):
        out = []
        for tok in eps.replace(" ", "").split(","):
            if tok in ("+", "+1", "1"):
                out.append(1)
            elif tok in ("-", "-1"):
                out.append(-1)
            elif tok:
                raise FocusError(f"cannot read sign {tok!r}")
        return SignChoice(tuple(out))
    return SignChoice(tuple(eps))


def _check_lengths(focus: FocusSet, eps: SignChoice):
    if len(eps) != len(focus):
        raise FocusError(f"{len(eps)} signs for {len(focus)} focus values")


@dataclass(frozen=True)
class Cut:
    """Vertical ray {x = x_i, sign*y >= sign*y_i}, clipped to B when a region is known."""

    slot: int
    base: Point
    sign: int
    end: Optional[Fraction] = None

    def contains(self, p) -> bool:
        x, y = as_point(p)
        if x != self.base[0] or self.sign * y < self.sign * self.base[1]:
            return False
        return self.end is None or self.sign * y <= self.sign * self.end


@dataclass(frozen=True)
class CutSet:
    rays: Tuple[Cut, ...]

    def contains(self, p) -> bool:
        return any(c.contains(p) for c in self.rays)


def cut_set(focus: FocusSet, eps, region: Optional[Region] = None) -> CutSet:
    eps = as_signs(eps)
    _check_lengths(focus, eps)
    rays = []
    for s, (p, e) in enumerate(zip(focus.points, eps)):
        end = None
        if region is not None:
            end = region.upper(p[0]) if e > 0 else region.lower(p[0])
        rays.append(Cut(s, p, e, end))
    return CutSet(tuple(rays))


def _reject_focus_point(focus: FocusSet, p):
    if p in focus.points:
        raise FocusError(f"j is undefined at the focus value ({rat_str(p[0])}, {rat_str(p[1])})")


def j_direct(focus: FocusSet, eps, p, weighted: bool = False) -> int:
    """Sum of the signs of all cuts through p (optionally times multiplicity)."""
    eps = as_signs(eps)
    _check_lengths(focus, eps)
    p = as_point(p)
    _reject_focus_point(focus, p)
    total = 0
    for (xi, yi), e, r in zip(focus.points, eps, focus.multiplicities):
        if p[0] == xi and e * p[1] >= e * yi:
            total += e * (r if weighted else 1)
    return total


def line_counts(focus: FocusSet, eps, x) -> Tuple[int, int, int]:
    """(N_x, N_x^+, N_x^-) with N_x^- counted negatively."""
    eps = as_signs(eps)
    slots = focus.on_line(x)
    plus = sum(1 for s in slots if eps[s] > 0)
    minus = -sum(1 for s in slots if eps[s] < 0)
    return len(slots), plus, minus


def j_closed_form(focus: FocusSet, eps, p) -> int:
    """j from the line counts: N^- below all values, N^- + k between, N^+ above."""
    eps = as_signs(eps)
    _check_lengths(focus, eps)
    p = as_point(p)
    _reject_focus_point(focus, p)
    n, plus, minus = line_counts(focus, eps, p[0])
    if n == 0:
        return 0
    below = sum(1 for s in focus.on_line(p[0]) if focus.points[s][1] < p[1])
    if below == n:
        return plus
    return minus + below


def disconnecting_lines(focus: FocusSet, eps) -> List[Fraction]:
    """Lines x = x_i entirely covered by cuts (a lower + sign under an upper - sign)."""
    eps = as_signs(eps)
    _check_lengths(focus, eps)
    out = []
    for x in focus.xs():
        seen_plus = False
        for s in focus.on_line(x):
            if eps[s] > 0:
                seen_plus = True
            elif seen_plus:
                out.append(x)
                break
    return out


def complement_connected(focus: FocusSet, eps) -> bool:
    """S_eps is connected iff eps_i >= eps_j whenever i > j share a line."""
    focus.require_simple()
    return not disconnecting_lines(focus, eps)


def reduce_signs(focus: FocusSet, eps) -> SignChoice:
    """The unique sign choice with the same j, a larger complement, and connected complement."""
    focus.require_simple()
    eps = as_signs(eps)
    out = list(eps)
    for x in disconnecting_lines(focus, eps):
        slots = focus.on_line(x)
        n_minus = -line_counts(focus, eps, x)[2]
        for pos, s in enumerate(slots):
            out[s] = -1 if pos < n_minus else 1
    return SignChoice(tuple(out))


def complement_components(focus: FocusSet, eps, region: Region) -> List[Region]:
    """Connected components of B minus the cuts, split along fully cut lines."""
    focus.require_simple()
    cuts = [x for x in disconnecting_lines(focus, eps) if region.x_min < x < region.x_max]
    if not cuts:
        return [region]
    edges = [region.x_min] + cuts + [region.x_max]
    out = []
    for i, (a, b) in enumerate(zip(edges, edges[1:])):
        out.append(region.restrict(a, b, open_left=i > 0, open_right=i < len(edges) - 2))
    return out
