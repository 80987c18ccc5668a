"""Smooth eta-cartographic embeddings and their numerical checks.

The exact transition map t(x, y) = (x, y + s(x)) bends along whole focus
lines.  Inside each maximal half-strip the bend is rounded off: on the side
of the seam that holds the cut, the kink K*(x - x0)^+ of s is replaced by
K*rho_a(x - x0), where rho_a is a C^2 ramp that equals 0 for u <= -a and u
for u >= a.  A quintic smooth-step in y blends the rounded map into t
across a margin next to the seam, so F = t on the other side of the seam
and everywhere outside the strips.

This is the only module that works in floating point; all inputs come from
the exact modules and are cast once.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .cartography import PiecewiseVertMap, Presentation, transition_map
from .cuts import as_signs
from .strips import AdmissibleTriple, HalfStrip, check_admissible, construct_admissible
from .zaffine import is_vert, rat_str


class EmbeddingError(ValueError):
    pass


def smoothstep(u):
    """Quintic smooth-step 6u^5 - 15u^4 + 10u^3 on [0, 1], clipped outside."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (u * (6.0 * u - 15.0) + 10.0)


def ramp(u, a: float):
    """C^2 ramp: 0 for u <= -a, u for u >= a; its derivative is a smooth-step."""
    u = np.asarray(u, dtype=float)
    tau = np.clip((u + a) / (2.0 * a), 0.0, 1.0)
    inner = 2.0 * a * tau ** 4 * (tau * (tau - 3.0) + 2.5)
    return np.where(u >= a, u, inner)


def _interp(xs, ys, x):
    return np.interp(x, xs, ys)


@dataclass
class StripBlend:
    """Seam and smoothing data for one maximal half-strip."""

    slot: int
    x0: float
    y0: float
    sign: int
    x_lo: float
    x_hi: float
    gamma_xs: np.ndarray
    gamma_ys: np.ndarray
    kink: int
    a: float
    seam: float
    margin: float

    def in_strip(self, x, y):
        inside = (x >= self.x_lo) & (x <= self.x_hi)
        g = _interp(self.gamma_xs, self.gamma_ys, np.clip(x, self.x_lo, self.x_hi))
        return inside & (self.sign * y >= self.sign * g)

    def weight(self, x, y):
        """Blend weight: 0 on the seam's far side, 1 beyond the margin on the cut side."""
        inside = (x >= self.x_lo) & (x <= self.x_hi)
        d = self.sign * (y - self.seam)
        if self.margin > 0:
            w = smoothstep(d / self.margin)
        else:
            w = (d > 0).astype(float)
        return np.where(inside, w, 0.0)

    def correction(self, x):
        u = x - self.x0
        return self.kink * (ramp(u, self.a) - np.maximum(u, 0.0))

    def to_json(self) -> dict:
        return {"slot": self.slot, "center": [self.x0, self.y0], "sign": self.sign, "kink": self.kink,
                "ramp_half_width": self.a, "seam": self.seam, "margin": self.margin}


class EtaEmbedding:
    """F(x, y) = (x, F2(x, y)) built from a presentation, sign choice and admissible triple."""

    def __init__(self, pres: Presentation, eps, triple: AdmissibleTriple, t: PiecewiseVertMap,
                 blends: List[StripBlend]):
        self.pres = pres
        self.eps = as_signs(eps)
        self.triple = triple
        self.transition = t
        self.blends = blends
        self._breaks = np.array([float(b) for b in t.breaks])
        verts = [is_vert(g) for g in t.pieces]
        self._k = np.array([float(v.k) for v in verts])
        self._a = np.array([float(v.a) for v in verts])
        self._strips = [_float_strip(s) for s in triple]

    def shift(self, x):
        """s(x) with t(x, y) = (x, y + s(x)); right-hand piece on break lines."""
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self._breaks, x, side="right")
        return self._k[idx] * x + self._a[idx]

    def t2(self, x, y):
        return np.asarray(y, dtype=float) + self.shift(x)

    def second(self, x, y, weights: Optional[List] = None):
        """F2 on arrays; ``weights`` overrides the blend weight per strip."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = self.t2(x, y)
        for n, b in enumerate(self.blends):
            w = b.weight(x, y) if weights is None else weights[n]
            out = out + w * b.correction(x)
        return out

    def __call__(self, p) -> Tuple[float, float]:
        x, y = float(p[0]), float(p[1])
        return (x, float(self.second(np.array([x]), np.array([y]))[0]))

    def evaluate(self, x, y):
        x = np.asarray(x, dtype=float)
        return x.copy(), self.second(x, y)

    def in_strips(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        mask = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        for s in self._strips:
            mask |= s.in_strip(x, y)
        return mask

    def to_json(self) -> dict:
        return {"eps": list(self.eps), "transition": self.transition.to_json(),
                "blends": [b.to_json() for b in self.blends]}


@dataclass
class _FloatStrip:
    sign: int
    x_lo: float
    x_hi: float
    gamma_xs: np.ndarray
    gamma_ys: np.ndarray

    def in_strip(self, x, y):
        inside = (x >= self.x_lo) & (x <= self.x_hi)
        g = np.interp(np.clip(x, self.x_lo, self.x_hi), self.gamma_xs, self.gamma_ys)
        return inside & (self.sign * y >= self.sign * g)


def _float_strip(s: HalfStrip) -> _FloatStrip:
    return _FloatStrip(s.sign, float(s.x_lo), float(s.x_hi),
                       np.array([float(x) for x in s.gamma.xs]), np.array([float(y) for y in s.gamma.ys]))


def _kink(t: PiecewiseVertMap, x0) -> int:
    return is_vert(t.right_piece(x0)).k - is_vert(t.left_piece(x0)).k


def build_embedding(pres: Presentation, eps, triple: Optional[AdmissibleTriple] = None,
                    margin: Optional[float] = None) -> EtaEmbedding:
    """Seam-blended smoothing of the transition map to the eps-image.

    ``margin`` overrides the blend margin, an absolute height in y; 0 gives
    the unsmoothed step between the two branches.
    """
    eps = as_signs(eps)
    if triple is None:
        triple = construct_admissible(pres.region, pres.focus, eps)
    if tuple(triple.signs) != tuple(eps):
        raise EmbeddingError(f"triple signs {triple.signs} differ from eps {eps}")
    report = check_admissible(triple, pres.region, pres.focus)
    if not report.ok:
        raise EmbeddingError("triple is not admissible: " + "; ".join(v.message for v in report.violations))
    t = transition_map(pres.focus, pres.ref_signs, eps, pres.global_sign)
    blends = []
    for slot in triple.maximal():
        s = triple.strips[slot]
        x0, y0 = s.center
        eta = float(s.width)
        gap = float(min(s.sign * (y0 - g) for g in s.gamma.ys))
        seam = float(y0) - s.sign * gap / 2
        delta = min(eta / 10, gap / 2)
        k = _kink(t, x0)
        a = min(eta / 6, 5 * delta / 3) / max(abs(k), 1)
        blends.append(StripBlend(
            slot, float(x0), float(y0), s.sign, float(s.x_lo), float(s.x_hi),
            np.array([float(x) for x in s.gamma.xs]), np.array([float(y) for y in s.gamma.ys]),
            k, a, seam, delta if margin is None else float(margin)))
    return EtaEmbedding(pres, eps, triple, t, blends)


@dataclass
class EmbeddingCheckReport:
    seam_discontinuity: float = 0.0
    seam_c1_defect: float = 0.0
    cut_c1_defect: float = 0.0
    injectivity_violations: int = 0
    agreement_violations: int = 0
    x_violations: int = 0
    samples: int = 0
    seam_tol: float = 1e-9
    c1_tol: float = 1e-4

    @property
    def c1_defect(self) -> float:
        return max(self.seam_c1_defect, self.cut_c1_defect)

    @property
    def ok(self) -> bool:
        return (self.seam_discontinuity < self.seam_tol and self.c1_defect < self.c1_tol
                and self.injectivity_violations == 0 and self.agreement_violations == 0
                and self.x_violations == 0)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "seam_discontinuity": self.seam_discontinuity,
            "seam_c1_defect": self.seam_c1_defect,
            "cut_c1_defect": self.cut_c1_defect,
            "injectivity_violations": self.injectivity_violations,
            "agreement_violations": self.agreement_violations,
            "x_violations": self.x_violations,
            "samples": self.samples,
            "tolerances": {"seam": self.seam_tol, "c1": self.c1_tol},
        }


def _d_plus(f, step):
    """Second-order one-sided derivative from samples f(0), f(h), f(2h)."""
    f0, f1, f2 = f
    return (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * step)


def _region_bounds(region, x):
    lo = np.interp(x, [float(v) for v in region.lower.xs], [float(v) for v in region.lower.ys])
    hi = np.interp(x, [float(v) for v in region.upper.xs], [float(v) for v in region.upper.ys])
    return lo, hi


def check_embedding(F: EtaEmbedding, grid: int = 512, step: float = 1e-5, csv_path: Optional[str] = None,
                    seam_tol: float = 1e-9, c1_tol: float = 1e-4) -> EmbeddingCheckReport:
    region = F.pres.region
    rep = EmbeddingCheckReport(seam_tol=seam_tol, c1_tol=c1_tol)
    x_min, y_min, x_max, y_max = (float(v) for v in region.bbox())
    xs = np.linspace(x_min, x_max, grid)
    ys = np.linspace(y_min, y_max, grid)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    lo, hi = _region_bounds(region, xs)
    inside = (Y >= lo[:, None]) & (Y <= hi[:, None])
    F1, F2 = F.evaluate(X, Y)
    rep.samples = int(inside.sum())
    rep.x_violations = int(np.count_nonzero((F1 != X) & inside))

    # injectivity: F2 strictly increasing up every column
    masked = np.where(inside, F2, np.nan)
    for col, m in zip(masked, inside):
        vals = col[m]
        rep.injectivity_violations += int(np.count_nonzero(np.diff(vals) <= 0))

    # agreement with the exact map outside the strips
    outside = inside & ~F.in_strips(X, Y)
    rep.agreement_violations = int(np.count_nonzero(outside & (np.abs(F2 - F.t2(X, Y)) >= 1e-12)))
    stride = max(1, grid // 32)
    for i in range(0, grid, stride):
        for j in range(0, grid, stride):
            if outside[i, j]:
                px, py = Fraction(float(X[i, j])), Fraction(float(Y[i, j]))
                exact = F.transition((px, py))[1]
                if abs(float(F2[i, j]) - float(exact)) >= 1e-12:
                    rep.agreement_violations += 1

    for n, b in enumerate(F.blends):
        sx = np.linspace(b.x_lo, b.x_hi, grid)
        blo, bhi = _region_bounds(region, sx)
        on = (blo < b.seam) & (b.seam < bhi)
        sx = sx[on]
        if sx.size:
            h = np.full_like(sx, b.seam)
            limit_l = _branch(F, sx, h, n, 0.0)
            limit_k = _branch(F, sx, h, n, 1.0 if b.margin <= 0 else 0.0)
            rep.seam_discontinuity = max(rep.seam_discontinuity, float(np.max(np.abs(limit_k - limit_l))))
            e = b.sign  # +e points into the cut side
            k_side = [F.second(sx, h + e * m * step) for m in range(3)]
            l_side = [F.second(sx, h - e * m * step) for m in range(3)]
            dk = e * _d_plus(k_side, step)
            dl = -e * _d_plus(l_side, step)
            defect = np.abs(dk - dl)
            away = np.abs(sx - b.x0) > 3 * step
            if away.any():
                dxk, dxl = ((F.second(sx + step, h + side * e * step) - F.second(sx - step, h + side * e * step))
                            / (2 * step) for side in (1, -1))
                defect = np.maximum(defect, np.where(away, np.abs(dxk - dxl), 0.0))
            rep.seam_c1_defect = max(rep.seam_c1_defect, float(np.max(defect)))
        # across the former cut line, on the cut side beyond the blend margin
        lo0, hi0 = _region_bounds(region, np.array([b.x0]))
        end = float(hi0[0]) if b.sign > 0 else float(lo0[0])
        cy = np.linspace(b.y0, end, grid)
        cx = np.full_like(cy, b.x0)
        right = [F.second(cx + m * step, cy) for m in range(3)]
        left = [F.second(cx - m * step, cy) for m in range(3)]
        jump = np.abs(_d_plus(right, step) + _d_plus(left, step))
        rep.cut_c1_defect = max(rep.cut_c1_defect, float(np.max(jump)))

    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["x", "y", "F1", "F2"])
            for i in range(0, grid, stride):
                for j in range(0, grid, stride):
                    if inside[i, j]:
                        wr.writerow([repr(float(X[i, j])), repr(float(Y[i, j])),
                                     repr(float(F1[i, j])), repr(float(F2[i, j]))])
    return rep


def _branch(F: EtaEmbedding, x, y, n: int, w: float):
    weights = [b.weight(x, y) for b in F.blends]
    weights[n] = np.full_like(x, w)
    return F.second(x, y, weights)


@dataclass
class LimitStep:
    scale: Fraction
    discrepancy: float
    nested: bool

    def to_json(self) -> dict:
        return {"scale": rat_str(self.scale), "discrepancy": self.discrepancy, "nested": self.nested}


@dataclass
class LimitReport:
    steps: List[LimitStep] = field(default_factory=list)

    @property
    def nested(self) -> bool:
        return all(s.nested for s in self.steps)

    @property
    def decreasing(self) -> bool:
        d = [s.discrepancy for s in self.steps]
        return all(b < a for a, b in zip(d, d[1:])) or all(v == 0 for v in d)

    def to_json(self) -> dict:
        return {"nested": self.nested, "decreasing": self.decreasing, "steps": [s.to_json() for s in self.steps]}


def limit_sequence(pres: Presentation, eps, n_steps: int, triple: Optional[AdmissibleTriple] = None,
                   resolution: int = 512) -> LimitReport:
    """Rasterised images F(B minus strips) along the halving sequence eta * 2^-k.

    Off the strips F equals the exact map t, so a pixel q lies in
    F(B minus strips) iff t^-1(q) = (qx, qy - s(qx)) lies in B and in no strip.
    The discrepancy is the area of t(B) not yet covered.
    """
    eps = as_signs(eps)
    if triple is None:
        triple = construct_admissible(pres.region, pres.focus, eps)
    base = build_embedding(pres, eps, triple)
    image = base.transition.apply_region(pres.region)
    x_min, y_min, x_max, y_max = (float(v) for v in image.bbox())
    dx = (x_max - x_min) / resolution
    dy = (y_max - y_min) / resolution
    qx = x_min + dx * (np.arange(resolution) + 0.5)
    qy = y_min + dy * (np.arange(resolution) + 0.5)
    QX, QY = np.meshgrid(qx, qy, indexing="ij")
    PY = QY - base.shift(QX)
    lo, hi = _region_bounds(pres.region, qx)
    in_b = (PY >= lo[:, None]) & (PY <= hi[:, None])
    total = int(in_b.sum())
    report = LimitReport()
    prev = None
    for k in range(n_steps + 1):
        scale = Fraction(1, 2 ** k)
        F = build_embedding(pres, eps, triple.scaled(scale))
        img = in_b & ~F.in_strips(QX, PY)
        nested = True if prev is None else bool(np.all(img >= prev))
        report.steps.append(LimitStep(scale, (total - int(img.sum())) * dx * dy, nested))
        prev = img
    return report
