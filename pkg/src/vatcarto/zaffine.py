"""Exact integral affine maps of the plane.

Elements of AGL(2;Z) are stored as an integer 2x2 matrix of determinant
+1 or -1 together with a rational translation.  The vertical subgroup
Vert(2;Z) consists of the maps (x, y) -> (x, k*x + d*y + a).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Tuple

Point = Tuple[Fraction, Fraction]
Matrix = Tuple[Tuple[int, int], Tuple[int, int]]


def as_rat(value) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction.

    Floats are refused: every coordinate in the exact modules must be rational
    by construction, not by accident of binary rounding.
    """
    if isinstance(value, bool):
        raise TypeError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as a fraction") from exc
    raise TypeError(f"not a rational number: {value!r}")


def as_point(p) -> Point:
    x, y = p
    return (as_rat(x), as_rat(y))


def rat_str(q: Fraction) -> str:
    """Reduced-fraction string, "p/q" or "p" when the denominator is 1."""
    q = as_rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _det(m: Matrix) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _matmul(m: Matrix, n: Matrix) -> Matrix:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def _matvec(m: Matrix, v) -> Point:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def _as_matrix(a) -> Matrix:
    rows = tuple(tuple(row) for row in a)
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ValueError(f"linear part must be 2x2, got {a!r}")
    for entry in rows[0] + rows[1]:
        if isinstance(entry, bool) or not isinstance(entry, int):
            if isinstance(entry, Fraction) and entry.denominator == 1:
                continue
            raise ValueError(f"linear part must have integer entries, got {entry!r}")
    return tuple(tuple(int(e) for e in r) for r in rows)  # type: ignore[return-value]


@dataclass(frozen=True)
class ZAffine2:
    """An element p -> A p + b of AGL(2;Z)."""

    A: Matrix
    b: Point = (Fraction(0), Fraction(0))

    def __post_init__(self):
        A = _as_matrix(self.A)
        if _det(A) not in (1, -1):
            raise ValueError(f"det(A) must be +1 or -1, got {_det(A)} for {A}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", as_point(self.b))

    @classmethod
    def identity(cls) -> "ZAffine2":
        return cls(((1, 0), (0, 1)))

    @classmethod
    def shear(cls, k: int, x0=0) -> "ZAffine2":
        """T^k fixing the vertical line x = x0 pointwise."""
        x0 = as_rat(x0)
        return cls(((1, 0), (k, 1)), (0, -k * x0))

    @property
    def det(self) -> int:
        return _det(self.A)

    def __call__(self, p) -> Point:
        ax, ay = _matvec(self.A, as_point(p))
        return (ax + self.b[0], ay + self.b[1])

    apply = __call__

    def linear(self, v) -> Point:
        return _matvec(self.A, as_point(v))

    def __matmul__(self, other: "ZAffine2") -> "ZAffine2":
        return compose(self, other)

    def inverse(self) -> "ZAffine2":
        (a, b), (c, d) = self.A
        det = self.det
        inv = ((d * det, -b * det), (-c * det, a * det))
        bx, by = _matvec(inv, self.b)
        return ZAffine2(inv, (-bx, -by))

    def is_vert(self) -> Optional["VertElement"]:
        return is_vert(self)

    def to_json(self) -> dict:
        return {"A": [list(r) for r in self.A], "b": [rat_str(c) for c in self.b]}

    @classmethod
    def from_json(cls, data: dict) -> "ZAffine2":
        return cls(data["A"], tuple(as_rat(c) for c in data["b"]))

    def __repr__(self):
        return f"ZAffine2(A={self.A}, b=({rat_str(self.b[0])}, {rat_str(self.b[1])}))"


def compose(g: ZAffine2, h: ZAffine2) -> ZAffine2:
    """Return g o h, i.e. the map p -> g(h(p))."""
    A = _matmul(g.A, h.A)
    bx, by = _matvec(g.A, h.b)
    return ZAffine2(A, (bx + g.b[0], by + g.b[1]))


def apply(g: ZAffine2, p) -> Point:
    return g(p)


@dataclass(frozen=True)
class VertElement:
    """(x, y) -> (x, k*x + d*y + a), an element of Vert(2;Z)."""

    k: int
    d: int
    a: Fraction = Fraction(0)

    def __post_init__(self):
        if self.d not in (1, -1):
            raise ValueError(f"d must be +1 or -1, got {self.d}")
        object.__setattr__(self, "a", as_rat(self.a))

    def to_affine(self) -> ZAffine2:
        return ZAffine2(((1, 0), (self.k, self.d)), (0, self.a))

    def __call__(self, p) -> Point:
        x, y = as_point(p)
        return (x, self.k * x + self.d * y + self.a)


def is_vert(g: ZAffine2) -> Optional[VertElement]:
    """Decompose g as a vertical map, or return None if it moves vertical lines."""
    (a, b), (c, d) = g.A
    if a == 1 and b == 0 and d in (1, -1) and g.b[0] == 0:
        return VertElement(c, d, g.b[1])
    return None


@dataclass(frozen=True)
class Shear:
    """The power T^power of T = ((1,0),(1,1))."""

    power: int

    @property
    def matrix(self) -> Matrix:
        return ((1, 0), (self.power, 1))

    def __mul__(self, other: "Shear") -> "Shear":
        return Shear(self.power + other.power)

    def inverse(self) -> "Shear":
        return Shear(-self.power)

    def to_affine(self, x0=0) -> ZAffine2:
        return ZAffine2.shear(self.power, x0)


def shear_matrix(k: int) -> Matrix:
    return ((1, 0), (k, 1))


def matmul(m: Matrix, n: Matrix) -> Matrix:
    return _matmul(m, n)


def matinv(m: Matrix) -> Matrix:
    (a, b), (c, d) = m
    det = _det(m)
    if det not in (1, -1):
        raise ValueError(f"matrix is not unimodular: {m}")
    return ((d * det, -b * det), (-c * det, a * det))
