"""2x2 matrices over the Laurent ring."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .scalars import LaurentElem, NonInvertible, Scalar, parse_laurent

Entry = Union[int, Fraction, Scalar, LaurentElem]


def _laurent(x: Entry, N: int | None = None) -> LaurentElem:
    return x if isinstance(x, LaurentElem) else LaurentElem.const(x, N)


@dataclass(frozen=True, eq=True)
class Mat2:
    """Row-major 2x2 matrix ``(u11, u12; u21, u22)`` with Laurent entries.

    Constant matrices are the special case where every entry is a constant.
    """

    u11: LaurentElem
    u12: LaurentElem
    u21: LaurentElem
    u22: LaurentElem

    def __post_init__(self):
        for name in ("u11", "u12", "u21", "u22"):
            object.__setattr__(self, name, _laurent(getattr(self, name)))

    @classmethod
    def of(cls, u11: Entry, u12: Entry, u21: Entry, u22: Entry) -> "Mat2":
        return cls(_laurent(u11), _laurent(u12), _laurent(u21), _laurent(u22))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls.of(1, 0, 0, 1)

    @classmethod
    def zero(cls) -> "Mat2":
        return cls.of(0, 0, 0, 0)

    @classmethod
    def unit(cls, i: int, j: int) -> "Mat2":
        """The matrix unit E_ij (1-based)."""
        vals = [0, 0, 0, 0]
        vals[2 * (i - 1) + (j - 1)] = 1
        return cls.of(*vals)

    @property
    def entries(self) -> tuple[LaurentElem, LaurentElem, LaurentElem, LaurentElem]:
        return (self.u11, self.u12, self.u21, self.u22)

    # algebra --------------------------------------------------------------
    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(*(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(*(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat2":
        return Mat2(*(-a for a in self.entries))

    def scale(self, c: Entry) -> "Mat2":
        c = _laurent(c, self.u11.N)
        return Mat2(*(c * a for a in self.entries))

    def __matmul__(self, other: "Mat2") -> "Mat2":
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    __mul__ = __matmul__

    def det(self) -> LaurentElem:
        return self.u11 * self.u22 - self.u12 * self.u21

    def trace(self) -> LaurentElem:
        return self.u11 + self.u22

    def is_constant(self) -> bool:
        return all(e.is_constant() for e in self.entries)

    def is_sl2(self) -> bool:
        return self.det() == 1

    def is_scalar_multiple_of_identity(self) -> bool:
        return not self.u12 and not self.u21 and self.u11 == self.u22

    def derivative(self) -> "Mat2":
        """Entrywise d/dt."""
        return Mat2(*(e.derivative() for e in self.entries))

    def traceless_part(self) -> "Mat2":
        half = (self.u11 - self.u22) * Fraction(1, 2)
        return Mat2(half, self.u12, self.u21, -half)

    def dagger(self) -> "Mat2":
        return dagger(self)

    def inverse(self) -> "Mat2":
        return inverse(self)

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            return inverse(self) ** (-k)
        out = Mat2.identity()
        for _ in range(k):
            out = out @ self
        return out

    # formatting -----------------------------------------------------------
    def __str__(self) -> str:
        def fmt(e: LaurentElem) -> str:
            return str(e).replace(" ", "")
        return f"[[{fmt(self.u11)},{fmt(self.u12)}],[{fmt(self.u21)},{fmt(self.u22)}]]"

    def to_json(self) -> list:
        return [[self.u11.to_json(), self.u12.to_json()], [self.u21.to_json(), self.u22.to_json()]]

    @classmethod
    def from_json(cls, data: list, N: int | None = None) -> "Mat2":
        (a, b), (c, d) = data
        return cls(*(LaurentElem.from_json(x, N) for x in (a, b, c, d)))


def dagger(M: Mat2) -> Mat2:
    """``(u11, u12; u21, u22) -> (-u22, u12; u21, -u11)``.

    An anti-involution; on determinant-one matrices it equals ``-M^{-1}``.
    """
    return Mat2(-M.u22, M.u12, M.u21, -M.u11)


def inverse(A: Mat2) -> Mat2:
    """Adjugate inverse; the determinant must be a unit of the Laurent ring."""
    det = A.det()
    if not det.is_unit():
        raise NonInvertible(f"determinant {det} of {A} is not a unit")
    inv = det.inverse()
    return Mat2(A.u22 * inv, -A.u12 * inv, -A.u21 * inv, A.u11 * inv)


def sl2_basis() -> dict[str, Mat2]:
    """Chevalley basis e, h, f of sl_2."""
    return {"e": Mat2.of(0, 1, 0, 0), "h": Mat2.of(1, 0, 0, -1), "f": Mat2.of(0, 0, 1, 0)}


def commutator(X: Mat2, Y: Mat2) -> Mat2:
    return X @ Y - Y @ X


_ALIASES = {"I": "[[1,0],[0,1]]", "-I": "[[-1,0],[0,-1]]", "0": "[[0,0],[0,0]]"}


def parse_mat2(text: str, N: int | None = None) -> Mat2:
    """Parse ``"[[1,t],[0,1]]"`` (entries are Laurent literals)."""
    text = _ALIASES.get(text.strip(), text).strip()
    m = re.fullmatch(r"\[\s*\[(.*)\]\s*,\s*\[(.*)\]\s*\]", text)
    if not m:
        raise ValueError(f"cannot parse matrix literal {text!r}")
    rows = []
    for row in m.groups():
        parts = _split_top(row)
        if len(parts) != 2:
            raise ValueError(f"matrix row {row!r} must have two entries")
        rows.extend(parse_laurent(p, N) for p in parts)
    return Mat2(*rows)


def _split_top(s: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]
