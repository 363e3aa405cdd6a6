"""Exact coefficient arithmetic.

``Scalar`` is an element of the cyclotomic field Q(zeta_N), stored as an
integer numerator vector over a common positive denominator and reduced
modulo the N-th cyclotomic polynomial.  ``LaurentElem`` is a finite sum
``sum c_q t^q`` with rational exponents ``q``; it models the rings
C[t^{+-1/m}] and their direct limit.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

DEFAULT_N = int(os.environ.get("LARGEN4_N", "4"))


class NonInvertible(ArithmeticError):
    """Raised when an inverse is requested for a non-unit."""


class ScalarFieldTooSmall(ValueError):
    """Raised when a required root of unity is missing from Q(zeta_N)."""


Rational = Union[int, Fraction]


# ---------------------------------------------------------------------------
# rational polynomials (coefficient lists, lowest degree first)

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a: Iterable[Rational], b: Iterable[Rational]) -> list[Fraction]:
    a, b = list(a), list(b)
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def poly_divmod(a: Iterable[Rational], b: Iterable[Rational]) -> tuple[list[Fraction], list[Fraction]]:
    """Exact long division of rational polynomials."""
    rem = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(rem) - len(b) + 1, 0)
    lead = b[-1]
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        c = rem[-1] / lead
        quot[shift] = c
        for j, y in enumerate(b):
            rem[shift + j] -= c * y
        _trim(rem)
    return _trim(quot), rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(N: int) -> tuple[Fraction, ...]:
    """Phi_N as a coefficient tuple, lowest degree first.

    >>> cyclotomic_polynomial(4)
    (Fraction(1, 1), Fraction(0, 1), Fraction(1, 1))
    """
    if N < 1:
        raise ValueError("N must be positive")
    num = [Fraction(-1)] + [Fraction(0)] * (N - 1) + [Fraction(1)]
    for d in range(1, N):
        if N % d == 0:
            num, rem = poly_divmod(num, cyclotomic_polynomial(d))
            assert not rem
    return tuple(num)


def euler_phi(N: int) -> int:
    return len(cyclotomic_polynomial(N)) - 1


@lru_cache(maxsize=None)
def _reduction_table(N: int) -> tuple[tuple[int, ...], ...]:
    # x^k mod Phi_N for phi <= k <= 2*phi - 2; integral because Phi_N is monic
    phi = euler_phi(N)
    cyc = [int(c) for c in cyclotomic_polynomial(N)]
    rows = []
    cur = [0] * phi
    # x^phi = -(c_0 + ... + c_{phi-1} x^{phi-1})
    cur = [-c for c in cyc[:phi]]
    for _ in range(phi, 2 * phi - 1):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [x - top * c for x, c in zip(cur, cyc[:phi])]
    return tuple(rows)


# ---------------------------------------------------------------------------

class Scalar:
    """An element of Q(zeta_N).

    Stored as ``nums / den`` with ``nums`` the integer coefficient vector of
    a polynomial in zeta_N of degree < phi(N), ``den > 0`` and the whole
    vector in lowest terms.  Instances are immutable and hashable.
    """

    __slots__ = ("nums", "den", "N", "_hash")

    def __init__(self, value: Union[Rational, "Scalar", Iterable[Rational]] = 0, N: int | None = None):
        if isinstance(value, Scalar):
            if N is not None and N != value.N:
                raise ValueError(f"cannot coerce a Q(zeta_{value.N}) scalar to Q(zeta_{N})")
            self.nums, self.den, self.N = value.nums, value.den, value.N
            self._hash = None
            return
        N = DEFAULT_N if N is None else N
        phi = euler_phi(N)
        if isinstance(value, (int, Fraction)):
            coeffs = [Fraction(value)] + [Fraction(0)] * (phi - 1)
        else:
            coeffs = [Fraction(x) for x in value]
            if len(coeffs) > phi:
                _, coeffs = poly_divmod(coeffs, cyclotomic_polynomial(N))
            coeffs = coeffs + [Fraction(0)] * (phi - len(coeffs))
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        self.nums = tuple(int(c * den) for c in coeffs)
        self.den = den
        self.N = N
        self._hash = None

    @classmethod
    def _raw(cls, nums: tuple[int, ...], den: int, N: int) -> "Scalar":
        g = den
        for x in nums:
            if x:
                g = math.gcd(g, x)
                if g == 1:
                    break
        if not any(nums):
            den = 1
        elif g != 1:
            nums = tuple(x // g for x in nums)
            den //= g
        obj = object.__new__(cls)
        obj.nums, obj.den, obj.N, obj._hash = nums, den, N, None
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zeta(cls, N: int | None = None) -> "Scalar":
        """The primitive root exp(2*pi*i/N)."""
        N = DEFAULT_N if N is None else N
        if N <= 2:
            return cls(1 if N == 1 else -1, N)
        return cls([0, 1], N)

    @classmethod
    def imag_unit(cls, N: int | None = None) -> "Scalar":
        N = DEFAULT_N if N is None else N
        if N % 4:
            raise ScalarFieldTooSmall(f"sqrt(-1) is not in Q(zeta_{N}); use N divisible by 4")
        return cls.zeta(N) ** (N // 4)

    # accessors ------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def is_rational(self) -> bool:
        return not any(self.nums[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.nums[0], self.den)

    def __bool__(self) -> bool:
        return any(self.nums)

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self.nums[0], self.den))
            else:
                self._hash = hash((self.nums, self.den, self.N))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.N == other.N and self.den == other.den and self.nums == other.nums
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.nums[0], self.den) == other
        return NotImplemented

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.N != self.N:
                raise ValueError(f"mixed cyclotomic orders {self.N} and {other.N}")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other, self.N)
        return NotImplemented

    # ring operations ------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return Scalar._raw(tuple(a + b for a, b in zip(self.nums, other.nums)), self.den, self.N)
        return Scalar._raw(
            tuple(a * other.den + b * self.den for a, b in zip(self.nums, other.nums)),
            self.den * other.den, self.N)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(tuple(-a for a in self.nums), self.den, self.N)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Scalar._raw(tuple(a * q.numerator for a in self.nums), self.den * q.denominator, self.N)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.nums, other.nums
        phi = len(a)
        if phi == 1:
            return Scalar._raw((a[0] * b[0],), self.den * other.den, self.N)
        conv = [0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        low = conv[:phi]
        for k, row in enumerate(_reduction_table(self.N)):
            top = conv[phi + k]
            if top:
                for idx, r in enumerate(row):
                    if r:
                        low[idx] += top * r
        return Scalar._raw(tuple(low), self.den * other.den, self.N)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero scalar")
        if self.is_rational():
            return Scalar._raw((self.den,) + (0,) * (len(self.nums) - 1), self.nums[0], self.N) \
                if self.nums[0] > 0 else \
                Scalar._raw((-self.den,) + (0,) * (len(self.nums) - 1), -self.nums[0], self.N)
        # solve (multiplication-by-self matrix) x = e_0
        phi = len(self.nums)
        basis = [Scalar._raw(tuple(1 if k == j else 0 for k in range(phi)), 1, self.N) for j in range(phi)]
        cols = [(self * e).coeffs for e in basis]
        rows = [[cols[j][i] for j in range(phi)] + [Fraction(1 if i == 0 else 0)] for i in range(phi)]
        for c in range(phi):
            piv = next(r for r in range(c, phi) if rows[r][c] != 0)
            rows[c], rows[piv] = rows[piv], rows[c]
            pv = rows[c][c]
            rows[c] = [x / pv for x in rows[c]]
            for r in range(phi):
                if r != c and rows[r][c] != 0:
                    f = rows[r][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return Scalar([rows[i][phi] for i in range(phi)], self.N)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("scalar division by zero")
            return self * (1 / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Scalar(other, self.N) / self

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        result = Scalar(1, self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Scalar":
        """Complex conjugation zeta -> zeta^{-1}."""
        z_inv = Scalar.zeta(self.N) ** (self.N - 1)
        out = Scalar(0, self.N)
        power = Scalar(1, self.N)
        for c in self.coeffs:
            if c:
                out = out + power * c
            power = power * z_inv
        return out

    def sqrt(self) -> "Scalar | None":
        """A square root inside Q(zeta_N), or None when none is found.

        Square roots of rationals are found whenever they exist in the
        field; for N = 4 every square in Q(i) is found.  Other non-rational
        inputs return None.
        """
        if self.is_zero():
            return self
        if self.is_rational():
            return _field_sqrt_of_rational(self.rational(), self.N)
        if self.N == 4:
            a, b = self.coeffs
            norm = _rational_sqrt(a * a + b * b)
            if norm is None:
                return None
            x = _rational_sqrt((norm + a) / 2)
            y = _rational_sqrt((norm - a) / 2)
            if x is None or y is None:
                return None
            if b < 0:
                y = -y
            cand = Scalar([x, y], 4)
            return cand if cand * cand == self else None
        return None

    def sort_key(self) -> tuple:
        return (self.den,) + self.nums

    # formatting -----------------------------------------------------------
    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: list[str], N: int | None = None) -> "Scalar":
        return cls([Fraction(x) for x in data], N)

    def __str__(self) -> str:
        sym = "i" if self.N == 4 else "z"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                mono = sym if k == 1 else f"{sym}^{k}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def needs_parens(self) -> bool:
        return sum(1 for x in self.nums if x) > 1


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _squarefree_split(n: int) -> tuple[int, list[int]]:
    """n = s^2 * prod(primes) with distinct primes; returns (s, primes)."""
    s, primes, p = 1, [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            primes.append(p)
        p += 1
    if n > 1:
        primes.append(n)
    return s, primes


def _field_sqrt_of_rational(q: Fraction, N: int) -> "Scalar | None":
    """sqrt(q) in Q(zeta_N): odd primes via quadratic Gauss sums, 2 and -1 via zeta_8 and i."""
    if q == 0:
        return Scalar(0, N)
    num, den = q.numerator * q.denominator, q.denominator
    sign = -1 if num < 0 else 1
    s, primes = _squarefree_split(abs(num))
    out = Scalar(Fraction(s, den), N)
    zeta = Scalar.zeta(N)
    rest = sign
    for p in primes:
        if p == 2:
            rest *= 2
            continue
        if N % p:
            return None
        zp = zeta ** (N // p)
        gauss = Scalar(0, N)
        for a in range(1, p):
            gauss = gauss + zp ** a * (1 if pow(a, (p - 1) // 2, p) == 1 else -1)
        out = out * gauss
        if p % 4 == 3:
            rest = -rest
    if rest == 1:
        return out
    if rest == -1:
        return out * Scalar.imag_unit(N) if N % 4 == 0 else None
    if N % 8:
        return None
    z8 = zeta ** (N // 8)
    root = z8 + z8 ** 7 if rest == 2 else z8 + z8 ** 3
    return out * root


def root_of_unity(m: int, N: int | None = None) -> Scalar:
    """zeta_m = exp(2*pi*i/m) as an element of Q(zeta_N)."""
    N = DEFAULT_N if N is None else N
    if m < 1:
        raise ValueError("m must be positive")
    if N % m == 0:
        return Scalar.zeta(N) ** (N // m)
    if N % 2 == 1 and (2 * N) % m == 0:
        zeta_2n = -(Scalar.zeta(N) ** ((N + 1) // 2))
        return zeta_2n ** ((2 * N) // m)
    raise ScalarFieldTooSmall(f"zeta_{m} is not in Q(zeta_{N})")


def as_scalar(x, N: int | None = None) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x, N)


def binomial(q: Rational, j: int) -> Fraction:
    """Generalized binomial coefficient q(q-1)...(q-j+1)/j!."""
    out = Fraction(1)
    for k in range(j):
        out *= Fraction(q) - k
    return out / math.factorial(j)


def _exp(q) -> Union[int, Fraction]:
    # integral exponents are kept as int so dictionary keys hash cheaply
    if isinstance(q, int):
        return q
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else q


# ---------------------------------------------------------------------------

class LaurentElem:
    """A finite sum ``sum_q c_q t^q`` with rational exponents q.

    ``denom`` is the least m such that every exponent lies in (1/m)Z and
    ``terms`` maps integer numerators k to coefficients of t^{k/m}.
    Equality compares exponents as rationals, so operands with different
    denominators compare correctly.
    """

    __slots__ = ("_terms", "N", "_hash")

    def __init__(self, terms: Mapping | None = None, N: int | None = None):
        N = DEFAULT_N if N is None else N
        clean = {}
        for q, c in (terms or {}).items():
            c = as_scalar(c, N)
            if c.N != N:
                raise ValueError("mixed cyclotomic orders")
            if c:
                q = _exp(q)
                prev = clean.get(q)
                c = c if prev is None else prev + c
                if c:
                    clean[q] = c
                else:
                    clean.pop(q, None)
        self._terms = clean
        self.N = N
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, N: int) -> "LaurentElem":
        obj = object.__new__(cls)
        obj._terms, obj.N, obj._hash = terms, N, None
        return obj

    @classmethod
    def monomial(cls, q, c=1, N: int | None = None) -> "LaurentElem":
        return cls({q: c}, N)

    @classmethod
    def const(cls, c, N: int | None = None) -> "LaurentElem":
        return cls({0: c}, N)

    @classmethod
    def t(cls, N: int | None = None) -> "LaurentElem":
        return cls({1: 1}, N)

    # accessors ------------------------------------------------------------
    @property
    def denom(self) -> int:
        m = 1
        for q in self._terms:
            if isinstance(q, Fraction):
                m = m * q.denominator // math.gcd(m, q.denominator)
        return m

    @property
    def terms(self) -> dict[int, Scalar]:
        m = self.denom
        return {int(q * m): c for q, c in sorted(self._terms.items())}

    def items(self):
        return sorted(self._terms.items())

    def exponents(self) -> list:
        return sorted(self._terms)

    def coeff(self, q) -> Scalar:
        return self._terms.get(_exp(q), Scalar(0, self.N))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(q == 0 for q in self._terms)

    def constant_term(self) -> Scalar:
        return self.coeff(0)

    def is_unit(self) -> bool:
        return len(self._terms) == 1

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentElem):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, Scalar)):
            if not other:
                return not self._terms
            return self._terms == {0: as_scalar(other, self.N)}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _coerce(self, other) -> "LaurentElem":
        if isinstance(other, LaurentElem):
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return LaurentElem.const(other, self.N)
        return NotImplemented

    # ring operations ------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for q, c in other._terms.items():
            prev = out.get(q)
            if prev is None:
                out[q] = c
            else:
                s = prev + c
                if s:
                    out[q] = s
                else:
                    del out[q]
        return LaurentElem._raw(out, self.N)

    __radd__ = __add__

    def __neg__(self):
        return LaurentElem._raw({q: -c for q, c in self._terms.items()}, self.N)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            if not other:
                return LaurentElem._raw({}, self.N)
            return LaurentElem._raw({q: c * other for q, c in self._terms.items()}, self.N)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for q1, c1 in self._terms.items():
            for q2, c2 in other._terms.items():
                q = _exp(q1 + q2)
                c = c1 * c2
                prev = out.get(q)
                if prev is not None:
                    c = prev + c
                if c:
                    out[q] = c
                else:
                    out.pop(q, None)
        return LaurentElem._raw(out, self.N)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentElem":
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentElem.const(1, self.N)
        for _ in range(k):
            result = result * self
        return result

    def inverse(self) -> "LaurentElem":
        if not self.is_unit():
            raise NonInvertible(f"{self} is not a unit of the Laurent ring")
        (q, c), = self._terms.items()
        return LaurentElem._raw({_exp(-q): c.inverse()}, self.N)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self * as_scalar(other, self.N).inverse()
        return self * other.inverse()

    def derivative(self) -> "LaurentElem":
        return laurent_divided_derivative(1, self)

    def substitute_power(self, scale: Fraction) -> "LaurentElem":
        """t -> t^scale, i.e. multiply every exponent by ``scale``."""
        return LaurentElem._raw({_exp(q * scale): c for q, c in self._terms.items()}, self.N)

    def sqrt_unit(self) -> "LaurentElem | None":
        """Square root of a unit c*t^q, or None if c has no root in the field."""
        if not self.is_unit():
            return None
        (q, c), = self._terms.items()
        r = c.sqrt()
        if r is None:
            return None
        return LaurentElem._raw({_exp(Fraction(q) / 2): r}, self.N)

    # formatting -----------------------------------------------------------
    def to_json(self) -> dict:
        return {"denom": self.denom,
                "terms": [{"num": k, "scalar": c.to_json()} for k, c in self.terms.items()]}

    @classmethod
    def from_json(cls, data: dict, N: int | None = None) -> "LaurentElem":
        m = data["denom"]
        return cls({Fraction(t["num"], m): Scalar.from_json(t["scalar"], N) for t in data["terms"]}, N)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for q, c in sorted(self._terms.items()):
            if q == 0:
                mono = ""
            elif q == 1:
                mono = "t"
            else:
                mono = f"t^{q}" if isinstance(q, int) and q > 0 else f"t^({q})"
            if not mono:
                parts.append(str(c) if not c.needs_parens() else f"({c})")
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = f"({c})" if c.needs_parens() else str(c)
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"LaurentElem({self})"


def laurent_divided_derivative(j: int, f: LaurentElem) -> LaurentElem:
    """delta_t^j(f) / j!, termwise C(q, j) t^{q-j}."""
    if j < 0:
        raise ValueError("j must be non-negative")
    if j == 0:
        return f
    out = {}
    for q, c in f._terms.items():
        b = binomial(q, j)
        if b:
            out[_exp(q - j)] = c * b
    return LaurentElem._raw(out, f.N)


def laurent_derivative_power(j: int, f: LaurentElem) -> LaurentElem:
    """delta_t^j(f) (not divided)."""
    return laurent_divided_derivative(j, f) * math.factorial(j)


# ---------------------------------------------------------------------------
# polynomial gcd / exact division, used to clear content from matrices

def _to_poly(fs: list[LaurentElem]) -> tuple[list[list[Scalar]], Fraction, Fraction, int]:
    exps = [q for f in fs for q in f._terms]
    if not exps:
        return [[] for _ in fs], Fraction(1), Fraction(0), fs[0].N if fs else DEFAULT_N
    m = 1
    for q in exps:
        q = Fraction(q)
        m = m * q.denominator // math.gcd(m, q.denominator)
    lo = min(Fraction(q) for q in exps)
    N = fs[0].N
    polys = []
    for f in fs:
        deg = [int((Fraction(q) - lo) * m) for q in f._terms]
        p = [Scalar(0, N)] * ((max(deg) + 1) if deg else 0)
        for d, c in zip(deg, f._terms.values()):
            p[d] = c
        polys.append(p)
    return polys, Fraction(1, m), lo, N


def _spoly_trim(p: list[Scalar]) -> list[Scalar]:
    while p and not p[-1]:
        p.pop()
    return p


def _spoly_divmod(a: list[Scalar], b: list[Scalar]) -> tuple[list[Scalar], list[Scalar]]:
    rem = _spoly_trim(list(a))
    b = _spoly_trim(list(b))
    N = b[0].N
    quot = [Scalar(0, N)] * max(len(rem) - len(b) + 1, 0)
    lead_inv = b[-1].inverse()
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        c = rem[-1] * lead_inv
        quot[shift] = c
        for j, y in enumerate(b):
            rem[shift + j] = rem[shift + j] - c * y
        _spoly_trim(rem)
    return quot, rem


def laurent_gcd(fs: Iterable[LaurentElem]) -> LaurentElem:
    """A gcd of Laurent elements, normalized monic with lowest exponent 0.

    Units are ignored, so the result is defined up to a unit factor.
    """
    fs = [f for f in fs if f]
    if not fs:
        return LaurentElem()
    polys, step, _, N = _to_poly(fs)
    # strip the power of u from each polynomial separately
    g: list[Scalar] | None = None
    for p in polys:
        while p and not p[0]:
            p = p[1:]
        if g is None:
            g = p
            continue
        a, b = g, p
        while _spoly_trim(list(b)):
            _, r = _spoly_divmod(a, b)
            a, b = b, r
        g = _spoly_trim(list(a))
    lead_inv = g[-1].inverse()
    return LaurentElem({k * step: c * lead_inv for k, c in enumerate(g) if c}, N)


def laurent_divexact(f: LaurentElem, g: LaurentElem) -> LaurentElem:
    """f / g, raising ``NonInvertible`` unless g divides f in the Laurent ring."""
    if not g:
        raise ZeroDivisionError("Laurent division by zero")
    if not f:
        return f
    (pf, pg), step, lo, N = _to_poly([f, g])
    gl = min(Fraction(q) for q in g._terms)
    shift = int((gl - lo) / step)
    pg = pg[shift:]
    quot, rem = _spoly_divmod(pf, pg)
    if rem:
        raise NonInvertible(f"{g} does not divide {f}")
    return LaurentElem({lo - gl + k * step: c for k, c in enumerate(quot) if c}, N)


def parse_laurent(text: str, N: int | None = None) -> LaurentElem:
    """Parse a literal such as ``"t + t^-1"``, ``"1/2*t^(5/2)"`` or ``"2*i*t"``."""
    import sympy
    from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication_application,
                                            parse_expr, standard_transformations)

    N = DEFAULT_N if N is None else N
    t = sympy.Symbol("t", positive=True)
    trans = standard_transformations + (convert_xor, implicit_multiplication_application)
    expr = parse_expr(text.replace("−", "-"), local_dict={"t": t, "i": sympy.I, "I": sympy.I},
                      transformations=trans, evaluate=True)
    expr = sympy.expand(expr)
    out: dict = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        coeff, rest = term.as_independent(t, as_Add=False)
        if rest == 1:
            q = Fraction(0)
        else:
            base, exp = rest.as_base_exp()
            if base != t or not exp.is_Rational:
                raise ValueError(f"not a Laurent monomial: {term}")
            q = Fraction(int(exp.p), int(exp.q))
        re, im = coeff.as_real_imag()
        if not (re.is_Rational and im.is_Rational):
            raise ValueError(f"coefficient {coeff} is not in Q(i)")
        c = Scalar(Fraction(int(re.p), int(re.q)), N)
        if im != 0:
            c = c + Scalar.imag_unit(N) * Fraction(int(im.p), int(im.q))
        out[q] = out.get(q, Scalar(0, N)) + c
    return LaurentElem(out, N)
