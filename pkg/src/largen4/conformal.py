"""The large N=4 conformal superalgebra and its central extensions.

Elements of A (x) D^ are finite sums of ``d^k v (x) c t^q`` with v one of the
17 generators (16 spanning V plus the central ``C``).  The lambda-bracket of
basis generators is precomputed from the matrix-form multiplication table
(``T^+(X)``, ``T^-(X)``, ``G(M)``, ``Q(M)``); ordered pairs the table does not
list are filled in by skew-symmetry.  Brackets of general elements follow
from sesquilinearity in d and the loop product formula in the Laurent
factor.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable, Mapping, Union

from . import linalg
from .mat2 import Mat2, commutator, dagger, sl2_basis
from .scalars import DEFAULT_N, LaurentElem, Scalar, _exp, as_scalar, binomial

GENS: tuple[str, ...] = (
    "L", "T+1", "T+2", "T+3", "T-1", "T-2", "T-3", "U",
    "G1", "G2", "G3", "G4", "Q1", "Q2", "Q3", "Q4", "C",
)
V_GENS: tuple[str, ...] = GENS[:16]
GEN_INDEX = {g: i for i, g in enumerate(GENS)}
PARITY = {g: 1 if g[0] in "GQ" else 0 for g in GENS}
WEIGHT = {g: {"L": Fraction(2), "T": Fraction(1), "U": Fraction(1), "G": Fraction(3, 2),
              "Q": Fraction(1, 2), "C": Fraction(0)}[g[0]] for g in GENS}


class MixedParity(ValueError):
    """An operand of a bracket is not parity-homogeneous."""


class NotTraceless(ValueError):
    """``T^+(X)`` / ``T^-(X)`` requested for a matrix with nonzero trace."""


def kind(g: str) -> str:
    """Matrix-form family of a generator: L, U, C, T+, T-, G or Q."""
    if g.startswith("T"):
        return g[:2]
    return g[0]


# ---------------------------------------------------------------------------
# gamma

GammaParam = Union[Fraction, None]
CENTRELESS = None


def gamma_param(value) -> GammaParam:
    """Normalize a user-facing gamma (rational, string or "centreless")."""
    if value is None or (isinstance(value, str) and value.strip().lower() in ("centreless", "centerless", "none")):
        return None
    g = Fraction(value)
    if g in (0, 1):
        raise ValueError("gamma must differ from 0 and 1")
    return g


# ---------------------------------------------------------------------------

def _key_order(key) -> tuple:
    g, d, e = key
    return (GEN_INDEX[g], d, Fraction(e))


class ConfElem:
    """An element of A (x) D^: finite map (generator, d-power) -> Laurent element.

    Stored flat as ``(gen, dpow, exponent) -> Scalar`` with no zero values and
    no d-powers on ``C``.  Immutable.
    """

    __slots__ = ("_t", "N", "_hash")

    def __init__(self, terms: Mapping | None = None, N: int | None = None):
        self.N = DEFAULT_N if N is None else N
        flat: dict = {}
        for key, val in (terms or {}).items():
            gen, dpow = key
            if gen not in GEN_INDEX:
                raise KeyError(f"unknown generator {gen!r}")
            if gen == "C" and dpow > 0:
                continue
            if isinstance(val, LaurentElem):
                for q, c in val._terms.items():
                    _acc(flat, (gen, dpow, q), c)
            else:
                _acc(flat, (gen, dpow, 0), as_scalar(val, self.N))
        self._t = flat
        self._hash = None

    @classmethod
    def _flat(cls, flat: dict, N: int) -> "ConfElem":
        obj = object.__new__(cls)
        obj._t, obj.N, obj._hash = flat, N, None
        return obj

    @classmethod
    def gen(cls, g: str, coeff=1, dpow: int = 0, exp=0, N: int | None = None) -> "ConfElem":
        N = DEFAULT_N if N is None else N
        if g not in GEN_INDEX:
            raise KeyError(f"unknown generator {g!r}")
        c = as_scalar(coeff, N)
        if not c or (g == "C" and dpow > 0):
            return cls._flat({}, N)
        return cls._flat({(g, dpow, _exp(exp)): c}, N)

    @classmethod
    def zero(cls, N: int | None = None) -> "ConfElem":
        return cls._flat({}, DEFAULT_N if N is None else N)

    # views ----------------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[str, int], LaurentElem]:
        grouped: dict = {}
        for (g, d, q), c in self._t.items():
            grouped.setdefault((g, d), {})[q] = c
        return {k: LaurentElem(grouped[k], self.N)
                for k in sorted(grouped, key=lambda k: (GEN_INDEX[k[0]], k[1]))}

    def flat_items(self) -> list:
        return sorted(self._t.items(), key=lambda kv: _key_order(kv[0]))

    def coeff(self, gen: str, dpow: int = 0) -> LaurentElem:
        return LaurentElem({q: c for (g, d, q), c in self._t.items() if g == gen and d == dpow}, self.N)

    def support(self) -> set[str]:
        return {g for g, _, _ in self._t}

    def max_dpow(self) -> int:
        return max((d for _, d, _ in self._t), default=0)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_constant(self) -> bool:
        """True when every Laurent coefficient is a constant."""
        return all(q == 0 for _, _, q in self._t)

    def parity(self) -> int | None:
        """0 or 1 for homogeneous nonzero elements, None if mixed; 0 for zero."""
        ps = {PARITY[g] for g, _, _ in self._t}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def __eq__(self, other) -> bool:
        if isinstance(other, ConfElem):
            return self._t == other._t
        if other == 0:
            return not self._t
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "ConfElem") -> "ConfElem":
        if not isinstance(other, ConfElem):
            if other == 0:
                return self
            return NotImplemented
        out = dict(self._t)
        for k, c in other._t.items():
            _acc(out, k, c)
        return ConfElem._flat(out, self.N)

    def __radd__(self, other):
        if other == 0:
            return self
        return NotImplemented

    def __neg__(self) -> "ConfElem":
        return ConfElem._flat({k: -c for k, c in self._t.items()}, self.N)

    def __sub__(self, other: "ConfElem") -> "ConfElem":
        return self + (-other)

    def __mul__(self, other) -> "ConfElem":
        """Multiply by a scalar or (on the Laurent factor) by a LaurentElem."""
        if isinstance(other, LaurentElem):
            out: dict = {}
            for (g, d, q), c in self._t.items():
                for q2, c2 in other._terms.items():
                    _acc(out, (g, d, _exp(q + q2)), c * c2)
            return ConfElem._flat(out, self.N)
        if isinstance(other, (int, Fraction, Scalar)):
            if not other:
                return ConfElem._flat({}, self.N)
            return ConfElem._flat({k: c * other for k, c in self._t.items()}, self.N)
        return NotImplemented

    __rmul__ = __mul__

    def partial(self, k: int = 1) -> "ConfElem":
        """The derivation d of A acting on the first tensor factor."""
        if k == 0:
            return self
        return ConfElem._flat({(g, d + k, q): c for (g, d, q), c in self._t.items() if g != "C"}, self.N)

    def delta_t(self) -> "ConfElem":
        """d/dt acting on the Laurent factor."""
        out: dict = {}
        for (g, d, q), c in self._t.items():
            if q != 0:
                _acc(out, (g, d, _exp(q - 1)), c * Fraction(q))
        return ConfElem._flat(out, self.N)

    def hat_partial(self, k: int = 1) -> "ConfElem":
        """The loop derivation d^ = d (x) 1 + 1 (x) d/dt."""
        x = self
        for _ in range(k):
            x = x.partial() + x.delta_t()
        return x

    # formatting -----------------------------------------------------------
    def to_json(self) -> list[dict]:
        return [{"gen": g, "dpow": d, "laurent": lau.to_json()} for (g, d), lau in self.terms.items()]

    @classmethod
    def from_json(cls, data: list[dict], N: int | None = None) -> "ConfElem":
        return cls({(t["gen"], t["dpow"]): LaurentElem.from_json(t["laurent"], N) for t in data}, N)

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for (g, d), lau in self.terms.items():
            base = ("∂" if d == 1 else f"∂^{d}" if d else "") + g
            if lau == 1:
                parts.append(base)
            elif lau == -1:
                parts.append("-" + base)
            elif lau.is_constant():
                c = lau.constant_term()
                parts.append(f"({c})*{base}" if c.needs_parens() else f"{c}*{base}")
            else:
                parts.append(f"{base}⊗({lau})")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"ConfElem({self})"

    def latex(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for (g, d), lau in self.terms.items():
            base = ("\\partial " if d == 1 else f"\\partial^{{{d}}} " if d else "") + gen_latex(g)
            if lau.is_constant():
                parts.append(_coeff_latex(lau.constant_term(), base))
            else:
                parts.append(f"{base}\\otimes\\left({_laurent_latex(lau)}\\right)")
        return _join_signed(parts)


def _acc(d: dict, key, c: Scalar) -> None:
    prev = d.get(key)
    if prev is not None:
        c = prev + c
        if c:
            d[key] = c
        else:
            del d[key]
    elif c:
        d[key] = c


def gen_latex(g: str) -> str:
    if g == "C":
        return "c"
    if g[0] == "T":
        return f"\\mathrm{{T}}^{{{g[1]}{g[2]}}}"
    if g in ("L", "U"):
        return f"\\mathrm{{{g}}}"
    return f"\\mathrm{{{g[0]}}}^{{{g[1]}}}"


def _frac_latex(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q)
    sign = "-" if q < 0 else ""
    return f"{sign}\\frac{{{abs(q.numerator)}}}{{{q.denominator}}}"


def _scalar_latex(c: Scalar) -> str:
    """Rationals as fractions, zeta_4 as the bold imaginary unit, other powers as zeta_N^k."""
    parts = []
    for k, q in enumerate(c.coeffs):
        if not q:
            continue
        if k == 0:
            parts.append(_frac_latex(q))
            continue
        unit = "\\mathbf{i}" if c.N == 4 else "\\zeta_{%d}" % c.N + ("" if k == 1 else f"^{{{k}}}")
        parts.append(unit if q == 1 else "-" + unit if q == -1 else _frac_latex(q) + unit)
    return _join_signed(parts) if parts else "0"


def _join_signed(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def _coeff_latex(c: Scalar, base: str) -> str:
    if c == 1:
        return base
    if c == -1:
        return "-" + base
    cs = _scalar_latex(c)
    return f"\\left({cs}\\right){base}" if c.needs_parens() else cs + base


def _laurent_latex(lau: LaurentElem) -> str:
    parts = []
    for q, c in lau.items():
        mono = "" if q == 0 else "t" if q == 1 else f"t^{{{Fraction(q)}}}"
        parts.append(_coeff_latex(c, mono) if mono else _scalar_latex(c))
    return _join_signed(parts)


# ---------------------------------------------------------------------------

class LambdaPoly:
    """A polynomial in the formal variable lambda with ConfElem coefficients."""

    __slots__ = ("coeffs", "N")

    def __init__(self, coeffs: Mapping[int, ConfElem] | None = None, N: int | None = None):
        self.N = DEFAULT_N if N is None else N
        self.coeffs = {k: v for k, v in sorted((coeffs or {}).items()) if v}

    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def coeff(self, n: int) -> ConfElem:
        return self.coeffs.get(n, ConfElem.zero(self.N))

    def n_product(self, n: int) -> ConfElem:
        """a_(n) b = n! times the coefficient of lambda^n."""
        return self.coeff(n) * math.factorial(n)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, LambdaPoly):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return NotImplemented

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return LambdaPoly(out, self.N)

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly({k: -v for k, v in self.coeffs.items()}, self.N)

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return self + (-other)

    def __mul__(self, c) -> "LambdaPoly":
        return LambdaPoly({k: v * c for k, v in self.coeffs.items()}, self.N)

    __rmul__ = __mul__

    def map(self, fn) -> "LambdaPoly":
        return LambdaPoly({k: fn(v) for k, v in self.coeffs.items()}, self.N)

    def to_json(self) -> list[dict]:
        return [{"lambda_deg": k, "elem": v.to_json()} for k, v in self.coeffs.items()]

    @classmethod
    def from_json(cls, data: list[dict], N: int | None = None) -> "LambdaPoly":
        return cls({t["lambda_deg"]: ConfElem.from_json(t["elem"], N) for t in data}, N)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, v in self.coeffs.items():
            lam = "" if k == 0 else "λ" if k == 1 else f"λ^{k}"
            s = str(v)
            if not lam:
                parts.append(s)
            elif len(v.terms) == 1 and not s.startswith("("):
                parts.append(f"{lam}*{s}" if not s.startswith("-") else f"-{lam}*{s[1:]}")
            else:
                parts.append(f"{lam}*({s})")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"LambdaPoly({self})"

    def latex(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, v in self.coeffs.items():
            lam = "" if k == 0 else "\\lambda" if k == 1 else f"\\lambda^{{{k}}}"
            body = v.latex()
            if not lam:
                parts.append(body)
            elif len(v._t) == 1:
                sign, body = ("-", body[1:]) if body.startswith("-") else ("", body)
                parts.append(f"{sign}{lam}\\,{body}")
            else:
                parts.append(f"{lam}\\left({body}\\right)")
        return _join_signed(parts)


# ---------------------------------------------------------------------------
# matrix forms

def _i(N: int) -> Scalar:
    return Scalar.imag_unit(N)


def expand_matrix_form(kind_: str, M: Mat2, N: int | None = None) -> ConfElem:
    """Expand ``T^+(X)``, ``T^-(X)``, ``G(M)`` or ``Q(M)`` over the generators.

    Entries of ``M`` may be Laurent elements, in which case the result
    carries the corresponding Laurent coefficients.
    """
    N = M.u11.N if N is None else N
    i = _i(N)
    u11, u12, u21, u22 = M.entries
    if kind_ in ("T+", "T-"):
        if M.trace():
            raise NotTraceless(f"T{kind_[1]}(X) needs a traceless matrix, got trace {M.trace()}")
        s = kind_[1]
        return ConfElem({
            (f"T{s}1", 0): (u12 + u21) * (-i),
            (f"T{s}2", 0): u12 - u21,
            (f"T{s}3", 0): u11 * (2 * i),
        }, N)
    if kind_ in ("G", "Q"):
        return ConfElem({
            (f"{kind_}1", 0): u12 + u21,
            (f"{kind_}2", 0): (u12 - u21) * i,
            (f"{kind_}3", 0): -(u11 - u22),
            (f"{kind_}4", 0): (u11 + u22) * (-i),
        }, N)
    raise ValueError(f"unknown matrix form {kind_!r}")


@lru_cache(maxsize=None)
def matrix_preimages(N: int = DEFAULT_N) -> dict[str, Mat2]:
    """For each T/G/Q generator g, the constant matrix M_g with form(M_g) = g."""
    out: dict[str, Mat2] = {}
    sl2 = list(sl2_basis().values())
    gl2 = [Mat2.unit(1, 1), Mat2.unit(1, 2), Mat2.unit(2, 1), Mat2.unit(2, 2)]
    for kd, basis in (("T+", sl2), ("T-", sl2), ("G", gl2), ("Q", gl2)):
        gens = [g for g in V_GENS if kind(g) == kd]
        cols = [expand_matrix_form(kd, B, N) for B in basis]
        S = [[c.coeff(g).constant_term() for c in cols] for g in gens]
        Sinv = linalg.inverse(S)
        for k, g in enumerate(gens):
            M = Mat2.zero()
            for b, B in enumerate(basis):
                if Sinv[b][k]:
                    M = M + B.scale(Sinv[b][k])
            out[g] = M
    return out


def matrix_coordinates(kind_: str, x: ConfElem) -> Mat2:
    """Inverse of ``expand_matrix_form`` on elements supported on one family at d-power 0."""
    pre = matrix_preimages(x.N)
    M = Mat2.zero()
    for (g, d), lau in x.terms.items():
        if kind(g) != kind_ or d != 0:
            raise ValueError(f"{x} is not of the form {kind_}(M)")
        M = M + pre[g].scale(lau)
    return M


def _form(g: str, N: int):
    k = kind(g)
    return k, (matrix_preimages(N)[g] if k in ("T+", "T-", "G", "Q") else None)


def _gen(g: str, N: int) -> ConfElem:
    return ConfElem.gen(g, N=N)


DIRECT_KINDS = frozenset({
    ("L", "L"), ("L", "U"), ("L", "T+"), ("L", "T-"), ("T+", "U"), ("T-", "U"), ("U", "U"),
    ("T+", "T+"), ("T-", "T-"), ("T+", "T-"), ("L", "G"), ("U", "G"), ("L", "Q"), ("U", "Q"),
    ("Q", "Q"), ("T+", "G"), ("T-", "G"), ("T+", "Q"), ("T-", "Q"), ("G", "G"), ("Q", "G"),
})


def _direct_bracket(u: str, v: str, N: int) -> dict[int, ConfElem]:
    """Matrix-form multiplication table on an ordered pair it lists."""
    ka, Ma = _form(u, N)
    kb, Mb = _form(v, N)
    E = lambda kd, M: expand_matrix_form(kd, M, N)  # noqa: E731
    vb = _gen(v, N)
    half = Fraction(1, 2)
    if (ka, kb) == ("L", "L"):
        return {0: vb.partial(), 1: vb * 2}
    if ka == "L" and kb in ("U", "T+", "T-"):
        return {0: vb.partial(), 1: vb}
    if ka == "L" and kb == "G":
        return {0: vb.partial(), 1: vb * Fraction(3, 2)}
    if ka == "L" and kb == "Q":
        return {0: vb.partial(), 1: vb * half}
    if (ka, kb) in (("T+", "U"), ("T-", "U"), ("U", "U"), ("T+", "T-"), ("U", "Q"), ("Q", "Q")):
        return {}
    if ka == kb and ka in ("T+", "T-"):
        return {0: E(ka, commutator(Ma, Mb))}
    if (ka, kb) == ("U", "G"):
        return {1: E("Q", Mb)}
    if (ka, kb) == ("T+", "G"):
        XM = Ma @ Mb
        return {0: E("G", XM), 1: -E("Q", XM)}
    if (ka, kb) == ("T+", "Q"):
        return {0: E("Q", Ma @ Mb)}
    if (ka, kb) == ("T-", "G"):
        MX = Mb @ Ma
        return {0: -E("G", MX), 1: -E("Q", MX)}
    if (ka, kb) == ("T-", "Q"):
        return {0: -E("Q", Mb @ Ma)}
    M, Nm = Ma, Mb
    tr = (M @ dagger(Nm)).trace().constant_term()
    plus = M @ dagger(Nm) - Nm @ dagger(M)
    minus = dagger(M) @ Nm - dagger(Nm) @ M
    if (ka, kb) == ("G", "G"):
        T = E("T+", plus) + E("T-", minus)
        return {0: _gen("L", N) * (4 * tr) + T.partial(), 1: T * 2}
    if (ka, kb) == ("Q", "G"):
        return {0: _gen("U", N) * (2 * tr) - E("T+", plus) + E("T-", minus)}
    raise AssertionError(f"no direct rule for {(ka, kb)}")


def skew_reverse(poly: Mapping[int, ConfElem], pu: int, pv: int, N: int) -> dict[int, ConfElem]:
    """[v_lambda u] = -(-1)^{p(u)p(v)} [u_{-lambda-d} v] for constant coefficients."""
    sign = 1 if pu * pv else -1
    out: dict[int, ConfElem] = {}
    for j, coeff in poly.items():
        for a in range(j + 1):
            term = coeff.partial(j - a) * (math.comb(j, a) * (-1) ** j * sign)
            if term:
                out[a] = out[a] + term if a in out else term
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# central terms

CENTRAL_TERMS_FILE = "central_terms.json"


def load_central_terms() -> list[dict]:
    """Central lambda-terms of A(gamma), as derived by mode matching."""
    text = resources.files("largen4").joinpath("data", CENTRAL_TERMS_FILE).read_text()
    return json.loads(text)["terms"]


def central_value(term: dict, gamma: Fraction) -> Fraction:
    return Fraction(term["const"]) + Fraction(term["gamma"]) * gamma


# ---------------------------------------------------------------------------

_Raw = dict  # deg -> {(gen, dpow): Scalar}


class BracketTable:
    """Lambda-brackets of all ordered pairs of generators for one algebra.

    Built once per (gamma, N) and then shared read-only; the only mutable
    state is a memo of d-shifted brackets, which is safe to rebuild.
    """

    def __init__(self, entries: dict[tuple[str, str], _Raw], gamma: GammaParam, N: int):
        self.entries = entries
        self.gamma = gamma
        self.N = N
        self._shift: dict = {}

    def __getstate__(self):
        return {"entries": self.entries, "gamma": self.gamma, "N": self.N}

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._shift = {}

    def bracket(self, u: str, v: str) -> LambdaPoly:
        raw = self.entries.get((u, v), {})
        return LambdaPoly({k: ConfElem({key: c for key, c in coeffs.items()}, self.N)
                           for k, coeffs in raw.items()}, self.N)

    def shifted(self, u: str, k: int, v: str, l: int) -> _Raw:
        """[d^k u _lambda d^l v] = (-lambda)^k (d + lambda)^l [u_lambda v]."""
        key = (u, k, v, l)
        hit = self._shift.get(key)
        if hit is not None:
            return hit
        base = self.entries.get((u, v), {})
        out: dict[int, dict] = {}
        for n, coeffs in base.items():
            for a in range(l + 1):
                fac = math.comb(l, a) * (-1) ** k
                deg = n + k + a
                for (g, d), c in coeffs.items():
                    if g == "C" and l - a > 0:
                        continue
                    _acc(out.setdefault(deg, {}), (g, d + l - a), c * fac)
        out = {n: c for n, c in out.items() if c}
        self._shift[key] = out
        return out

    def with_entry(self, u: str, v: str, poly: LambdaPoly) -> "BracketTable":
        entries = dict(self.entries)
        raw: dict = {}
        for n, elem in poly.coeffs.items():
            for (g, d, q), c in elem._t.items():
                if q != 0:
                    raise ValueError("table entries must have constant coefficients")
                raw.setdefault(n, {})[(g, d)] = c
        entries[(u, v)] = raw
        return BracketTable(entries, self.gamma, self.N)

    def mutated(self, u: str, v: str, deg: int, gen: str, dpow: int = 0, factor=-1) -> "BracketTable":
        """Copy with one structure constant multiplied by ``factor``."""
        entries = {k: {n: dict(c) for n, c in e.items()} for k, e in self.entries.items()}
        coeffs = entries[(u, v)][deg]
        coeffs[(gen, dpow)] = coeffs[(gen, dpow)] * factor
        return BracketTable(entries, self.gamma, self.N)

    def nonzero_pairs(self) -> list[tuple[str, str]]:
        return sorted((k for k, e in self.entries.items() if e),
                      key=lambda k: (GEN_INDEX[k[0]], GEN_INDEX[k[1]]))


def _to_raw(poly: Mapping[int, ConfElem]) -> _Raw:
    raw: dict = {}
    for n, elem in poly.items():
        for (g, d, q), c in elem._t.items():
            assert q == 0
            raw.setdefault(n, {})[(g, d)] = c
    return raw


def build_table(gamma: GammaParam = None, N: int = DEFAULT_N,
                central_terms: Iterable[dict] | None = None) -> BracketTable:
    """Assemble the generator bracket table.

    ``central_terms`` overrides the shipped derived central terms; entries are
    dicts ``{"pair": [u, v], "degree": d, "const": ..., "gamma": ...}`` and
    are ignored when ``gamma`` is None (the centreless algebra).
    """
    direct: dict[tuple[str, str], dict[int, ConfElem]] = {}
    for u in V_GENS:
        for v in V_GENS:
            if (kind(u), kind(v)) in DIRECT_KINDS:
                direct[(u, v)] = _direct_bracket(u, v, N)
    if gamma is not None:
        terms = load_central_terms() if central_terms is None else central_terms
        for t in terms:
            u, v = t["pair"]
            val = central_value(t, gamma)
            if not val:
                continue
            if (u, v) not in direct:
                raise ValueError(f"central term on non-listed pair {(u, v)}")
            entry = direct[(u, v)]
            d = t["degree"]
            c = ConfElem.gen("C", val, N=N)
            entry[d] = entry[d] + c if d in entry else c
    entries: dict[tuple[str, str], _Raw] = {}
    for u in V_GENS:
        for v in V_GENS:
            if (u, v) in direct:
                poly = direct[(u, v)]
            else:
                poly = skew_reverse(direct[(v, u)], PARITY[v], PARITY[u], N)
            entries[(u, v)] = _to_raw({k: e for k, e in poly.items() if e})
    return BracketTable(entries, gamma, N)


@lru_cache(maxsize=None)
def structure_table(gamma: GammaParam = None, N: int = DEFAULT_N) -> BracketTable:
    return build_table(gamma, N)


def _table(gamma, table: BracketTable | None, N: int) -> BracketTable:
    if table is not None:
        return table
    return structure_table(gamma_param(gamma), N)


# ---------------------------------------------------------------------------
# brackets

def generator_bracket(u: str, v: str, gamma=None, N: int = DEFAULT_N) -> LambdaPoly:
    """[u_lambda v] for two generators."""
    return _table(gamma, None, N).bracket(u, v)


def _check_parity(x: ConfElem) -> int:
    p = x.parity()
    if p is None:
        raise MixedParity(f"{x} is not parity-homogeneous")
    return p


def bracket_flat(a: ConfElem, b: ConfElem, table: BracketTable) -> dict:
    """Lambda-bracket as ``{(deg, gen, dpow, exp): Scalar}``."""
    acc: dict = {}
    for (u, k, e1), c1 in a._t.items():
        for (v, l, e2), c2 in b._t.items():
            P = table.shifted(u, k, v, l)
            if not P:
                continue
            c12 = c1 * c2
            for n, coeffs in P.items():
                for j in range(n + 1):
                    bj = _binom(e1, j)
                    if not bj:
                        continue
                    fac = c12 * (bj * math.perm(n, j))
                    e = _exp(e1 + e2 - j)
                    deg = n - j
                    for (g, d), s in coeffs.items():
                        _acc(acc, (deg, g, d, e), s * fac)
    return acc


@lru_cache(maxsize=4096)
def _binom(q, j: int) -> Fraction:
    return binomial(q, j)


def _flat_to_poly(acc: dict, N: int) -> LambdaPoly:
    by_deg: dict[int, dict] = {}
    for (deg, g, d, e), c in acc.items():
        by_deg.setdefault(deg, {})[(g, d, e)] = c
    return LambdaPoly({deg: ConfElem._flat(t, N) for deg, t in by_deg.items()}, N)


def lambda_bracket(a: ConfElem, b: ConfElem, gamma=None, table: BracketTable | None = None) -> LambdaPoly:
    """[a_lambda b] in A(gamma) (x) D^.

    Extended from the generator table by sesquilinearity,
    ``[da_lambda b] = -lambda [a_lambda b]`` and
    ``[a_lambda db] = (d + lambda)[a_lambda b]``, and by the loop product
    ``(a(x)f)_(n)(b(x)g) = sum_j a_(n+j) b (x) delta^(j)(f) g``.
    """
    _check_parity(a)
    _check_parity(b)
    table = _table(gamma, table, a.N)
    return _flat_to_poly(bracket_flat(a, b, table), a.N)


def n_product(a: ConfElem, n: int, b: ConfElem, gamma=None, table: BracketTable | None = None) -> ConfElem:
    return lambda_bracket(a, b, gamma, table).n_product(n)


# ---------------------------------------------------------------------------
# the alpha-matrix presentation, kept as a cross-check

def levi_civita(i: int, j: int, k: int) -> int:
    if {i, j, k} != {1, 2, 3}:
        return 0
    return 1 if (i, j, k) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


def alpha_printed(sign: int, i: int, p: int, q: int) -> Fraction:
    """The printed alpha^{+-i}_{pq}, reading the unbound epsilon as eps_{ipq}."""
    d = lambda a, b: 1 if a == b else 0  # noqa: E731
    return Fraction(sign, 2) * (d(i, p) * d(4, q) - d(i, q) * d(4, p)) + Fraction(levi_civita(i, p, q), 2)


def alpha_derived(sign: int, i: int, p: int, q: int, N: int = DEFAULT_N) -> Scalar:
    """alpha^{+-i}_{pq} read off [T^{+-i}_lambda Q^p] = alpha_{pq} Q^q."""
    s = "+" if sign > 0 else "-"
    poly = structure_table(None, N).bracket(f"T{s}{i}", f"Q{p}")
    return poly.coeff(0).coeff(f"Q{q}").constant_term()


def alpha_form_bracket(u: str, v: str, N: int = DEFAULT_N) -> LambdaPoly | None:
    """Entry of the alpha-matrix lambda table, or None when that table omits the pair."""
    ku, kv = kind(u), kind(v)
    g = lambda name, c=1, d=0: ConfElem.gen(name, c, d, N=N)  # noqa: E731
    zero = LambdaPoly({}, N)
    if (ku, kv) == ("L", "L"):
        return LambdaPoly({0: g("L", 1, 1), 1: g("L", 2)}, N)
    if ku == "L" and kv in ("U", "T+", "T-"):
        return LambdaPoly({0: g(v, 1, 1), 1: g(v)}, N)
    if ku == "L" and kv == "G":
        return LambdaPoly({0: g(v, 1, 1), 1: g(v, Fraction(3, 2))}, N)
    if ku == "L" and kv == "Q":
        return LambdaPoly({0: g(v, 1, 1), 1: g(v, Fraction(1, 2))}, N)
    if ku in ("T+", "T-") and kv == ku:
        i, j = int(u[2]), int(v[2])
        return LambdaPoly({0: sum((g(f"{ku}{k}", levi_civita(i, j, k)) for k in (1, 2, 3)),
                                  ConfElem.zero(N))}, N)
    if (ku, kv) in (("T+", "T-"), ("T+", "U"), ("T-", "U"), ("U", "U"), ("Q", "Q"), ("U", "Q")):
        return zero
    if ku in ("T+", "T-") and kv in ("G", "Q"):
        sign = 1 if ku == "T+" else -1
        i, p = int(u[2]), int(v[1])
        c0 = ConfElem.zero(N)
        c1 = ConfElem.zero(N)
        for q in range(1, 5):
            a = alpha_printed(sign, i, p, q)
            c0 = c0 + g(f"{kv}{q}", a)
            if kv == "G":
                c1 = c1 + g(f"Q{q}", -sign * a)
        return LambdaPoly({0: c0, 1: c1}, N)
    if (ku, kv) == ("U", "G"):
        return LambdaPoly({1: g(f"Q{v[1]}")}, N)
    if (ku, kv) in (("G", "G"), ("Q", "G")):
        p, q = int(u[1]), int(v[1])
        delta = 1 if p == q else 0
        T = ConfElem.zero(N)
        for i in (1, 2, 3):
            ap, am = alpha_printed(1, i, p, q), alpha_printed(-1, i, p, q)
            if ku == "G":
                T = T + g(f"T+{i}", ap) + g(f"T-{i}", am)
            else:
                T = T + g(f"T+{i}", ap) - g(f"T-{i}", am)
        if ku == "G":
            return LambdaPoly({0: g("L", 2 * delta) - T.partial() * 2, 1: T * (-4)}, N)
        return LambdaPoly({0: g("U", delta) + T * 2}, N)
    return None


def compare_presentations(N: int = DEFAULT_N) -> list[dict]:
    """Differences between the alpha-matrix table and the matrix-form table.

    Returns one record per ordered generator pair listed by the alpha table
    whose entry differs from the matrix-form structure constants.
    """
    table = structure_table(None, N)
    diffs = []
    for u in V_GENS:
        for v in V_GENS:
            alt = alpha_form_bracket(u, v, N)
            if alt is None:
                continue
            ref = table.bracket(u, v)
            if alt != ref:
                diffs.append({"pair": [u, v], "alpha_table": str(alt), "matrix_form": str(ref)})
    return diffs
