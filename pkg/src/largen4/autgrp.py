"""Automorphisms of A (x) D^ in the normal form theta_{A,B} o tau_f o omega^eps."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping

from . import linalg
from .axioms import ImageMap, check_homomorphism
from .conformal import (
    GENS, V_GENS, BracketTable, ConfElem, _table, expand_matrix_form, kind, matrix_coordinates,
    matrix_preimages,
)
from .mat2 import Mat2, dagger
from .scalars import (
    DEFAULT_N, LaurentElem, NonInvertible, Scalar, as_scalar, laurent_divexact, laurent_gcd,
    root_of_unity,
)


class NotAnAutomorphism(ValueError):
    """The given generator images do not define an automorphism of the expected shape."""


class OrderMismatch(ValueError):
    """The automorphism does not have the requested order."""


def _leading(M: Mat2) -> Scalar | None:
    """Scalar of the lowest-exponent term of the first nonzero entry, scanning u11, u12, u21, u22."""
    for e in M.entries:
        if e:
            return e.coeff(min(e.exponents()))
    return None


def _sign_of(c: Scalar) -> int:
    for q in c.coeffs:
        if q:
            return 1 if q > 0 else -1
    return 0


@dataclass(frozen=True)
class AutSpec:
    """theta_{A,B} o tau_f o omega^eps, stored canonically.

    Non-projective specs have det A = det B = 1 and are identified with
    (-A, -B): the representative is chosen so that the leading scalar of the
    first nonzero entry of A has a positive first nonzero rational
    coordinate.  A projective spec keeps (A, B) only up to a common nonzero
    constant (det A = det B is then a constant with no square root in the
    scalar field); its representative makes that leading scalar equal to 1.
    """

    A: Mat2
    B: Mat2
    f: LaurentElem
    eps: int = 0
    projective: bool = False

    def __post_init__(self):
        A, B, f = self.A, self.B, self.f
        if not isinstance(f, LaurentElem):
            f = LaurentElem.const(f, A.u11.N)
            object.__setattr__(self, "f", f)
        if self.eps not in (0, 1):
            raise ValueError("eps must be 0 or 1")
        dA, dB = A.det(), B.det()
        if self.projective:
            if dA != dB or not dA.is_constant() or not dA:
                raise ValueError("projective specs need det A = det B, a nonzero constant")
            lead = _leading(A)
            inv = lead.inverse()
            if lead != 1:
                object.__setattr__(self, "A", A.scale(inv))
                object.__setattr__(self, "B", B.scale(inv))
        else:
            if dA != 1 or dB != 1:
                raise ValueError(f"A and B must have determinant 1 (got {dA}, {dB})")
            if _sign_of(_leading(A)) < 0:
                object.__setattr__(self, "A", -A)
                object.__setattr__(self, "B", -B)

    @property
    def N(self) -> int:
        return self.A.u11.N

    def is_identity(self) -> bool:
        if self.eps or self.f:
            return False
        A, B = self.A, self.B
        return A.is_scalar_multiple_of_identity() and A == B

    def is_constant(self) -> bool:
        return self.A.is_constant() and self.B.is_constant() and self.f.is_constant()

    def to_json(self) -> dict:
        return {"A": str(self.A), "B": str(self.B), "f": str(self.f), "eps": self.eps,
                "projective": self.projective}

    def __str__(self) -> str:
        s = f"(A={self.A}, B={self.B}, f={self.f}, eps={self.eps})"
        return s + " [projective]" if self.projective else s


def _normalize_projective(A: Mat2, B: Mat2, f: LaurentElem, eps: int) -> AutSpec:
    """Build a spec from (A, B) with det A = det B = c, taking sqrt(c) when it exists."""
    c = A.det().constant_term()
    if c == 1:
        return AutSpec(A, B, f, eps)
    root = c.sqrt()
    if root is None:
        return AutSpec(A, B, f, eps, projective=True)
    inv = root.inverse()
    return AutSpec(A.scale(inv), B.scale(inv), f, eps)


# ---------------------------------------------------------------------------
# constructors

def identity(N: int = DEFAULT_N) -> AutSpec:
    return AutSpec(Mat2.identity(), Mat2.identity(), LaurentElem(N=N), 0)


def theta(A: Mat2, B: Mat2) -> AutSpec:
    return AutSpec(A, B, LaurentElem(N=A.u11.N), 0)


def tau(f, N: int = DEFAULT_N) -> AutSpec:
    f = f if isinstance(f, LaurentElem) else LaurentElem.const(f, N)
    return AutSpec(Mat2.identity(), Mat2.identity(), f, 0)


def omega(N: int = DEFAULT_N) -> AutSpec:
    return AutSpec(Mat2.identity(), Mat2.identity(), LaurentElem(N=N), 1)


# ---------------------------------------------------------------------------
# generator images

def _E(kd: str, M: Mat2, N: int) -> ConfElem:
    return expand_matrix_form(kd, M, N)


def theta_images(A: Mat2, B: Mat2, N: int = DEFAULT_N) -> dict[str, ConfElem]:
    pre = matrix_preimages(N)
    Ainv, Binv = A.inverse(), B.inverse()
    dA, dBinv = A.derivative(), Binv.derivative()
    im = {
        "L": ConfElem.gen("L", N=N) + _E("T+", (dA @ Ainv).traceless_part(), N)
        + _E("T-", (B.derivative() @ Binv).traceless_part(), N),
        "U": ConfElem.gen("U", N=N),
        "C": ConfElem.gen("C", N=N),
    }
    for g in V_GENS:
        k = kind(g)
        M = pre.get(g)
        if k == "T+":
            im[g] = _E("T+", A @ M @ Ainv, N)
        elif k == "T-":
            im[g] = _E("T-", B @ M @ Binv, N)
        elif k == "G":
            im[g] = _E("G", A @ M @ Binv, N) - _E("Q", dA @ M @ Binv - A @ M @ dBinv, N)
        elif k == "Q":
            im[g] = _E("Q", A @ M @ Binv, N)
    return im


def tau_images(f: LaurentElem, N: int = DEFAULT_N) -> dict[str, ConfElem]:
    pre = matrix_preimages(N)
    im = {g: ConfElem.gen(g, N=N) for g in GENS}
    im["L"] = im["L"] + ConfElem.gen("U", N=N) * f
    for p in range(1, 5):
        im[f"G{p}"] = im[f"G{p}"] + _E("Q", pre[f"G{p}"].scale(f), N)
    return im


def omega_images(N: int = DEFAULT_N) -> dict[str, ConfElem]:
    pre = matrix_preimages(N)
    im = {"L": ConfElem.gen("L", N=N), "U": -ConfElem.gen("U", N=N), "C": ConfElem.gen("C", N=N)}
    for i in (1, 2, 3):
        im[f"T+{i}"] = ConfElem.gen(f"T-{i}", N=N)
        im[f"T-{i}"] = ConfElem.gen(f"T+{i}", N=N)
    for p in range(1, 5):
        im[f"G{p}"] = _E("G", dagger(pre[f"G{p}"]), N)
        im[f"Q{p}"] = -_E("Q", dagger(pre[f"Q{p}"]), N)
    return im


def compose_images(outer: Mapping[str, ConfElem], inner: Mapping[str, ConfElem], N: int) -> dict[str, ConfElem]:
    """Images of outer o inner."""
    phi = ImageMap(outer, N)
    return {g: phi(inner.get(g, ConfElem.gen(g, N=N))) for g in GENS}


@lru_cache(maxsize=512)
def images(s: AutSpec) -> dict[str, ConfElem]:
    """Generator images of theta_{A,B} o tau_f o omega^eps."""
    N = s.N
    im = omega_images(N) if s.eps else {g: ConfElem.gen(g, N=N) for g in GENS}
    if s.f:
        im = compose_images(tau_images(s.f, N), im, N)
    if not (s.A == Mat2.identity() and s.B == Mat2.identity()):
        im = compose_images(theta_images(s.A, s.B, N), im, N)
    return im


def apply_auto(s: AutSpec, x: ConfElem) -> ConfElem:
    return ImageMap(images(s), s.N)(x)


def compose(s1: AutSpec, s2: AutSpec) -> AutSpec:
    """Normal form of s1 o s2, using omega theta_{A,B} omega = theta_{B,A},
    omega tau_f omega = tau_{-f} and tau theta = theta tau."""
    A2, B2, f2 = s2.A, s2.B, s2.f
    if s1.eps:
        A2, B2, f2 = B2, A2, -f2
    A, B = s1.A @ A2, s1.B @ B2
    f, eps = s1.f + f2, (s1.eps + s2.eps) % 2
    if s1.projective or s2.projective:
        return _normalize_projective(A, B, f, eps)
    return AutSpec(A, B, f, eps)


def inverse(s: AutSpec) -> AutSpec:
    """(theta_{A,B} tau_f omega^eps)^{-1} = omega^eps tau_{-f} theta_{A^-1,B^-1}."""
    core = compose(tau(-s.f, s.N), theta(s.A.inverse(), s.B.inverse()))
    out = compose(omega(s.N), core) if s.eps else core
    if not compose(s, out).is_identity():
        raise NotAnAutomorphism("inverse does not compose to the identity")
    return out


def power(s: AutSpec, k: int) -> AutSpec:
    if k < 0:
        return power(inverse(s), -k)
    out = identity(s.N)
    for _ in range(k):
        out = compose(out, s)
    return out


def order_of(s: AutSpec, max_order: int = 64) -> int | None:
    """Least k <= max_order with s^k = id, or None when the cap is exceeded."""
    cur = s
    for k in range(1, max_order + 1):
        if cur.is_identity():
            return k
        cur = compose(cur, s)
    return None


# ---------------------------------------------------------------------------
# eigenspaces

def action_matrix(s: AutSpec) -> list[list[Scalar]]:
    """Matrix of s on the 16-dimensional span V (column j = image of V_GENS[j])."""
    if not s.is_constant():
        raise ValueError("eigenspaces need constant A, B and f")
    N = s.N
    im = images(s)
    cols = []
    for g in V_GENS:
        x = im[g]
        col = []
        for h in V_GENS:
            c = x.coeff(h, 0)
            col.append(c.constant_term() if c else Scalar(0, N))
        if x.max_dpow() or not x.is_constant():
            raise ValueError(f"image of {g} leaves V")
        cols.append(col)
    return [[cols[j][i] for j in range(16)] for i in range(16)]


def eigenspaces(s: AutSpec, m: int) -> list[list[ConfElem]]:
    """Bases of the zeta_m^i eigenspaces of s on V, for i = 0..m-1."""
    N = s.N
    if not power(s, m).is_identity():
        raise OrderMismatch(f"s^{m} is not the identity")
    zeta = root_of_unity(m, N)
    S = action_matrix(s)
    out = []
    for i in range(m):
        lam = zeta ** i
        rows = [[S[r][c] - (lam if r == c else 0) for c in range(16)] for r in range(16)]
        basis = []
        for vec in linalg.nullspace(rows, 16, N):
            lead = next(v for v in vec if v)
            inv = lead.inverse()
            basis.append(ConfElem({(g, 0): v * inv for g, v in zip(V_GENS, vec) if v}, N))
        out.append(basis)
    if sum(len(b) for b in out) != 16:
        raise OrderMismatch("s is not diagonalizable over the scalar field")
    return out


# ---------------------------------------------------------------------------
# recognition

def _det3(M: list[list[LaurentElem]]) -> LaurentElem:
    a, b, c = M
    return (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _conjugator(X: list[Mat2], Y: list[Mat2], N: int) -> Mat2:
    """Primitive A (up to a constant) with A X_k = Y_k A for all k."""
    rows: list[list[LaurentElem]] = []
    z = LaurentElem(N=N)
    for Xk, Yk in zip(X, Y):
        x = [[Xk.u11, Xk.u12], [Xk.u21, Xk.u22]]
        y = [[Yk.u11, Yk.u12], [Yk.u21, Yk.u22]]
        for r in range(2):
            for s_ in range(2):
                row = [z] * 4
                for k in range(2):
                    row[2 * r + k] = row[2 * r + k] + x[k][s_]
                    row[2 * k + s_] = row[2 * k + s_] - y[r][k]
                rows.append(row)
    rows = [r for r in rows if any(r)]
    for trip in combinations(range(len(rows)), 3):
        sub = [rows[t] for t in trip]
        vec = []
        for j in range(4):
            minor = [[r[c] for c in range(4) if c != j] for r in sub]
            d = _det3(minor)
            vec.append(d if j % 2 == 0 else -d)
        if not any(vec):
            continue
        if all(not sum((a * b for a, b in zip(r, vec)), z) for r in rows):
            g = laurent_gcd(vec)
            vec = [laurent_divexact(v, g) for v in vec]
            return Mat2(*vec)
        break
    raise NotAnAutomorphism("no rank-one solution space for the conjugating matrix")


def _unit_normalize(A: Mat2) -> Mat2:
    """Divide by t^{e/2} so that det A becomes a constant."""
    d = A.det()
    if not d.is_unit():
        raise NotAnAutomorphism(f"determinant {d} is not a unit")
    (e, _), = d.items()
    return A.scale(LaurentElem.monomial(-Fraction(e) / 2, 1, A.u11.N))


def recognize(imgs: Mapping[str, ConfElem], N: int | None = None) -> AutSpec:
    """Recover the normal form (A, B, f, eps) from generator images."""
    N = next(iter(imgs.values())).N if N is None else N
    full = {g: imgs.get(g, ConfElem.gen(g, N=N)) for g in GENS}
    rep = check_homomorphism(full, None, N=N, stop_at_first=True)
    if not rep.passed:
        raise NotAnAutomorphism(f"not a homomorphism, witness {rep.failures[0].witness}")
    t1 = full["T+1"]
    kinds = {kind(g) for g in t1.support()}
    if kinds == {"T+"}:
        eps = 0
        psi = full
    elif kinds == {"T-"}:
        eps = 1
        psi = compose_images(full, omega_images(N), N)
    else:
        raise NotAnAutomorphism("image of T+1 is not in a single T-span")
    pre = matrix_preimages(N)
    try:
        Xs = [pre[f"T+{k}"] for k in (1, 2, 3)]
        YA = [matrix_coordinates("T+", psi[f"T+{k}"]) for k in (1, 2, 3)]
        YB = [matrix_coordinates("T-", psi[f"T-{k}"]) for k in (1, 2, 3)]
        A = _unit_normalize(_conjugator(Xs, YA, N))
        B0 = _unit_normalize(_conjugator(Xs, YB, N))
        # fix the relative scalar through Q(M) -> Q(A M B^{-1})
        M = pre["Q1"]
        target = matrix_coordinates("Q", psi["Q1"])
        guess = A @ M @ B0.inverse()
        r_inv = None
        for got, want in zip(target.entries, guess.entries):
            if want:
                r_inv = laurent_divexact(got, want)
                break
        if r_inv is None or not r_inv.is_unit():
            raise NotAnAutomorphism("cannot match the Q images")
        B = B0.scale(r_inv.inverse())
    except (ValueError, NonInvertible) as exc:
        if isinstance(exc, NotAnAutomorphism):
            raise
        raise NotAnAutomorphism(str(exc)) from exc
    f = psi["L"].coeff("U", 0)
    dA, dB = A.det(), B.det()
    if dA != dB or not dA.is_constant():
        raise NotAnAutomorphism("A and B cannot be normalized jointly")
    spec = _normalize_projective(A, B, f, eps)
    if images(spec) != full:
        raise NotAnAutomorphism("reconstructed automorphism differs from the input images")
    return spec


# ---------------------------------------------------------------------------
# central lifts on A(gamma)

def hat_tau_images(f, N: int = DEFAULT_N) -> dict[str, ConfElem]:
    """tau_f lifted to A(1/2): L -> L + fU - f^2/6 c, U -> U - f/3 c, c -> c."""
    f = as_scalar(f, N)
    im = tau_images(LaurentElem.const(f, N), N)
    im["L"] = im["L"] + ConfElem.gen("C", -f * f * Fraction(1, 6), N=N)
    im["U"] = im["U"] + ConfElem.gen("C", -f * Fraction(1, 3), N=N)
    return im


def hat_omega_images(N: int = DEFAULT_N) -> dict[str, ConfElem]:
    """omega lifted with c -> c."""
    return omega_images(N)


def solve_central_lift(imgs: Mapping[str, ConfElem], gamma, table: BracketTable | None = None,
                       N: int | None = None) -> dict[str, Scalar] | None:
    """Central corrections k_g making ``g -> imgs[g] + k_g c`` a homomorphism of A(gamma).

    The homomorphism defect is affine in the corrections, so this is an exact
    linear solve; returns None when no corrections work.
    """
    N = next(iter(imgs.values())).N if N is None else N
    table = _table(gamma, table, N)
    phi = ImageMap({g: imgs.get(g, ConfElem.gen(g, N=N)) for g in GENS}, N)
    unknowns = list(V_GENS)
    col = {g: j for j, g in enumerate(unknowns)}
    rows, rhs = [], []
    from .conformal import _flat_to_poly, bracket_flat
    for u in GENS:
        for v in GENS:
            src = table.bracket(u, v)
            left = phi.on_poly(src)
            right = _flat_to_poly(bracket_flat(phi.image(u), phi.image(v), table), N)
            diff = left - right
            for deg in sorted(set(diff.coeffs) | set(src.coeffs)):
                d = diff.coeff(deg)
                if any(g != "C" for g in d.support()):
                    return None
                row = [Scalar(0, N)] * len(unknowns)
                for (g, dp), lau in src.coeff(deg).terms.items():
                    if dp == 0 and g in col:
                        row[col[g]] = row[col[g]] + lau.constant_term()
                c = d.coeff("C")
                rows.append(row)
                rhs.append(-(c.constant_term() if c else Scalar(0, N)))
    sol = linalg.solve(rows, rhs)
    if sol is None:
        return None
    return {g: s for g, s in zip(unknowns, sol) if s}


def lift_images(imgs: Mapping[str, ConfElem], corrections: Mapping[str, Scalar], N: int) -> dict[str, ConfElem]:
    out = {g: imgs.get(g, ConfElem.gen(g, N=N)) for g in GENS}
    for g, k in corrections.items():
        out[g] = out[g] + ConfElem.gen("C", k, N=N)
    return out


def interpolate_central_lift(gamma, fs=(0, 1, 2), N: int = DEFAULT_N) -> dict[str, list[Fraction]]:
    """Fit the tau_f lift corrections as polynomials in f (lowest degree first)."""
    samples = {}
    for f in fs:
        sol = solve_central_lift(tau_images(LaurentElem.const(f, N), N), gamma, N=N)
        if sol is None:
            raise NotAnAutomorphism(f"tau_{f} does not lift at gamma={gamma}")
        samples[f] = sol
    gens = sorted({g for s in samples.values() for g in s}, key=GENS.index)
    out = {}
    for g in gens:
        ys = [samples[f].get(g, Scalar(0, N)) for f in fs]
        if not all(y.is_rational() for y in ys):
            raise ValueError("non-rational lift coefficient")
        out[g] = _lagrange([Fraction(f) for f in fs], [y.rational() for y in ys])
    return out


def _lagrange(xs: list[Fraction], ys: list[Fraction]) -> list[Fraction]:
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k in range(n):
            coeffs[k] += ys[i] * basis[k] / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


# ---------------------------------------------------------------------------
# random specs

def random_laurent(rng: random.Random, lo: int = -1, hi: int = 1, N: int = DEFAULT_N,
                   gaussian: bool = True) -> LaurentElem:
    terms = {}
    for e in range(lo, hi + 1):
        if rng.random() < 0.6:
            re = rng.randint(-2, 2)
            im = rng.randint(-1, 1) if gaussian and N % 4 == 0 else 0
            c = Scalar(re, N) + Scalar.imag_unit(N) * im if im else Scalar(re, N)
            if c:
                terms[e] = c
    return LaurentElem(terms, N)


def random_sl2(rng: random.Random, N: int = DEFAULT_N) -> Mat2:
    """E(p) F(q) = (1 + pq, p; q, 1) with p, q supported on t^-1, 1, t (entry degree <= 2)."""
    p = random_laurent(rng, N=N)
    q = random_laurent(rng, N=N)
    M = Mat2.of(1, p, 0, 1) @ Mat2.of(1, 0, q, 1)
    if rng.random() < 0.5:
        M = Mat2(M.u11, M.u21, M.u12, M.u22)
    return M


def random_spec(rng: random.Random, N: int = DEFAULT_N) -> AutSpec:
    return AutSpec(random_sl2(rng, N), random_sl2(rng, N), random_laurent(rng, N=N, gaussian=False),
                   rng.randint(0, 1))


def random_constant_sl2(rng: random.Random, N: int = DEFAULT_N) -> Mat2:
    a, b = rng.randint(-2, 2), rng.randint(-2, 2)
    return Mat2.of(1, a, 0, 1) @ Mat2.of(1, 0, b, 1)


SPEC_NAMES = ("identity", "omega")


def named_spec(name: str, N: int = DEFAULT_N) -> AutSpec:
    if name == "identity":
        return identity(N)
    if name == "omega":
        return omega(N)
    raise KeyError(f"unknown spec {name!r}")


__all__ = [
    "AutSpec", "NotAnAutomorphism", "OrderMismatch", "apply_auto", "compose", "eigenspaces",
    "hat_omega_images", "hat_tau_images", "identity", "images", "inverse", "omega", "order_of", "power",
    "recognize",
    "solve_central_lift", "tau", "theta",
]
