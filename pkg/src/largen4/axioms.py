"""Machine checks of the conformal superalgebra axioms and of homomorphisms."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterable, Mapping, Sequence

from .conformal import (
    GENS, PARITY, V_GENS, WEIGHT, BracketTable, ConfElem, LambdaPoly, _acc, _check_parity,
    _flat_to_poly, _table, bracket_flat,
)
from .scalars import Scalar, _exp


@dataclass(frozen=True)
class Failure:
    witness: tuple
    left: str
    right: str
    check: str = ""

    def to_json(self) -> dict:
        return {"check": self.check, "witness": list(self.witness), "left": self.left, "right": self.right}


@dataclass
class CheckReport:
    failures: list[Failure] = field(default_factory=list)
    checked: int = 0
    suspected: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def merge(self, other: "CheckReport") -> "CheckReport":
        return CheckReport(self.failures + other.failures, self.checked + other.checked,
                           self.suspected + other.suspected)

    def to_json(self) -> dict:
        out = {"passed": self.passed, "checked": self.checked,
               "failures": [f.to_json() for f in self.failures]}
        if self.suspected:
            out["suspected"] = [f.to_json() for f in self.suspected]
        return out


def default_jobs() -> int:
    return max(1, int(os.environ.get("LARGEN4_JOBS", "1")))


def _parallel_map(fn: Callable, chunks: Sequence, jobs: int | None) -> list:
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, chunks))


def _chunks(items: list, n: int) -> list[list]:
    n = max(1, n)
    size = max(1, math.ceil(len(items) / n))
    return [items[i:i + size] for i in range(0, len(items), size)]


# ---------------------------------------------------------------------------
# skew-symmetry

def skew_rhs(a: ConfElem, b: ConfElem, table: BracketTable) -> LambdaPoly:
    """-(-1)^{p(a)p(b)} [a_{-lambda-d} b], with d the loop derivation acting on coefficients."""
    P = _flat_to_poly(bracket_flat(a, b, table), a.N)
    sign = 1 if (_check_parity(a) * _check_parity(b)) else -1
    out: dict[int, ConfElem] = {}
    for n, coeff in P.coeffs.items():
        for k in range(n + 1):
            term = coeff.hat_partial(n - k) * (math.comb(n, k) * (-1) ** n * sign)
            out[k] = out[k] + term if k in out else term
    return LambdaPoly(out, a.N)


def _skew_one(a: ConfElem, b: ConfElem, table: BracketTable, witness) -> Failure | None:
    left = _flat_to_poly(bracket_flat(b, a, table), a.N)
    right = skew_rhs(a, b, table)
    if left != right:
        return Failure(witness, str(left), str(right), "skew-symmetry")
    return None


def check_skew_symmetry(a: ConfElem, b: ConfElem, gamma=None, table: BracketTable | None = None) -> CheckReport:
    """[b_lambda a] = -(-1)^{p(a)p(b)} [a_{-lambda-d} b]."""
    _check_parity(a)
    _check_parity(b)
    table = _table(gamma, table, a.N)
    f = _skew_one(a, b, table, (str(a), str(b)))
    return CheckReport([f] if f else [], 1)


# ---------------------------------------------------------------------------
# Jacobi

def jacobi_defect(a: ConfElem, b: ConfElem, c: ConfElem, table: BracketTable) -> dict:
    """[a_l[b_m c]] - [[a_l b]_{l+m} c] - (-1)^{p(a)p(b)} [b_m[a_l c]] as a bi-degree map.

    Keys are ``(deg_lambda, deg_mu, gen, dpow, exp)``.
    """
    pa, pb = _check_parity(a), _check_parity(b)
    _check_parity(c)
    N = a.N
    acc: dict = {}
    for j, X in _by_deg(bracket_flat(b, c, table), N).items():
        for (i, g, d, e), s in bracket_flat(a, X, table).items():
            _acc(acc, (i, j, g, d, e), s)
    sgn = -1 if pa * pb else 1
    for i, Z in _by_deg(bracket_flat(a, c, table), N).items():
        for (j, g, d, e), s in bracket_flat(b, Z, table).items():
            _acc(acc, (i, j, g, d, e), s * (-sgn))
    for k, W in _by_deg(bracket_flat(a, b, table), N).items():
        for (m, g, d, e), s in bracket_flat(W, c, table).items():
            for r in range(m + 1):
                _acc(acc, (k + r, m - r, g, d, e), s * (-math.comb(m, r)))
    return acc


def _by_deg(flat: dict, N: int) -> dict[int, ConfElem]:
    by: dict[int, dict] = {}
    for (deg, g, d, e), c in flat.items():
        by.setdefault(deg, {})[(g, d, e)] = c
    return {k: ConfElem._flat(v, N) for k, v in sorted(by.items())}


def _format_bipoly(acc: dict, N: int) -> str:
    by: dict[tuple, dict] = {}
    for (i, j, g, d, e), c in acc.items():
        by.setdefault((i, j), {})[(g, d, e)] = c
    parts = [f"λ^{i}μ^{j}*({ConfElem._flat(v, N)})" for (i, j), v in sorted(by.items())]
    return " + ".join(parts) or "0"


def check_jacobi(a: ConfElem, b: ConfElem, c: ConfElem, gamma=None,
                 table: BracketTable | None = None) -> CheckReport:
    """[a_l[b_m c]] = [[a_l b]_{l+m} c] + (-1)^{p(a)p(b)} [b_m[a_l c]]."""
    table = _table(gamma, table, a.N)
    defect = jacobi_defect(a, b, c, table)
    if defect:
        return CheckReport([Failure((str(a), str(b), str(c)), _format_bipoly(defect, a.N), "0", "jacobi")], 1)
    return CheckReport([], 1)


# ---------------------------------------------------------------------------
# sweeps over generators

def _skew_chunk(table: BracketTable, pairs: list) -> list[Failure]:
    out = []
    for u, v in pairs:
        f = _skew_one(ConfElem.gen(u, N=table.N), ConfElem.gen(v, N=table.N), table, (u, v))
        if f:
            out.append(f)
    return out


def _jacobi_chunk(table: BracketTable, triples: list) -> list[Failure]:
    out = []
    N = table.N
    for u, v, w in triples:
        defect = jacobi_defect(ConfElem.gen(u, N=N), ConfElem.gen(v, N=N), ConfElem.gen(w, N=N), table)
        if defect:
            out.append(Failure((u, v, w), _format_bipoly(defect, N), "0", "jacobi"))
    return out


def sweep_skew_symmetry(gamma=None, table: BracketTable | None = None, jobs: int | None = None,
                        gens: Sequence[str] = V_GENS) -> CheckReport:
    table = _table(gamma, table, table.N if table else _default_N())
    pairs = [(u, v) for u in gens for v in gens]
    jobs = default_jobs() if jobs is None else jobs
    res = _parallel_map(partial(_skew_chunk, table), _chunks(pairs, jobs), jobs)
    return CheckReport([f for r in res for f in r], len(pairs))


def sweep_jacobi(gamma=None, table: BracketTable | None = None, jobs: int | None = None,
                 gens: Sequence[str] = V_GENS) -> CheckReport:
    table = _table(gamma, table, table.N if table else _default_N())
    triples = [(u, v, w) for u in gens for v in gens for w in gens]
    jobs = default_jobs() if jobs is None else jobs
    res = _parallel_map(partial(_jacobi_chunk, table), _chunks(triples, 4 * jobs), jobs)
    return CheckReport([f for r in res for f in r], len(triples))


def check_axioms(gamma=None, table: BracketTable | None = None, jobs: int | None = None) -> CheckReport:
    """Full skew-symmetry and Jacobi sweeps over the 16 generators of V."""
    return sweep_skew_symmetry(gamma, table, jobs).merge(sweep_jacobi(gamma, table, jobs))


def _default_N() -> int:
    from .scalars import DEFAULT_N
    return DEFAULT_N


# ---------------------------------------------------------------------------
# homomorphisms

class ImageMap:
    """A map on generators extended by d^- and Laurent-linearity.

    ``phi(d^k v (x) f) = f * d^^k phi(v)`` where ``d^`` is the loop derivation.
    Generators missing from ``images`` are fixed.
    """

    def __init__(self, images: Mapping[str, ConfElem], N: int):
        self.images = dict(images)
        self.N = N
        self._memo: dict = {}

    def image(self, g: str, dpow: int = 0) -> ConfElem:
        key = (g, dpow)
        hit = self._memo.get(key)
        if hit is None:
            base = self.images.get(g)
            if base is None:
                base = ConfElem.gen(g, N=self.N)
            hit = base.hat_partial(dpow)
            self._memo[key] = hit
        return hit

    def __call__(self, x: ConfElem) -> ConfElem:
        acc: dict = {}
        for (g, d, q), c in x._t.items():
            for (g2, d2, q2), c2 in self.image(g, d)._t.items():
                _acc(acc, (g2, d2, _exp(q + q2)), c * c2)
        return ConfElem._flat(acc, self.N)

    def on_poly(self, p: LambdaPoly) -> LambdaPoly:
        return p.map(self)


def check_homomorphism(images: Mapping[str, ConfElem] | ImageMap, gamma=None,
                       table: BracketTable | None = None, target: BracketTable | None = None,
                       N: int | None = None, stop_at_first: bool = False) -> CheckReport:
    """phi([u_lambda v]) = [phi(u)_lambda phi(v)] for all generator pairs, in ``GENS`` order."""
    if N is None:
        if isinstance(images, ImageMap):
            N = images.N
        elif table is not None:
            N = table.N
        else:
            N = next(iter(images.values())).N if images else _default_N()
    phi = images if isinstance(images, ImageMap) else ImageMap(images, N)
    for g in GENS:
        _check_parity(phi.image(g))
    source = _table(gamma, table, N)
    target = source if target is None else target
    report = CheckReport()
    for u in GENS:
        for v in GENS:
            report.checked += 1
            left = phi.on_poly(source.bracket(u, v))
            right = _flat_to_poly(bracket_flat(phi.image(u), phi.image(v), target), N)
            if left != right:
                report.failures.append(Failure((u, v), str(left), str(right), "homomorphism"))
                if stop_at_first:
                    return report
    return report


# ---------------------------------------------------------------------------

def check_primary(v: str, gamma=None, table: BracketTable | None = None, N: int | None = None) -> CheckReport:
    """v_(0)L = (D-1) dv, v_(1)L = D v and v_(k)L = 0 for k >= 2, with D the weight of v."""
    if v == "C":
        raise ValueError("C is central and has no conformal weight check")
    N = (table.N if table else _default_N()) if N is None else N
    table = _table(gamma, table, N)
    x = ConfElem.gen(v, N=N)
    P = _flat_to_poly(bracket_flat(x, ConfElem.gen("L", N=N), table), N)
    w = WEIGHT[v]
    report = CheckReport(checked=3)
    expected = {0: x.partial() * (w - 1), 1: x * w}
    for n in range(max(P.degree(), 1) + 1):
        got = P.n_product(n)
        want = expected.get(n, ConfElem.zero(N))
        if got != want:
            report.failures.append(Failure((v, n), str(got), str(want), "primary"))
    return report


def iter_generator_pairs(gens: Iterable[str] = GENS):
    gens = list(gens)
    return ((u, v) for u in gens for v in gens)


__all__ = [
    "CheckReport", "Failure", "ImageMap", "check_axioms", "check_homomorphism", "check_jacobi",
    "check_primary", "check_skew_symmetry", "jacobi_defect", "skew_rhs", "sweep_jacobi",
    "sweep_skew_symmetry", "PARITY",
]
