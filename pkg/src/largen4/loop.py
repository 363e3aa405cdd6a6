"""Twisted loop conformal superalgebras L(A, sigma) inside A (x) D_m."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .autgrp import AutSpec, OrderMismatch, action_matrix, eigenspaces, power
from .conformal import V_GENS, BracketTable, ConfElem, LambdaPoly, lambda_bracket
from .scalars import Scalar, root_of_unity


@dataclass
class LoopAlgebra:
    """The zeta_m-graded subalgebra sum_k A_{km mod m} (x) t^k, k in (1/m)Z.

    The basis is virtual: membership is decided term by term from the action
    of sigma on V, and ``window`` enumerates a finite slice.
    """

    sigma: AutSpec
    m: int
    eigenbases: list[list[ConfElem]]
    _matrix: list[list[Scalar]] = field(repr=False, default_factory=list)

    @property
    def N(self) -> int:
        return self.sigma.N

    def grade(self, k) -> int | None:
        """Eigenspace index km mod m for exponent k, or None if k is not in (1/m)Z."""
        km = Fraction(k) * self.m
        if km.denominator != 1:
            return None
        return int(km) % self.m

    def is_member(self, x: ConfElem) -> bool:
        return loop_membership(self, x)

    def n_product(self, a: ConfElem, n: int, b: ConfElem, gamma=None, table: BracketTable | None = None) -> ConfElem:
        return lambda_bracket(a, b, gamma, table).n_product(n)

    def bracket(self, a: ConfElem, b: ConfElem, gamma=None, table: BracketTable | None = None) -> LambdaPoly:
        return lambda_bracket(a, b, gamma, table)

    def window(self, W) -> list[tuple[ConfElem, Fraction]]:
        """Basis pairs (v (x) t^k, k) with v in the eigenbasis of grade k and |k| <= W."""
        out = []
        W = Fraction(W)
        lo = -int(W * self.m)
        for j in range(lo, -lo + 1):
            k = Fraction(j, self.m)
            for v in self.eigenbases[j % self.m]:
                out.append((v * _monomial(k, self.N), k))
        return out

    def graded_table(self) -> list[dict]:
        zeta = root_of_unity(self.m, self.N)
        return [{"grade": i, "eigenvalue": str(zeta ** i), "exponents": f"{i}/{self.m} + Z",
                 "basis": [str(v) for v in basis]}
                for i, basis in enumerate(self.eigenbases)]


def _monomial(k, N: int):
    from .scalars import LaurentElem
    return LaurentElem.monomial(k, 1, N)


def build_loop(sigma: AutSpec, m: int) -> LoopAlgebra:
    """L(A, sigma) for a constant-data automorphism with sigma^m = id."""
    if not sigma.is_constant():
        raise ValueError("only automorphisms with constant data can be used for twisting")
    if not power(sigma, m).is_identity():
        raise OrderMismatch(f"sigma^{m} is not the identity")
    return LoopAlgebra(sigma, m, eigenspaces(sigma, m), action_matrix(sigma))


def loop_membership(loop: LoopAlgebra, x: ConfElem) -> bool:
    """True iff each (dpow, t^k) component of x lies in the zeta_m^{km} eigenspace."""
    groups: dict[tuple, dict[str, Scalar]] = {}
    for (g, d, q), c in x._t.items():
        groups.setdefault((d, q), {})[g] = c
    zeta = root_of_unity(loop.m, loop.N)
    S = loop._matrix
    for (d, q), comp in groups.items():
        i = loop.grade(q)
        if i is None:
            return False
        lam = zeta ** i
        if "C" in comp and lam != 1:
            return False
        vec = [comp.get(g, Scalar(0, loop.N)) for g in V_GENS]
        for r in range(16):
            acc = Scalar(0, loop.N)
            for c_, v in zip(S[r], vec):
                if c_ and v:
                    acc = acc + c_ * v
            if acc != lam * vec[r]:
                return False
    return True
