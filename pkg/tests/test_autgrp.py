import random
from fractions import Fraction

import pytest

import largen4.autgrp as ag
from largen4 import linalg
from largen4.axioms import check_homomorphism
from largen4.conformal import GENS, V_GENS, ConfElem
from largen4.mat2 import Mat2, parse_mat2
from largen4.scalars import LaurentElem, Scalar
from strategies import N

i = Scalar.imag_unit(N)
t = LaurentElem.t(N)
I = Mat2.identity()


def g(name, c=1, dpow=0, exp=0):
    return ConfElem.gen(name, c, dpow, exp, N)


def test_omega_images():
    im = ag.images(ag.omega(N))
    assert im["U"] == -g("U") and im["L"] == g("L") and im["C"] == g("C")
    assert im["T+2"] == g("T-2")


def test_theta_on_virasoro():
    s = ag.theta(Mat2.of(1, t, 0, 1), I)
    assert ag.apply_auto(s, g("L")) == g("L") - g("T+1", i) + g("T+2")


def test_tau_shifts_virasoro_by_u():
    f = LaurentElem({1: 1, -1: 1}, N)
    assert ag.apply_auto(ag.tau(f, N), g("L")) == g("L") + g("U") * f
    assert ag.apply_auto(ag.tau(f, N), g("Q3")) == g("Q3")


def test_apply_extends_through_derivatives_and_laurent_factors():
    s = ag.theta(Mat2.of(1, t, 0, 1), I)
    x = g("L", 2, 1, 3)
    image_l = ag.apply_auto(s, g("L"))
    assert ag.apply_auto(s, x) == image_l.hat_partial() * LaurentElem.monomial(3, 2, N)


@pytest.mark.parametrize("f", [LaurentElem.const(1, N), t, t + t.inverse()])
def test_tau_is_a_homomorphism(f):
    assert check_homomorphism(ag.images(ag.tau(f, N)), N=N).passed


def test_omega_and_random_theta_are_homomorphisms():
    assert check_homomorphism(ag.images(ag.omega(N)), N=N).passed
    rng = random.Random(2)
    for _ in range(3):
        s = ag.theta(ag.random_sl2(rng, N), ag.random_sl2(rng, N))
        assert check_homomorphism(ag.images(s), N=N).passed


def test_random_specs_are_homomorphisms():
    rng = random.Random(8)
    for _ in range(3):
        assert check_homomorphism(ag.images(ag.random_spec(rng, N)), N=N).passed


def test_random_sl2_has_unit_determinant_and_small_degree():
    rng = random.Random(4)
    for _ in range(10):
        A = ag.random_sl2(rng, N)
        assert A.is_sl2()
        assert all(not e or max(abs(q) for q in e.exponents()) <= 2 for e in A.entries)


# ---------------------------------------------------------------------------
# group structure

def test_composition_relations():
    rng = random.Random(13)
    w = ag.omega(N)
    assert ag.compose(w, w).is_identity()
    for _ in range(10):
        A, B = ag.random_sl2(rng, N), ag.random_sl2(rng, N)
        f = ag.random_laurent(rng, N=N)
        assert ag.compose(ag.compose(w, ag.theta(A, B)), w) == ag.theta(B, A)
        assert ag.compose(ag.compose(w, ag.tau(f, N)), w) == ag.tau(-f, N)
        assert ag.compose(ag.tau(f, N), ag.theta(A, B)) == ag.compose(ag.theta(A, B), ag.tau(f, N))


def test_compose_is_functorial():
    rng = random.Random(21)
    for _ in range(10):
        s1, s2 = ag.random_spec(rng, N), ag.random_spec(rng, N)
        assert ag.images(ag.compose(s1, s2)) == ag.compose_images(ag.images(s1), ag.images(s2), N)


def test_compose_is_associative():
    rng = random.Random(22)
    a, b, c = (ag.random_spec(rng, N) for _ in range(3))
    assert ag.compose(ag.compose(a, b), c) == ag.compose(a, ag.compose(b, c))


def test_sign_kernel():
    assert ag.images(ag.theta(-I, -I)) == {x: g(x) for x in GENS}
    assert ag.theta(-I, -I).is_identity()
    moved = ag.images(ag.theta(I, -I))
    assert moved["Q1"] == -g("Q1")
    assert not ag.theta(I, -I).is_identity()


def test_power_and_inverse():
    s = ag.theta(Mat2.of(1, t, 0, 1), I)
    assert ag.power(s, 3) == ag.theta(Mat2.of(1, t * 3, 0, 1), I)
    assert ag.compose(s, ag.power(s, -1)).is_identity()
    w = ag.compose(ag.random_spec(random.Random(6), N), ag.omega(N))
    assert ag.compose(ag.inverse(w), w).is_identity()


@pytest.mark.parametrize("spec,order", [
    (ag.identity(N), 1),
    (ag.omega(N), 2),
    (ag.theta(Mat2.of(i, 0, 0, -i), I), 4),
    (ag.theta(Mat2.of(0, 1, -1, 0), Mat2.of(0, 1, -1, 0)), 2),
    (ag.tau(LaurentElem.const(1, N), N), None),
])
def test_order_of(spec, order):
    assert ag.order_of(spec, max_order=12) == order


def test_diag_i_squares_to_the_sign_flip():
    s = ag.theta(Mat2.of(i, 0, 0, -i), I)
    sq = ag.power(s, 2)
    assert not sq.is_identity()
    assert sq == ag.theta(-I, I)


# ---------------------------------------------------------------------------
# recognition

def test_recognize_round_trip():
    rng = random.Random(31)
    for _ in range(6):
        s = ag.random_spec(rng, N)
        assert ag.recognize(ag.images(s), N) == s


def test_recognize_named_specs():
    for name in ag.SPEC_NAMES:
        s = ag.named_spec(name, N)
        if s.projective:
            continue
        assert ag.recognize(ag.images(s), N) == s


def test_recognize_projective_data():
    A = Mat2.of(1, 0, 0, -1)
    s = ag.AutSpec(A, A, LaurentElem(N=N), 0, projective=True)
    got = ag.recognize(ag.images(s), N)
    assert ag.images(got) == ag.images(s)


def test_recognize_rejects_non_automorphisms():
    with pytest.raises(ag.NotAnAutomorphism):
        ag.recognize({"U": -g("U")}, N)
    with pytest.raises(ag.NotAnAutomorphism):
        ag.recognize({"L": g("L") + g("U", exp=1), "U": g("U") * 2}, N)


def test_spec_json():
    s = ag.theta(Mat2.of(1, t, 0, 1), I)
    data = s.to_json()
    assert data["eps"] == 0 and parse_mat2(data["A"], N) == s.A


# ---------------------------------------------------------------------------
# eigenspaces

def _in_span(vec: ConfElem, basis: list[ConfElem]) -> bool:
    def coords(x):
        return [x.coeff(v, 0).constant_term() if x.coeff(v, 0) else Scalar(0, N) for v in V_GENS]
    rows = [coords(b) for b in basis]
    return linalg.rank(rows + [coords(vec)]) == linalg.rank(rows)


def test_omega_eigenspaces_match_the_printed_spans():
    even, odd = ag.eigenspaces(ag.omega(N), 2)
    assert len(even) == len(odd) == 8
    printed_even = [g("L"), g("Q4")] + [g(f"T+{k}") + g(f"T-{k}") for k in (1, 2, 3)] + [g(f"G{k}") for k in (1, 2, 3)]
    printed_odd = [g("U"), g("G4")] + [g(f"T+{k}") - g(f"T-{k}") for k in (1, 2, 3)] + [g(f"Q{k}") for k in (1, 2, 3)]
    assert all(_in_span(v, even) for v in printed_even)
    assert all(_in_span(v, odd) for v in printed_odd)
    assert not _in_span(g("U"), even)


def test_eigenspaces_of_an_order_four_theta():
    s = ag.theta(Mat2.of(i, 0, 0, -i), I)
    spaces = ag.eigenspaces(s, 4)
    assert sum(map(len, spaces)) == 16
    zeta = i
    for k, basis in enumerate(spaces):
        for v in basis:
            assert ag.apply_auto(s, v) == v * (zeta ** k)


def test_eigenspaces_require_the_right_order():
    with pytest.raises(ag.OrderMismatch):
        ag.eigenspaces(ag.omega(N), 3)
    with pytest.raises(ValueError):
        ag.action_matrix(ag.tau(t, N))


# ---------------------------------------------------------------------------
# central lifts

def test_hat_tau_formula_and_homomorphism():
    f = Scalar(Fraction(3, 2), N)
    im = ag.hat_tau_images(f, N)
    assert im["L"] == g("L") + g("U", f) - g("C", f * f * Fraction(1, 6))
    assert check_homomorphism(im, Fraction(1, 2), N=N).passed


def test_hat_tau_lift_is_forced_by_interpolation():
    fit = ag.interpolate_central_lift(Fraction(1, 2), N=N)
    assert fit == {"L": [0, 0, Fraction(-1, 6)], "U": [0, Fraction(-1, 3)]}


def test_hat_omega_depends_on_gamma():
    assert check_homomorphism(ag.hat_omega_images(N), Fraction(1, 2), N=N).passed
    rep = check_homomorphism(ag.hat_omega_images(N), Fraction(1, 3), N=N, stop_at_first=True)
    assert not rep.passed and rep.failures[0].witness == ("L", "U")
    assert ag.solve_central_lift(ag.omega_images(N), Fraction(1, 3), N=N) is None


def test_lift_images_adds_central_corrections():
    out = ag.lift_images({}, {"U": Scalar(2, N)}, N)
    assert out["U"] == g("U") + g("C", 2) and out["L"] == g("L")
