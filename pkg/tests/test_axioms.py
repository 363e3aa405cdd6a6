import random
from fractions import Fraction

import pytest

from largen4.axioms import (
    CheckReport, Failure, ImageMap, check_homomorphism, check_jacobi, check_primary,
    check_skew_symmetry, jacobi_defect, skew_rhs, sweep_jacobi, sweep_skew_symmetry,
)
from largen4.conformal import (
    GENS, PARITY, V_GENS, ConfElem, LambdaPoly, MixedParity, skew_reverse, structure_table,
)
from largen4.scalars import LaurentElem
from strategies import N


def g(name, c=1, dpow=0, exp=0):
    return ConfElem.gen(name, c, dpow, exp, N)


def test_report_invariant():
    assert CheckReport().passed
    rep = CheckReport([Failure(("L",), "a", "b", "x")], 1)
    assert not rep and rep.to_json()["failures"][0]["witness"] == ["L"]
    assert rep.merge(CheckReport([], 3)).checked == 4


def test_skew_examples(centreless):
    assert check_skew_symmetry(g("U"), g("U"), table=centreless).passed
    assert check_skew_symmetry(g("L"), g("L"), table=centreless).passed
    assert check_skew_symmetry(g("Q1"), g("G1"), table=centreless).passed
    assert check_skew_symmetry(g("G1"), g("Q1"), table=centreless).passed


def test_skew_rhs_of_virasoro(centreless):
    # [L_l L] = dL + 2lL, so -[L_{-l-d} L] = -(dL + 2(-l-d)L) = dL + 2lL
    assert skew_rhs(g("L"), g("L"), centreless) == centreless.bracket("L", "L")


def test_jacobi_examples(centreless, table_third):
    assert check_jacobi(g("U"), g("U"), g("G2"), table=centreless).passed
    assert check_jacobi(g("L"), g("L"), g("L"), table=table_third).passed
    assert check_jacobi(g("G1"), g("G2"), g("Q3"), table=table_third).passed


def test_jacobi_with_laurent_and_derivatives(table_half):
    a = g("L", 1, 1, Fraction(1, 2))
    b = g("G3", 2, 0, -1) + g("G1", 1, 2, 3)
    c = g("Q2", 1, 1, Fraction(3, 2))
    assert not jacobi_defect(a, b, c, table_half)
    assert check_skew_symmetry(a, g("T+1", exp=2), table=table_half).passed


def test_mixed_parity_rejected(centreless):
    with pytest.raises(MixedParity):
        check_skew_symmetry(g("L") + g("Q1"), g("L"), table=centreless)
    with pytest.raises(MixedParity):
        check_homomorphism({"L": g("L") + g("G1")}, table=centreless)


@pytest.mark.parametrize("gamma", [None, Fraction(1, 2), Fraction(1, 3), Fraction(2)])
def test_full_sweeps(gamma):
    table = structure_table(gamma, N)
    skew = sweep_skew_symmetry(table=table, jobs=1)
    jac = sweep_jacobi(table=table, jobs=1)
    assert skew.checked == 256 and skew.passed
    assert jac.checked == 4096 and jac.passed


def test_parallel_sweep_matches_serial(centreless):
    par = sweep_jacobi(table=centreless.mutated("L", "U", 0, "U", 1), jobs=2)
    ser = sweep_jacobi(table=centreless.mutated("L", "U", 0, "U", 1), jobs=1)
    assert par.failures == ser.failures and par.failures


# ---------------------------------------------------------------------------
# mutation testing

def _structure_constants(table):
    return [(u, v, d, k) for (u, v), e in sorted(table.entries.items()) for d, c in sorted(e.items())
            for k in sorted(c)]


def test_every_single_sign_flip_is_detected(centreless):
    """Flipping any one structure constant breaks skew-symmetry or Jacobi."""
    consts = _structure_constants(centreless)
    assert len(consts) > 300
    for u, v, d, (gen, dp) in consts:
        bad = centreless.mutated(u, v, d, gen, dp)
        rep = sweep_skew_symmetry(table=bad, jobs=1, gens=sorted({u, v}, key=GENS.index))
        if rep.passed:
            rep = sweep_jacobi(table=bad, jobs=1)
        assert not rep.passed, (u, v, d, gen, dp)
        assert rep.failures[0].witness


def _skew_consistent(table, u, v, d, gen, dp, factor):
    bad = table.mutated(u, v, d, gen, dp, factor)
    if u == v:
        return bad
    poly = {n: ConfElem._flat({(x, k, 0): c for (x, k), c in e.items()}, N) for n, e in bad.entries[(u, v)].items()}
    return bad.with_entry(v, u, LambdaPoly(skew_reverse(poly, PARITY[u], PARITY[v], N), N))


def test_skew_consistent_corruptions_break_jacobi(centreless):
    rng = random.Random(5)
    consts = _structure_constants(centreless)
    for u, v, d, (gen, dp) in rng.sample(consts, 12):
        bad = _skew_consistent(centreless, u, v, d, gen, dp, 3)
        assert sweep_skew_symmetry(table=bad, jobs=1).passed
        rep = sweep_jacobi(table=bad, jobs=1)
        assert not rep.passed, (u, v, d, gen, dp)


def test_central_term_corruption_is_detected(table_third):
    bad = _skew_consistent(table_third, "L", "U", 2, "C", 0, 2)
    rep = sweep_jacobi(table=bad, jobs=1)
    assert not rep.passed


# ---------------------------------------------------------------------------
# homomorphisms and primaries

def test_identity_map_is_a_homomorphism(table_third):
    assert check_homomorphism({}, table=table_third, N=N).passed


def test_homomorphism_reports_first_witness_in_generator_order(table_third):
    images = {"U": -g("U")}
    rep = check_homomorphism(images, table=table_third, N=N, stop_at_first=True)
    assert not rep.passed and rep.failures[0].witness == ("L", "U")


def test_image_map_extends_by_hat_partial():
    phi = ImageMap({"L": g("L", exp=1)}, N)
    x = ConfElem.gen("L", 2, 1, 3, N)
    assert phi(x) == (g("L", exp=1).hat_partial() * LaurentElem.monomial(3, 2, N))


@pytest.mark.parametrize("v,weight", [("L", 2), ("Q3", Fraction(1, 2)), ("U", 1), ("G2", Fraction(3, 2)),
                                      ("T-1", 1)])
def test_primary_examples(v, weight, centreless):
    rep = check_primary(v, table=centreless)
    assert rep.passed
    assert centreless.bracket(v, "L").n_product(1) == g(v, weight)


def test_all_generators_primary_in_centreless_algebra(centreless):
    for v in V_GENS:
        assert check_primary(v, table=centreless).passed, v


def test_only_virasoro_anomaly_breaks_primarity_at_half(table_half):
    failing = {v: check_primary(v, table=table_half) for v in V_GENS}
    assert [v for v, rep in failing.items() if not rep.passed] == ["L"]
    assert failing["L"].failures[0].witness == ("L", 3)


def test_primary_rejects_centre(centreless):
    with pytest.raises(ValueError):
        check_primary("C", table=centreless)
