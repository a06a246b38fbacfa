import pytest

from qflag.flagalg import (ALGTHM_TAG, FlagWeight, _restrict, a_lambda_degree1, check_a0_proper,
                           factorized_components, generated_span, invariant_component,
                           legs_of, plucker_generators, reachable_algthm, verify_theorem_algthm,
                           verify_theorem_ss_a)
from qflag.funalg import FunElem, haar, left_action, multiply, star, su2_generators
from qflag.rootsys import ConfigurationError, build_root_system
from qflag.uqmod import DomainError

Q = "1/2"
A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)


def test_flag_weight_validation():
    FlagWeight.make(A2, [1], (0, 1))
    with pytest.raises(ConfigurationError):
        FlagWeight.make(A2, [1], (1, 1))
    with pytest.raises(ConfigurationError):
        FlagWeight.make(A2, [], (0, 1))
    assert FlagWeight.make(A2, [1], (0, 1)).dual == (1, 0)


def test_plucker_generators():
    hol, anti = plucker_generators(FlagWeight.make(A2, [1], (0, 1)), Q)
    assert len(hol) == len(anti) == 3
    assert all(f.support == [(0, 1)] for f in hol)
    assert [int(f(())) for f in hol] == [1, 0, 0]  # f(v_Lambda)
    # rank one: f_Lambda are c_{+,+} = L_{++} and c_{-,+} = L_{-+}
    hol1, _ = plucker_generators(FlagWeight.make(A1, [], (1,)), Q)
    L = su2_generators(Q)
    assert hol1 == [L["++"], L["-+"]]


def test_a_lambda_degree1():
    fw = FlagWeight.make(A2, [1], (0, 1))
    span = a_lambda_degree1(fw, Q)
    assert span.lams() == [(0, 0), (1, 1)]
    # explicit products agree with the vector-leg computation
    hol, anti = plucker_generators(fw, Q)
    prods = [multiply(f, g) for f in hol for g in anti]
    assert legs_of(prods).equals(span)
    # sum_f f f^* has a nonzero constant term
    total = FunElem.zero(A2, Q)
    for f, g in zip(hol, anti):
        total = total + multiply(f, g)
    assert haar(total) != 0
    # every product is killed by left X_1^{+-} (S = {1}) and has left weight 0
    for p in prods:
        assert left_action((("E", 0),), p).is_zero()
        assert left_action((("F", 0),), p).is_zero()
        assert left_action((("K", 1, 1),), p) == p


def test_invariant_component_examples():
    assert invariant_component(A2, (1, 0), [1], "K_S", Q).rank((1, 0)) == 0
    assert invariant_component(A2, (0, 0), [1], "K_S", Q).rank((0, 0)) == 1
    assert invariant_component(A2, (0, 0), [], "K_S0", Q).rank((0, 0)) == 1
    assert invariant_component(A2, (1, 1), [1], "K_S", Q).rank((1, 1)) == 8


def test_generated_span_degrees():
    fw = FlagWeight.make(A2, [1], (0, 1))
    gens = a_lambda_degree1(fw, Q)
    d0 = generated_span(gens, 0)
    assert d0.summary() == {(0, 0): 1}
    d1 = generated_span(gens, 1)
    assert d1.contains(gens) and d1.contains(d0)
    d2 = generated_span(gens, 2)
    for lam in d1.lams():
        assert d2.rank(lam) >= d1.rank(lam)
        inv = invariant_component(A2, lam, [1], "K_S", Q)
        assert inv.contains(_restrict(d2, lam))
        assert d2.rank(lam) <= inv.rank(lam)


@pytest.mark.parametrize("S,Lam", [([], (1,))])
def test_algthm_a1(S, Lam):
    rep = verify_theorem_algthm(FlagWeight.make(A1, S, Lam), 2, Q)
    assert rep.passed
    assert all(r["claim"] == ALGTHM_TAG for r in rep.rows)


def test_algthm_a2_ranks_frozen():
    """Ranks frozen from an independent brute-force product computation."""
    rep = verify_theorem_algthm(FlagWeight.make(A2, [], (1, 1)), 2, Q)
    assert rep.passed
    ranks = {tuple(r["lambda"]): r["rank_generated"] for r in rep.rows}
    assert ranks == {(0, 0): 1, (0, 3): 10, (1, 1): 16, (2, 2): 81, (3, 0): 10}
    assert rep.info["unreached"] == []


def test_algthm_a2_parabolic():
    rep = verify_theorem_algthm(FlagWeight.make(A2, [1], (0, 1)), 2, Q)
    assert rep.passed
    assert {tuple(r["lambda"]) for r in rep.rows} == set(reachable_algthm(
        FlagWeight.make(A2, [1], (0, 1)), 2))
    assert all(r["factorized_equal"] for r in rep.rows)


def test_brute_force_products_match_degree2():
    """Independent oracle: span of explicit FunElem products of degree 2."""
    fw = FlagWeight.make(A1, [], (1,))
    hol, anti = plucker_generators(fw, Q)
    deg1 = [multiply(f, g) for f in hol for g in anti]
    deg2 = [multiply(a, b) for a in deg1 for b in deg1]
    span = generated_span(a_lambda_degree1(fw, Q), 2)
    assert legs_of(deg1 + deg2 + [FunElem.one(A1, Q)]).equals(span)


def test_factorized_components():
    assert factorized_components(A2, [1], (0, 0), Q).summary() == {(0, 0): 1}
    fw = FlagWeight.make(A2, [1], (0, 1))
    assert factorized_components(A2, [1], (0, 1), Q).equals(a_lambda_degree1(fw, Q))
    with pytest.raises(DomainError):
        factorized_components(A2, [1], (1, 0), Q)
    for lam in [(0, 1), (0, 2)]:
        fac = factorized_components(A2, [1], lam, Q)
        for piece in fac.lams():
            assert invariant_component(A2, piece, [1], "K_S", Q).contains(_restrict(fac, piece))


def test_ss_a():
    assert verify_theorem_ss_a(A2, [1], 2, Q).passed
    assert verify_theorem_ss_a(A1, [], 2, Q).passed
    rep = verify_theorem_ss_a(A2, [1, 2], 0, Q)
    assert rep.passed and [r["lambda"] for r in rep.rows] == [[0, 0]]


def test_k_s_equals_weight_zero_slice():
    for lam in [(1, 1), (2, 2), (0, 3)]:
        ks = invariant_component(A2, lam, [1], "K_S", Q)
        ks0 = invariant_component(A2, lam, [1], "K_S0", Q)
        assert ks.leg_dim(lam) == ks0.leg_dim(lam, (0, 0))


def test_star_preserves_a_lambda():
    fw = FlagWeight.make(A2, [1], (0, 1))
    span = a_lambda_degree1(fw, Q)
    starred = legs_of([star(e) for e in span.elements()])
    assert span.equals(starred)


def test_a0_proper():
    rep = check_a0_proper(FlagWeight.make(A2, [1], (0, 1)), 2, Q)
    # C_q[U/K_S^0] at degree <= 2 only shows weights in Z.varpi_2 here
    assert rep.verdict == "NO-WEIGHT-WITNESS"
    assert check_a0_proper(FlagWeight.make(A2, [1], (0, 2)), 2, Q).verdict == "PROPER"
    assert check_a0_proper(FlagWeight.make(A2, [], (1, 1)), 2, Q).verdict == "PROPER"
    assert check_a0_proper(FlagWeight.make(A2, [1, 2], (0, 0)), 2, Q).verdict == "NOT-APPLICABLE"
    a1 = check_a0_proper(FlagWeight.make(A1, [], (1,)), 2, Q)
    assert a1.verdict == "NO-WEIGHT-WITNESS"
