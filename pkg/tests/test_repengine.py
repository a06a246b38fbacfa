import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qflag.flagalg import FlagWeight, plucker_generators
from qflag.funalg import FunElem, matrix_coefficient, multiply, random_element, star, su2_generators
from qflag.repengine import checks
from qflag.repengine.fock import FockOp
from qflag.repengine.rank1 import (InternalError, derived_su2_relations, expansion_operator,
                                   phi_star_expand, pi_q_fock, pi_q_generator, rank1_table,
                                   relation_residual)
from qflag.repengine.soibelman import (RepSpec, TorusPoint, pi_w, pi_w_fock, pi_wt,
                                       rank_one_cross_check, tau_t, top_singular_values)
from qflag.rootsys import ConfigurationError, build_root_system
from qflag.uqmod import DomainError

Q = "1/2"
q = 0.5
A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
L = su2_generators(Q)


# -- rank one -------------------------------------------------------------------------------

def test_pi_q_formulas():
    N = 6
    j = np.arange(N)
    assert np.allclose(np.diag(pi_q_generator("-+", Q, N)), q ** j, atol=1e-15)
    assert np.allclose(np.diag(pi_q_generator("+-", Q, N)), -q ** (j + 1), atol=1e-15)
    pp = pi_q_generator("++", Q, N)
    mm = pi_q_generator("--", Q, N)
    assert not pp[:, 0].any()  # pi_q(L_{++}) e_0 = 0
    assert mm[1, 0] == pytest.approx(math.sqrt(1 - q ** 2), abs=1e-15)
    for k in range(1, N):
        assert pp[k - 1, k] == pytest.approx(math.sqrt(1 - q ** (2 * k)), abs=1e-15)
    with pytest.raises(ValueError):
        pi_q_generator("++", Q, 1)


def test_derived_relations_frozen():
    rels = derived_su2_relations(Q)
    assert len(rels) == 7
    # L_{++} L_{--} - q L_{+-} L_{-+} = 1, with q = 1/2
    target = {"++--": -1, "+--+": 0.5, "1": 1}
    assert any({k: float(v) for k, v in r.items()} == target for r in rels)


def test_derived_relations_hold_on_pi_q():
    for rel in derived_su2_relations(Q):
        assert relation_residual(rel, Q, 64) < 1e-10


def test_spin_corep_matches_direct_products():
    """Pi_1 from the Clebsch-Gordan route agrees with the matrix coefficient
    expansion through the generators."""
    R = A1
    M = 12
    tab = rank1_table(R, Q, (2,), 1, M)
    for u in range(3):
        for v in range(3):
            a = matrix_coefficient(R, Q, (2,), u, v)
            op = expansion_operator(phi_star_expand(a, 1), q, M)
            direct = tab.entries.get((u, v), FockOp.zero(M, 1))
            assert direct.crop_diff(op, M - 3) < 1e-13


def test_phi_star_examples():
    assert phi_star_expand(FunElem.one(A2, Q), 1) == {(0, 0, 0, "--"): 1}
    assert phi_star_expand(L["-+"], 1) == {(0, 1, 0, "--"): 1}
    exp = phi_star_expand(matrix_coefficient(A2, Q, (1, 0), 0, 1), 1)
    assert exp == {(0, 0, 1, "--"): 1}  # L_{+-}
    assert phi_star_expand(matrix_coefficient(A2, Q, (1, 0), 0, 2), 1) == {}


def test_rank_one_cross_check_a2():
    rng = np.random.default_rng(5)
    for i in (1, 2):
        a = random_element(A2, Q, [(1, 0), (1, 1)], rng, density=1.0)
        assert rank_one_cross_check(a, i, 8) < 1e-12


def test_phi_star_inconsistent_is_loud(monkeypatch):
    import qflag.repengine.rank1 as rank1
    monkeypatch.setattr(rank1, "_monomial_value", lambda *a: 0)
    with pytest.raises(InternalError):
        rank1.phi_star_expand(L["-+"], 1)


# -- tau_t, pi_w, pi_{w,t} ---------------------------------------------------------------------

def test_tau_t():
    one = FunElem.one(A2, Q)
    t = TorusPoint.from_phases([0.1, 0.3])
    assert tau_t(one, t) == pytest.approx(1)
    c = matrix_coefficient(A2, Q, (1, 1), 0, 0)
    assert tau_t(c, t) == pytest.approx(t.power((1, 1)))
    a = random_element(A2, Q, [(1, 0)], np.random.default_rng(0))
    b = random_element(A2, Q, [(0, 1)], np.random.default_rng(1))
    assert tau_t(multiply(a, b), t) == pytest.approx(tau_t(a, t) * tau_t(b, t))
    assert tau_t(a, TorusPoint.unit(2)) == pytest.approx(float(a(())))


def test_torus_validation():
    with pytest.raises(ConfigurationError):
        TorusPoint.make([2.0, 1.0])
    with pytest.raises(ConfigurationError):
        TorusPoint.from_phases([0.2, 0.1], S=[1])


def test_pi_w_examples():
    one = FunElem.one(A2, Q)
    assert np.allclose(pi_w(one, RepSpec(A2, (1, 2), 5)).dense(), np.eye(25))
    op = pi_w_fock(one, (), 4)
    assert complex(op.terms[()]) == 1
    m = pi_w(L["-+"], RepSpec(A1, (1,), 4)).dense()
    assert np.allclose(m, np.diag([1, 0.5, 0.25, 0.125]))
    with pytest.raises(DomainError):
        RepSpec(A2, (1, 1), 4)


def test_pi_w_rank_one_is_pi_q():
    for g in ("++", "+-", "-+", "--"):
        assert np.allclose(pi_w(L[g], RepSpec(A1, (1,), 10)).dense(), pi_q_generator(g, Q, 10),
                           atol=1e-15)


def test_pi_wt_examples():
    t = TorusPoint.from_phases([0.125])
    m = pi_wt(L["-+"], RepSpec(A1, (1,), 4, t)).dense()
    assert np.allclose(m, cmath.exp(0.25j * math.pi) * np.diag([1, 0.5, 0.25, 0.125]))
    a = random_element(A2, Q, [(1, 0), (1, 1)], np.random.default_rng(2))
    spec = RepSpec(A2, (2, 1), 6)
    assert np.allclose(pi_wt(a, spec).dense(), pi_w(a, spec).dense())
    # w = e: scalar a(1) t^mu for a of left weight mu
    c = matrix_coefficient(A2, Q, (1, 0), 1, 1)
    tt = TorusPoint.from_phases([0.2, 0.7])
    op = pi_w_fock(c, (), 2, {(1, 0): np.array([tt.power(mu) for mu in [(1, 0), (-1, 1), (0, -1)]])})
    assert complex(op.terms[()]) == pytest.approx(tt.power((-1, 1)))


def test_interior_stability_under_n():
    a = random_element(A2, Q, [(1, 0), (0, 1), (1, 1)], np.random.default_rng(4))
    m8 = pi_w(a, RepSpec(A2, (1, 2, 1), 8)).dense()
    m16 = pi_w(a, RepSpec(A2, (1, 2, 1), 16)).dense()
    idx = np.ravel_multi_index(np.indices((8, 8, 8)).reshape(3, -1), (16, 16, 16))
    assert np.max(np.abs(m16[np.ix_(idx, idx)] - m8)) == 0


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(1,), (2, 1), (1, 2, 1)]))
def test_homomorphism_and_star(seed, word):
    rng = np.random.default_rng(seed)
    a = random_element(A2, Q, [(1, 0), (0, 1)], rng)
    b = random_element(A2, Q, [(1, 0), (1, 1)], rng)
    t = TorusPoint.from_phases(rng.random(2))
    spec = RepSpec(A2, word, 6, t)
    assert checks.homomorphism_check(a, b, spec).passed
    assert checks.star_rep_check(a, spec).passed


def test_star_rep_rank_one_n64():
    for g in L.values():
        assert checks.star_rep_check(g, RepSpec(A1, (1,), 64)).passed


def test_singular_values_solver():
    rng = np.random.default_rng(0)
    a = random_element(A2, Q, [(1, 0), (1, 1)], rng)
    m = pi_w(a, RepSpec(A2, (1, 2), 9)).sparse()
    ref = np.linalg.svd(m.toarray(), compute_uv=False)[:10]
    assert np.allclose(top_singular_values(m, 10), ref, atol=1e-12)
    assert np.allclose(top_singular_values(m, 10, block_limit=5), ref, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 12), st.sampled_from([3, 40]))
def test_singular_values_property(seed, k, limit):
    """Blockwise values with Gershgorin pruning agree with a dense SVD.

    Values come from eigenvalues of m^dag m, so squares are compared: near zero
    a singular value only carries half the digits."""
    import scipy.sparse as sp
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 60))
    m = sp.random(n, n, density=0.06, random_state=rng, format="csr")
    m = m + 1j * sp.random(n, n, density=0.03, random_state=rng, format="csr")
    ref = np.zeros(k)
    sv = np.linalg.svd(m.toarray(), compute_uv=False)[:k]
    ref[:len(sv)] = sv
    got = top_singular_values(m, k, block_limit=limit)
    assert np.allclose(got ** 2, ref ** 2, atol=1e-12)


# -- verification campaigns ---------------------------------------------------------------------

def test_restriction_identity():
    rng = np.random.default_rng(1)
    x = checks.random_invariant_element(A2, [1], Q, rng)
    t = TorusPoint.from_phases([0.3, 0.8])
    for word in [(), (1,), (2,), (2, 1), (1, 2), (1, 2, 1)]:
        assert checks.restriction_identity_check(x, [1], word, t, 6).passed
    one = FunElem.one(A2, Q)
    assert checks.restriction_identity_check(one, [1], (1,), None, 6).passed
    # negative control: a coefficient that is not K_S invariant
    c = matrix_coefficient(A2, Q, (1, 1), 0, 0)
    assert not checks.restriction_identity_check(c, [1], (1,), None, 6).passed


def test_word_independence_small_and_controls():
    samples = checks.class_samples(A2, Q, 4)
    assert checks.reduced_word_independence(A2, (1,), (1,), samples, 8).passed
    with pytest.raises(DomainError):
        checks.reduced_word_independence(A2, (1, 2), (2, 1), samples, 8)
    with pytest.raises(DomainError):
        checks.reduced_word_independence(A2, (1, 1), (1, 1), samples, 8)
    control = matrix_coefficient(A2, Q, (1, 0), 0, 1)
    assert not checks.compare_spectra([control], (1,), (2,), 16).passed


def test_plucker_patterns():
    fw = FlagWeight.make(A2, [1], (0, 1))
    pats = {w: checks.pattern_string(checks.plucker_vanishing_pattern(w, fw, 8))
            for w in [(), (2,), (1, 2)]}
    assert pats == {(): "100", (2,): "110", (1, 2): "111"}
    assert checks.plucker_vanishing_pattern((2, 1), fw, 8) == (1, 1, 0)


def test_irreducibility_small():
    assert checks.irreducibility_diagnostic((), [L["-+"]], 4).passed
    assert checks.irreducibility_diagnostic((1,), list(L.values()), 12).passed
    # the diagonal generator alone is not irreducible
    assert not checks.irreducibility_diagnostic((1,), [L["-+"]], 12).passed


def test_commutant_dimension_reducible():
    a = np.diag([1.0, 2.0, 3.0])
    assert checks.commutant_dimension([a]) == 3
    b = np.roll(np.eye(3), 1, axis=0)
    assert checks.commutant_dimension([a, b]) == 1


def test_sup_norm_small():
    one = FunElem.one(A2, Q)
    tp = checks.torus_samples(A2, 2)
    rep = checks.sup_norm_vs_haar([one], [4, 8], tp)
    assert rep.passed and rep.rows[0]["haar_norm"] == 1
    rep = checks.sup_norm_vs_haar([L["-+"]], [8, 16], checks.torus_samples(A1, 2))
    assert rep.passed


def test_ssb_small():
    assert checks.verify_theorem_ss_b(A2, [1, 2], 4).passed
    rep = checks.verify_theorem_ss_b(A1, [], 6, per_coord=4)
    assert rep.passed


def test_truncated_op_serialisation():
    op = pi_w(L["-+"], RepSpec(A1, (1,), 3))
    blob = op.to_binary()
    assert blob[:8] == (3).to_bytes(4, "little") + (1).to_bytes(4, "little")
    vals = np.frombuffer(blob[8:], dtype="<f8").reshape(3, 3, 2)
    assert np.allclose(vals[..., 0], np.diag([1, 0.5, 0.25]))
    js = op.to_json()
    assert js["N"] == 3 and js["matrix"][1][1] == [0.5, 0.0]
