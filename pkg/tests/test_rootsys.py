from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qflag.rootsys import (ConfigurationError, build_root_system, coset_factorize,
                           element_from_word, is_reduced, length, minimal_coset_reps,
                           parabolic_subgroup, poincare_polynomial, poisson_subgroup_descriptor,
                           reduced_words, schubert_cells, supported_types, weyl_enumerate,
                           weyl_group)

TYPES = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 2), ("C", 3),
         ("D", 4), ("G", 2)]


def _subsets(r):
    return [[i for i in range(1, r + 1) if mask >> (i - 1) & 1] for mask in range(2 ** r)]


def _brute_group(R):
    """Independent oracle: closure of simple reflection matrices built from
    s_i(varpi_j) = varpi_j - delta_ij alpha_i."""
    r = R.rank
    cartan = np.array(R.cartan)
    gens = []
    for i in range(r):
        m = np.eye(r, dtype=int)
        m[:, i] -= cartan[i]
        gens.append(m)
    seen = {np.eye(r, dtype=int).tobytes(): 0}
    frontier = [np.eye(r, dtype=int)]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g @ s
                key = h.tobytes()
                if key not in seen:
                    seen[key] = seen[g.tobytes()] + 1
                    nxt.append(h)
        frontier = nxt
    return seen


# frozen from the brute-force oracle above
ORDERS = {"A1": 2, "A2": 6, "A3": 24, "A4": 120, "B2": 8, "B3": 48, "C2": 8, "C3": 48,
          "D4": 192, "G2": 12}
POS_ROOTS = {"A1": 1, "A2": 3, "A3": 6, "A4": 10, "B2": 4, "B3": 9, "C2": 4, "C3": 9, "D4": 12,
             "G2": 6}


@pytest.mark.parametrize("t,r", TYPES)
def test_group_order_and_roots_match_brute_force(t, r):
    R = build_root_system(t, r)
    brute = _brute_group(R)
    assert len(brute) == ORDERS[R.name] == len(weyl_enumerate(R))
    assert len(R.positive_roots) == POS_ROOTS[R.name]
    # BFS distance in the Cayley graph is the length
    lengths = sorted(brute.values())
    assert lengths == sorted(w.length for w in weyl_enumerate(R))


@pytest.mark.parametrize("t,r", TYPES)
def test_cartan_invariants(t, r):
    R = build_root_system(t, r)
    for i in range(r):
        assert R.cartan[i][i] == 2
        for j in range(r):
            if i != j:
                assert R.cartan[i][j] <= 0
            assert R.cartan[i][j] * R.gram[j][j] == 2 * R.gram[i][j]
        assert R.d[i] * 2 == R.gram[i][i]
    # (varpi_i, alpha_j^vee) = delta_ij
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            assert R.form(R.fundamental(i), R.alpha(j)) / R.d[j - 1] == (i == j)


def test_build_examples():
    assert len(build_root_system("A", 1).positive_roots) == 1
    assert build_root_system("A", 1).d == (1,)
    B2 = build_root_system("B", 2)
    assert set(B2.d) == {1, 2}
    assert ("E", 6) not in supported_types()
    with pytest.raises(ConfigurationError):
        build_root_system("E", 6)


def test_length_is_inversion_count_type_a():
    """W(A_3) = S_4: length equals the number of inversions."""
    R = build_root_system("A", 3)
    counts = {}
    for p in permutations(range(4)):
        inv = sum(1 for a in range(4) for b in range(a + 1, 4) if p[a] > p[b])
        counts[inv] = counts.get(inv, 0) + 1
    mahonian = [counts[k] for k in sorted(counts)]
    assert poincare_polynomial(weyl_enumerate(R)) == mahonian == [1, 3, 5, 6, 5, 3, 1]


@pytest.mark.parametrize("t,r", TYPES)
def test_length_counts_negated_positive_roots(t, r):
    R = build_root_system(t, r)
    pos = set(R.positive_roots)
    for w in weyl_enumerate(R):
        assert length(w) == w.length == sum(1 for b in pos if w.act(b) not in pos)


@pytest.mark.parametrize("t,r", [("A", 2), ("A", 3), ("B", 2), ("G", 2)])
def test_reduced_words_agree_and_length_changes_by_one(t, r):
    R = build_root_system(t, r)
    G = weyl_group(R)
    for w in weyl_enumerate(R):
        for word in reduced_words(w):
            assert element_from_word(R, word) == w
            assert is_reduced(R, word)
        for i in range(1, r + 1):
            assert abs((w * G.s(i)).length - w.length) == 1
        # canonical word is the lexicographically smallest reduced word
        assert tuple(w.word) == min(reduced_words(w))


@pytest.mark.parametrize("t,r", TYPES)
def test_parabolic_quotient_orders(t, r):
    R = build_root_system(t, r)
    W = weyl_enumerate(R)
    assert sum(poincare_polynomial(W)) == len(W)
    for S in _subsets(r):
        reps = minimal_coset_reps(R, S)
        WS = parabolic_subgroup(R, S)
        assert len(reps) * len(WS) == len(W)


@pytest.mark.parametrize("t,r", [("A", 2), ("A", 3), ("B", 2), ("G", 2)])
def test_minimal_reps_are_shortest_in_cosets(t, r):
    R = build_root_system(t, r)
    W = weyl_enumerate(R)
    for S in _subsets(r):
        WS = parabolic_subgroup(R, S)
        cosets = {}
        for w in W:
            key = frozenset((w * v).action for v in WS)
            cosets.setdefault(key, []).append(w)
        brute = {min(c, key=lambda x: x.length) for c in cosets.values()}
        assert set(minimal_coset_reps(R, S)) == brute


def test_minimal_reps_examples(A2):
    reps = minimal_coset_reps(A2, [1])
    assert sorted(w.length for w in reps) == [0, 1, 2]
    assert len(minimal_coset_reps(A2, [])) == 6
    assert [w.length for w in minimal_coset_reps(A2, [1, 2])] == [0]


@pytest.mark.parametrize("t,r", [("A", 2), ("A", 3), ("B", 2), ("G", 2)])
def test_coset_factorize_exhaustive(t, r):
    R = build_root_system(t, r)
    for S in _subsets(r):
        reps = set(minimal_coset_reps(R, S))
        WS = set(parabolic_subgroup(R, S))
        for w in weyl_enumerate(R):
            u, v = coset_factorize(w, S)
            assert u * v == w
            assert u.length + v.length == w.length
            assert u in reps and v in WS


def test_coset_factorize_examples(A2):
    s1 = element_from_word(A2, (1,))
    u, v = coset_factorize(s1, [1])
    assert u.length == 0 and v == s1
    for w in minimal_coset_reps(A2, [1]):
        u, v = coset_factorize(w, [1])
        assert u == w and v.length == 0


def test_schubert_cells_examples(A1, A2):
    assert len(schubert_cells(A2, [1])) == 3
    assert [c.dim for c in schubert_cells(A1, [])] == [0, 1]
    assert len(schubert_cells(A2, [1, 2])) == 1
    dims = [c.dim for c in schubert_cells(A2, [1])]
    assert dims == sorted(dims)


def test_poisson_descriptor(A2):
    d = poisson_subgroup_descriptor(A2, [1])
    assert d.center_dim == 1
    assert "K_1^(+-1)" in d.k_S0_generators and "K_2^(+-1)" not in d.k_S0_generators
    assert poisson_subgroup_descriptor(A2, [1, 2]).center_dim == 0
    full = poisson_subgroup_descriptor(A2, [])
    assert full.center_dim == 2 and full.R_S == ()
    assert len(d.to_json()["R_S_positive"]) == 1


def test_invalid_subset(A2):
    with pytest.raises(ConfigurationError):
        minimal_coset_reps(A2, [3])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3), max_size=8))
def test_word_property_a3(word):
    """Any word and the canonical word of its element act identically."""
    R = build_root_system("A", 3)
    w = element_from_word(R, tuple(word))
    assert element_from_word(R, w.word) == w
    assert w.length <= len(word)
    assert w.length % 2 == len(word) % 2


def test_weyl_element_json(A2):
    w = weyl_group(A2).longest
    js = w.to_json()
    assert js["length"] == 3 and js["word"] == [1, 2, 1]
