import json
import math
import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_eval
from ncrich.construct import (
    NonDiagonalImageError,
    SolveError,
    SubstitutionError,
    WeightError,
    WeightVector,
    build_substitution,
    choose_weights,
    kosher_circuits,
    leading_part,
    low_rank_witness,
    make_plan,
    realize,
    result_to_json,
    solve_general,
    solve_homogeneous,
    solve_multilinear,
    symbolic_diagonal,
    verify_json,
    verify_realization,
)
from ncrich.freealg import NcPoly, evaluate, parse
from ncrich.ring import CommPoly, RingMatrix, mu, nu, rank_exact

COMMUTATOR = parse("X1*X2 - X2*X1", 2)


def sym(s):
    return CommPoly.symbol(s)


# --- weights -------------------------------------------------------------------


class TestChooseWeights:
    def test_multilinear_four_variables(self):
        f = NcPoly(4, {tuple(p): 1 for p in permutations(range(1, 5))})
        w = choose_weights(f, "multilinear")
        assert w.q == (1, 1, 1, -3) and w.m_prime == 3 and w.pivot == 4

    def test_lcm_formula_square(self):
        w = choose_weights(parse("(X1*X2)^2", 2), "homogeneous", 2)
        assert w.q == (1, -1) and w.m_prime == 2
        d = (2, 2)
        assert sum(q * di for q, di in zip(w.q, d)) == 0

    def test_lcm_formula_uneven(self):
        # d = (1, 3): D = 1, L = lcm(3, 1) = 3, q_1 = 3, pivot descends by 1
        f = parse("X1*X2^3 + X2*X1*X2^2", 2)
        w = choose_weights(f, "homogeneous", 2)
        assert w.q == (3, -1) and w.m_prime == 3

    def test_general_mixed(self):
        w = choose_weights(parse("X1*X2*X3 + X1*X3", 3), "general", 3)
        assert w.m_prime == 2 and w.q == (1, 1, -2)

    def test_single_variable_multilinear(self):
        w = choose_weights(parse("X1", 1), "multilinear")
        assert w.m_prime == 0

    def test_pivot_must_occur(self):
        with pytest.raises(WeightError):
            choose_weights(parse("X1^2", 2), "homogeneous", 2)

    def test_multilinear_mode_rejects_squares(self):
        with pytest.raises(WeightError):
            choose_weights(parse("X1^2", 1), "multilinear")


class TestLeadingPart:
    def test_mixed_degrees(self):
        f = parse("X1*X2*X3 + X1*X3", 3)
        lp = leading_part(f, 3)
        assert lp.phi[(1, 2, 3)] == 2 and lp.phi[(1, 3)] == 1
        assert lp.f_bar == parse("X1*X2*X3", 3)
        assert lp.f_bar + lp.discarded == f

    def test_pivot_only_word(self):
        f = parse("X1*X2 + X2^2", 2)
        lp = leading_part(f, 2)
        assert lp.phi[(1, 2)] == 1
        assert lp.phi[(2, 2)] == 0  # no non-pivot letters
        assert lp.f_bar == parse("X1*X2", 2)
        assert lp.degenerate

    def test_pivot_absent_is_infinite(self):
        lp = leading_part(parse("X1", 2), 2)
        assert lp.phi[(1,)] == math.inf and lp.infinite


# --- substitutions -------------------------------------------------------------------


class TestBuildSubstitution:
    def test_product_of_two(self):
        f = parse("X1*X2", 2)
        s = build_substitution(f, choose_weights(f, "multilinear"), 3)
        x1, x2 = s.matrices
        assert x1.entries == {(1, 2): sym(mu(1, 1)), (2, 3): sym(mu(1, 2))}
        assert x2.entries == {(2, 1): sym(nu(1)), (3, 2): sym(nu(2))}

    def test_staircase_n9_m4(self):
        f = NcPoly(4, {(1, 2, 3, 4): 1})
        s = build_substitution(f, choose_weights(f, "multilinear"), 9)
        for i in (1, 2, 3):
            x = s.matrices[i - 1]
            assert set(x.entries) == {(j, j + 1) for j in range(1, 9)}
            assert x.graded_support() == {-1}
        drop = s.matrices[3]
        # arrows 4 -> 1, ..., 9 -> 6, all solve symbols
        assert set(drop.entries) == {(j, j - 3) for j in range(4, 10)}
        assert drop.graded_support() == {3}
        assert [drop[j + 3, j] for j in range(1, 7)] == [sym(nu(j)) for j in range(1, 7)]

    def test_square_of_product(self):
        f = parse("(X1*X2)^2", 2)
        s = build_substitution(f, choose_weights(f, "homogeneous", 2), 4)
        x1, x2 = s.matrices
        assert x1.entries == {(j, j + 1): sym(mu(1, j)) for j in range(1, 4)}
        assert x2.graded_support() == {1}
        assert s.nu_symbols == {1: nu(1), 2: nu(2)}
        assert x2[2, 1] == sym(nu(1)) and x2[3, 2] == sym(nu(2))

    def test_nu_occurs_once(self):
        f = parse("X1*X2*X3 - X3*X2*X1 + 2*X2*X1*X3", 3)
        s = build_substitution(f, choose_weights(f, "multilinear"), 7)
        pivot = s.matrices[s.weights.pivot - 1]
        for j, v in s.nu_symbols.items():
            assert sum(1 for e in pivot.entries.values() if e == sym(v)) == 1

    def test_n_too_small(self):
        f = NcPoly(3, {(1, 2, 3): 1})
        with pytest.raises(SubstitutionError):
            build_substitution(f, choose_weights(f, "multilinear"), 2)


def _partial_sum_oracle(q, n, j, order):
    idx = j
    for x in order:
        idx += q[x - 1]
        if not 1 <= idx <= n:
            return False
    return True


class TestKosher:
    def test_two_variables_start_at_one(self):
        f = COMMUTATOR
        w = WeightVector((1, -1), 1, 2)
        assert [o for o, _ in kosher_circuits(f, w, 2, 1)] == [(1, 2)]

    def test_last_position_needs_descent_first(self):
        f = NcPoly(3, {(1, 2, 3): 1})
        w = WeightVector((1, 1, -2), 2, 3)
        for order, path in kosher_circuits(f, w, 3, 3):
            assert order[0] == 3
        ascending = NcPoly(2, {(1, 2): 1})
        assert kosher_circuits(ascending, WeightVector((1, 1), 0, 2), 2, 2) == []

    def test_three_variables_brute_force(self):
        f = NcPoly(3, {(1, 2, 3): 1})
        q = (1, 1, -2)
        got = {o for o, _ in kosher_circuits(f, WeightVector(q, 2, 3), 3, 1)}
        expected = {p for p in permutations((1, 2, 3)) if _partial_sum_oracle(q, 3, 1, p)}
        assert got == expected == {(1, 2, 3), (2, 1, 3)}

    def test_paths(self):
        f = NcPoly(3, {(1, 2, 3): 1})
        circuits = dict(kosher_circuits(f, WeightVector((1, 1, -2), 2, 3), 4, 1))
        assert circuits[(1, 2, 3)] == (1, 2, 3)


class TestSymbolicDiagonal:
    def _sub(self, f, n, mode="multilinear", pivot=None):
        return build_substitution(f, choose_weights(f, mode, pivot), n)

    def test_product(self):
        f = parse("X1*X2", 2)
        d = symbolic_diagonal(f, self._sub(f, 3))
        assert d == [sym(mu(1, 1)) * sym(nu(1)), sym(mu(1, 2)) * sym(nu(2)), CommPoly()]

    def test_commutator(self):
        s = self._sub(COMMUTATOR, 3)
        d = symbolic_diagonal(COMMUTATOR, s)
        a1, a2, v1, v2 = sym(mu(1, 1)), sym(mu(1, 2)), sym(nu(1)), sym(nu(2))
        assert d == [a1 * v1, a2 * v2 - v1 * a1, -v2 * a2]
        assert sum(d, CommPoly()) == CommPoly()

    def test_square(self):
        f = parse("(X1*X2)^2", 2)
        d = symbolic_diagonal(f, self._sub(f, 3, "homogeneous", 2))
        assert d == [(sym(mu(1, 1)) * sym(nu(1))) ** 2, (sym(mu(1, 2)) * sym(mu(2, 3))) ** 2, CommPoly()]

    def test_circuits_equal_product(self):
        f = parse("2*X1*X2*X3 - X3*X1*X2 + X2*X3*X1 - 1/2*X3*X2*X1", 3)
        s = self._sub(f, 6)
        assert symbolic_diagonal(f, s, "circuits") == symbolic_diagonal(f, s, "product")

    def test_non_diagonal_image_detected(self):
        s = build_substitution(parse("X1*X2", 2), WeightVector((1, -1), 1, 2), 3)
        # one stray word ascends, the other descends: two-sided image
        with pytest.raises(NonDiagonalImageError):
            symbolic_diagonal(parse("X1*X2 + X1 + X2", 2), s, "product")
        # a balanced polynomial must give a diagonal image; X1 alone breaks that only on one side
        assert symbolic_diagonal(parse("X1*X2 + X1", 2), s, "product")[0] == sym(mu(1, 1)) * sym(nu(1))


# --- solvers ---------------------------------------------------------------------------


class TestMultilinear:
    def test_unit_mu_values(self):
        f = parse("X1*X2", 2)
        r = solve_multilinear(f, 3, [5, 7], mu=1)
        assert r.value == RingMatrix.diag([5, 7, 0])
        assert r.nu_values == {1: 5, 2: 7}

    def test_commutator_trace(self):
        r = solve_multilinear(COMMUTATOR, 5, [1, 2, 3, 4], seed=3)
        assert r.value == RingMatrix.diag([1, 2, 3, 4, -10])

    def test_single_variable(self):
        r = solve_multilinear(parse("X1", 1), 4, [9, 8, 7, 6])
        assert r.m_prime == 0
        assert r.matrices[0] == RingMatrix.diag([9, 8, 7, 6])

    def test_wrong_target_count(self):
        with pytest.raises(ValueError):
            solve_multilinear(COMMUTATOR, 5, [1, 2])

    def test_zero_polynomial(self):
        with pytest.raises(ValueError):
            solve_multilinear(NcPoly(2), 4, [1, 2, 3])

    def test_dense_oracle(self):
        f = parse("X1*X2*X3 - 2*X3*X1*X2 + X2*X1*X3", 3)
        r = solve_multilinear(f, 6, [1, -2, Fraction(3, 5), 0], seed=11)
        dense = [a.to_dense() for a in r.matrices]
        assert dense_eval(f, dense) == r.value.to_dense()
        assert r.value.is_diagonal()
        assert r.value.diagonal()[:4] == [1, -2, Fraction(3, 5), 0]

    def test_vanishing_lead_resampled(self):
        # mu(1,1) = 0 kills the leading coefficient at position 1; it must be resampled
        f = parse("X1*X2", 2)
        r = solve_multilinear(f, 3, [5, 7], mu={mu(1, 1): 0, mu(1, 2): 1})
        assert r.value.diagonal()[:2] == [5, 7]


class TestHomogeneous:
    def test_perfect_squares_exact(self):
        f = parse("(X1*X2)^2", 2)
        r = solve_homogeneous(f, 4, [4, 9], pivot=2, mu=1)
        assert r.exact
        assert r.nu_values == {1: 2, 2: 3}
        assert r.value.diagonal()[:2] == [4, 9]
        assert r.value.is_diagonal()

    def test_square_root_numeric(self):
        f = parse("(X1*X2)^2", 2)
        r = solve_homogeneous(f, 4, [2, 3], pivot=2, precision=256)
        assert r.ring == "complex"
        assert r.max_residual <= 1e-20
        assert verify_realization(f, r).ok

    def test_degree_one_matches_multilinear(self):
        f = parse("X1*X2", 2)
        a = solve_homogeneous(f, 4, [1, 2, 3], pivot=2, seed=5)
        b = solve_multilinear(f, 4, [1, 2, 3], seed=5)
        assert a.exact and a.value == b.value
        assert set(a.root_degrees.values()) == {1}

    def test_root_degrees_recorded(self):
        f = parse("(X1*X2)^2", 2)
        r = solve_homogeneous(f, 5, [1, 4, 9], pivot=2)
        assert set(r.root_degrees.values()) == {2}


class TestGeneral:
    F = parse("X1*X2*X3 + X1*X3", 3)

    def test_triangular_with_prefix(self):
        r = solve_general(self.F, 5, [1, 2, 3], seed=2)
        side = r.value.triangular_side()
        assert side in ("upper", "lower")
        assert r.value.diagonal()[:3] == [1, 2, 3]
        f_bar = parse("X1*X2*X3", 3)
        bar_value = evaluate(f_bar, r.matrices)
        assert bar_value.diagonal() == r.value.diagonal()
        rest = r.value - bar_value
        # the discarded word only contributes strictly off the diagonal
        assert rest.nnz() > 0 and 0 not in rest.graded_support()

    def test_doubling_trick(self):
        f = parse("X2^2 + 5", 2)
        r = solve_general(f, 4, [6, 7, 8])
        assert r.weights.doubled and r.mode == "general-doubled"
        assert verify_realization(f, r).prefix_match
        shifted = evaluate(parse("X2^2", 2), r.matrices)
        for a, b in zip(r.value.diagonal(), shifted.diagonal()):
            assert abs(a - b - 5) < 1e-40

    def test_constant_term_included_in_targets(self):
        f = parse("X1*X2*X3 + X1*X3 + 2", 3)
        r = solve_general(f, 5, [1, 2, 3])
        assert r.value.diagonal()[:3] == [1, 2, 3]
        assert r.value.diagonal()[3:] == [2, 2]

    def test_no_usable_pivot(self):
        with pytest.raises(SolveError):
            make_plan(parse("X1*X2 + X3*X4", 4), "general", 6)

    def test_pivot_fallback(self):
        # X2 is absent from the second word, X1 occurs in every word
        f = parse("X1*X2 + X1^2*X1", 2)
        plan = make_plan(f, "general", 5)
        assert plan.weights.pivot == 1


class TestWindowOffset:
    def test_dipping_word_is_moved_to_the_front(self):
        # the path of X1*X2*X1 dips one step below its start, so entry (1,1) of the
        # graded image is always zero; a similarity brings the solved window forward
        f = parse("X1*X2*X1", 2)
        r = realize(f, 5, [1, 2, 3])
        assert r.offset == 0
        assert r.value == RingMatrix.diag([1, 2, 3, 0, 0])
        assert verify_realization(f, r).ok

    def test_general_keeps_window_when_similarity_breaks_triangularity(self):
        f = parse("X1*X2*X1*X1 + X1*X2*X1", 2)
        r = realize(f, 7, [1, 2, 3, 4], mode="general")
        assert r.value.triangular_side() in ("upper", "lower")
        assert r.value.diagonal()[r.offset : r.offset + 4] == [1, 2, 3, 4]
        rep = verify_realization(f, r)
        assert rep.ok and rep.leading_match
        data = json.loads(json.dumps(result_to_json(r)))
        assert data["offset"] == r.offset and verify_json(data).ok


class TestWitness:
    def test_commutator(self):
        r = low_rank_witness(COMMUTATOR, 6)
        assert rank_exact(evaluate(COMMUTATOR, r.matrices)) <= 1

    def test_single_variable(self):
        f = parse("X1", 1)
        r = low_rank_witness(f, 5)
        assert r.value.nnz() == 0 and r.rank == 0

    def test_square(self):
        f = parse("(X1*X2)^2", 2)
        r = low_rank_witness(f, 6)
        assert r.m_prime == 2
        assert rank_exact(evaluate(f, r.matrices)) <= 2

    def test_constant_term_requires_shift(self):
        f = parse("X1*X2 - X2*X1 + 1", 2)
        with pytest.raises(ValueError):
            low_rank_witness(f, 4)
        r = low_rank_witness(f, 4, shift=True)
        assert r.rank <= r.m_prime

    def test_general_uses_diagonal_restriction(self):
        f = parse("X1*X2*X3 + X1*X3", 3)
        r = low_rank_witness(f, 8)
        value = evaluate(f, r.matrices)
        assert value.is_diagonal()
        assert rank_exact(value) <= r.m_prime


class TestVerify:
    def test_exact_multilinear(self):
        r = solve_multilinear(COMMUTATOR, 4, [1, 2, 3])
        rep = verify_realization(COMMUTATOR, r)
        assert rep.diagonal and rep.residual == 0 and rep.prefix_match and rep.ok

    def test_numeric_homogeneous_doubled_precision(self):
        f = parse("(X1*X2)^2", 2)
        r = solve_homogeneous(f, 5, [2, 3, 5], pivot=2)
        rep = verify_realization(f, r)
        assert rep.residual <= 1e-20 and rep.ok

    def test_tampered_entry(self):
        r = solve_multilinear(COMMUTATOR, 4, [1, 2, 3])
        a = r.matrices[0]
        (i, j), v = next(iter(sorted(a.entries.items())))
        r.matrices = (RingMatrix(a.n, {**a.entries, (i, j): v + 1}), r.matrices[1])
        assert not verify_realization(COMMUTATOR, r).prefix_match

    def test_json_certificate_round_trip(self):
        r = solve_homogeneous(parse("(X1*X2)^2", 2), 4, [2, 3], pivot=2)
        data = json.loads(json.dumps(result_to_json(r)))
        assert verify_json(data).ok
        exact = json.loads(json.dumps(result_to_json(solve_general(TestGeneral.F, 6, [1, 2, 3, 4]))))
        assert verify_json(exact).ok
        exact["matrices"][0]["entries"][0][2] = "12345"
        assert not verify_json(exact).ok


# --- invariants ----------------------------------------------------------------------


@st.composite
def multilinear_polys(draw, max_m=4):
    m = draw(st.integers(1, max_m))
    perms = list(permutations(range(1, m + 1)))
    coeffs = draw(st.lists(st.integers(-5, 5), min_size=len(perms), max_size=len(perms)))
    anchor = draw(st.sampled_from(perms))
    terms = dict(zip(perms, coeffs))
    terms[anchor] = terms[anchor] or 1
    return NcPoly(m, terms)


@settings(max_examples=40, deadline=None)
@given(multilinear_polys(3), st.integers(0, 3), st.integers(0, 10**6))
def test_circuits_match_product(f, extra, seed):
    n = max(f.m, 1) + extra
    s = build_substitution(f, choose_weights(f, "multilinear"), n)
    assert symbolic_diagonal(f, s, "circuits") == symbolic_diagonal(f, s, "product")


@settings(max_examples=30, deadline=None)
@given(multilinear_polys(4), st.integers(0, 3), st.integers(0, 10**6), st.data())
def test_multilinear_exactness(f, extra, seed, data):
    n = f.m + extra
    k = n - f.m + 1
    targets = data.draw(st.lists(st.fractions(-20, 20, max_denominator=9), min_size=k, max_size=k))
    r = solve_multilinear(f, n, targets, seed=seed)
    value = evaluate(f, r.matrices)
    assert value.is_diagonal()
    assert value.diagonal()[:k] == [Fraction(t) for t in targets]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["(X1*X2)^2", "X1*X2^2*X1", "X1^2*X2 - X2*X1^2 + 3*X1*X2*X1", "X1*X2*X3*X1 - X2*X1*X1*X3"]), st.integers(0, 3))
def test_zero_graded_degree_is_diagonal(text, extra):
    f = parse(text, 3)
    w = choose_weights(f, "homogeneous", max(x for word in f.words() for x in word))
    s = build_substitution(f, w, w.m_prime + 1 + extra)
    assert evaluate(f, s.matrices).graded_support() <= {0}


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["X1*X2*X3 + X1*X3", "X1*X2 + X2", "X1^2*X2 + X1*X2 - X2*X1", "X1*X3*X2*X3 + X2*X3 + X1^2*X3"]), st.integers(0, 2), st.integers(0, 1000))
def test_general_image_is_one_sided(text, extra, seed):
    f = parse(text, 3)
    plan = make_plan(f, "general", 6 + extra)
    r = realize(f, 6 + extra, [1] * plan.substitution.targets, mode="general", seed=seed)
    assert r.value.triangular_side() in ("upper", "lower", "diagonal")
    if not r.weights.doubled:
        f_bar = leading_part(f, r.weights.pivot).f_bar
        assert evaluate(f_bar, r.matrices).diagonal() == r.value.diagonal()


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**6))
def test_commutator_trace_conservation(n, seed):
    rng = random.Random(seed)
    targets = [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(n - 1)]
    r = solve_multilinear(COMMUTATOR, n, targets, seed=seed)
    assert sum(r.value.diagonal()) == 0


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["X1*X2 - X2*X1", "(X1*X2)^2", "X1*X2*X3 + X1*X3", "X1", "X1*X2*X1"]), st.integers(4, 9))
def test_witness_rank_bound(text, n):
    f = parse(text, 3)
    r = low_rank_witness(f, n)
    assert rank_exact(evaluate(f, r.matrices)) <= r.m_prime


@settings(max_examples=15, deadline=None)
@given(st.lists(st.fractions(-9, 9, max_denominator=4), min_size=1, max_size=7))
def test_single_variable_verbatim(targets):
    r = solve_multilinear(parse("X1", 1), len(targets), targets)
    assert r.matrices[0] == RingMatrix.diag(targets)


def test_same_seed_same_certificate():
    f = parse("(X1*X2)^2", 2)
    a = json.dumps(result_to_json(solve_homogeneous(f, 5, [2, 3, 5], pivot=2, seed=9)))
    b = json.dumps(result_to_json(solve_homogeneous(f, 5, [2, 3, 5], pivot=2, seed=9)))
    assert a == b
