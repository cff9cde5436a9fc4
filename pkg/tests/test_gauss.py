import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import gamma, zeta

from oracles import gauss_sum_naive
from powerparity.gauss import (
    STECHKIN_BOUND,
    TruncationCapError,
    gauss_data,
    gauss_multiplicativity_check,
    gauss_sum,
    gauss_sums_mod,
    lambda_small,
    lambda_upper,
    lemma4_bound,
    lemma4_bound_proof_form,
    lemma4_scan,
    reduce_index,
    stechkin_ratio,
    stechkin_scan,
    truncation_for_tol,
)


@settings(max_examples=60)
@given(st.integers(1, 6), st.integers(-50, 50), st.integers(1, 60))
def test_gauss_sum_matches_naive(k, a, b):
    assert abs(gauss_sum(k, a, b) - gauss_sum_naive(k, a, b)) < 1e-9 * b


def test_gauss_sums_mod_table():
    S = gauss_sums_mod(3, 14)
    for x in range(14):
        assert abs(S[x] - gauss_sum(3, x, 14)) < 1e-10
    with pytest.raises(ValueError):
        S[0] = 0


@pytest.mark.parametrize("p", [5, 13, 17, 29, 37, 41])
def test_quadratic_gauss_sum_p1mod4(p):
    assert abs(gauss_sum(2, 1, p) - math.sqrt(p)) < 1e-10


@pytest.mark.parametrize("p", [3, 7, 11, 19, 23, 31])
def test_quadratic_gauss_sum_p3mod4(p):
    assert abs(gauss_sum(2, 1, p) - 1j * math.sqrt(p)) < 1e-10


def test_trivial_modulus():
    assert gauss_sum(4, 0, 1) == 1


@settings(max_examples=60)
@given(st.integers(2, 5), st.integers(1, 40), st.integers(1, 80), st.integers(1, 60))
def test_multiplicativity(k, m, b, a):
    if math.gcd(a, b) != 1:
        return
    assert gauss_multiplicativity_check(k, m, a % b, b)


def test_stechkin_ratio_errors():
    with pytest.raises(ValueError):
        stechkin_ratio(2, 2, 4)
    with pytest.raises(ValueError):
        stechkin_ratio(1, 1, 4)


def test_stechkin_scan_thread_independent():
    one = stechkin_scan(4, 40, threads=1)
    two = stechkin_scan(4, 40, threads=2)
    assert one == two
    assert max(r[4] for r in one) <= STECHKIN_BOUND
    assert all(math.gcd(r[1], r[2]) == 1 for r in one)


@pytest.mark.parametrize("k", [2, 3, 5])
@pytest.mark.parametrize("tol", [1e-2, 1e-4])
def test_truncation_rule_is_minimal(k, tol):
    M = truncation_for_tol(k, tol)
    bound = lambda M: gamma(1 + 1 / k) * k * M ** (-1 / k)  # noqa: E731
    assert bound(M) <= tol * (1 + 1e-12)
    assert bound(M - 1) > tol * (1 - 1e-12)


def test_truncation_cap():
    with pytest.raises(TruncationCapError):
        truncation_for_tol(6, 1e-30)
    with pytest.raises(ValueError):
        truncation_for_tol(2, 0)


@pytest.mark.parametrize("k,a,b", [(2, 1, 3), (3, 2, 7), (4, 5, 12), (6, 1, 2), (2, 0, 1)])
@pytest.mark.parametrize("M", [1, 57, 5000, 123457])
def test_hurwitz_blocks_equal_direct_sum(k, a, b, M):
    d, _ = lambda_upper(k, a, b, M, method="direct")
    h, _ = lambda_upper(k, a, b, M, method="hurwitz")
    assert abs(d - h) < 1e-11 * max(1, abs(d))


@pytest.mark.parametrize("k", [2, 3, 4])
def test_lambda_01_limit(k):
    # S_k(m, 1) = 1, so Lambda_{0,1} = Gamma(1 + 1/k) zeta(1 + 1/k)
    exact = gamma(1 + 1 / k) * zeta(1 + 1 / k)
    for M in (10**3, 10**9, 10**30):
        val, err = lambda_upper(k, 0, 1, M)
        assert abs(val - exact) <= err
        assert abs(val.imag) < 1e-14


def test_lambda_errors():
    with pytest.raises(ValueError):
        lambda_upper(2, 2, 4, 10)
    with pytest.raises(ValueError):
        lambda_upper(2, 1, 3, 0)
    with pytest.raises(ValueError):
        lambda_upper(2, 1, 3, 10, method="fast")


def test_reduce_index():
    assert reduce_index(1, 12, 8) == (2, 3)
    assert reduce_index(3, 4, 4) == (0, 1)
    assert reduce_index(2, 3, 16) == (2, 3)


def test_lambda_small_combination():
    k, a, b, M = 2, 1, 12, 10**6
    lam, err = lambda_small(k, a, b, M)
    L0, e0 = lambda_upper(k, 1, 12, M)
    L1, e1 = lambda_upper(k, 2, 3, M)
    L2, e2 = lambda_upper(k, 1, 3, M)
    w = 2 ** (-3 / 2)
    assert abs(lam - (L0 + w * L1 - L2)) < 1e-14
    assert err == pytest.approx(e0 + w * e1 + e2)


def test_lemma4_forms():
    for k in (2, 3):
        for b in (2, 6, 30, 97):
            assert lemma4_bound_proof_form(k, b) <= lemma4_bound(k, b)
    with pytest.raises(ValueError):
        lemma4_bound(2, 1)


def test_lemma4_scan_small():
    rows = lemma4_scan(3, 20, tol=1e-4)
    assert all(r[3] + r[4] <= r[5] for r in rows)
    assert rows == lemma4_scan(3, 20, tol=1e-4, threads=2)


def test_gauss_data_report():
    d = gauss_data(2, 1, 5, M=1000).to_dict()
    assert d["M"] == "1000"
    assert d["abs_S"] == pytest.approx(math.sqrt(5))
