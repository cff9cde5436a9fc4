import cmath
import math

import numpy as np
import pytest

from powerparity.gauss import lambda_small, lambda_upper, truncation_for_tol
from powerparity.wright import (
    DivergentProductError,
    G_constant,
    G_direct,
    G_via_transform,
    H_direct,
    H_via_transform,
    P_ab,
    P_tail_envelope,
    TransformEvaluation,
    choose_L,
    least_power_multiple,
    least_square_multiple,
    log_P_ab,
    mu,
    wright_check,
    wright_constants,
)

K2_PAIRS = [(0, 1), (1, 2), (1, 3), (2, 3), (1, 4), (3, 4)]


def test_least_square_multiple_bruteforce():
    for b in range(1, 10_001):
        x = np.arange(1, b + 1, dtype=np.int64)
        brute = int(x[(x * x) % b == 0][0])
        assert least_square_multiple(b) == brute


@pytest.mark.parametrize("k", [3, 4, 5])
def test_least_power_multiple_bruteforce(k):
    for b in range(1, 600):
        brute = next(x for x in range(1, b + 1) if pow(x, k, b) == 0)
        assert least_power_multiple(b, k) == brute


def test_constants_examples():
    for k in (2, 3, 4):
        c = wright_constants(k, 0, 1)
        assert (c.b1, c.b2, c.d, c.omega) == (1, 1, (0,), 1)
        assert c.C == pytest.approx((1 / (2 * math.pi)) ** (k / 2))
    c = wright_constants(2, 1, 4)
    assert (c.b1, c.b2) == (2, 2)
    assert c.d == tuple((h * h) % 4 for h in range(1, 5))
    for a, b in K2_PAIRS:
        c = wright_constants(2, a, b)
        assert c.omega == 1 and c.j == 0
    # j(3) = 3! zeta(4) / (2 pi)^4 = 1/240
    assert wright_constants(3, 1, 2).j == pytest.approx(1 / 240, rel=1e-14)


def test_constants_invariants():
    for k in (2, 3, 4):
        for b in range(1, 40):
            for a in range(b):
                if math.gcd(a, b) != 1:
                    continue
                c = wright_constants(k, a, b)
                assert c.b1 * c.b2 == b and (c.b1**k) % b == 0
                assert all((a * h**k - c.d_h(h)) % b == 0 for h in range(1, b + 1))
                if k % 2 == 1:
                    assert abs(abs(c.omega) - 1) < 1e-12


def test_constants_errors():
    with pytest.raises(ValueError):
        wright_constants(2, 2, 4)
    with pytest.raises(ValueError):
        wright_constants(2, 5, 4)
    with pytest.raises(ValueError):
        wright_constants(1, 0, 1)


def test_mu_examples():
    c = wright_constants(2, 1, 4)  # d = (1, 0, 1, 0)
    assert mu(1, 1, c) == 0.25
    assert mu(1, 2, c) == 0.75
    assert mu(2, 1, c) == mu(2, 2, c) == 1.0
    with pytest.raises(ValueError):
        mu(0, 1, c)
    with pytest.raises(ValueError):
        mu(1, 3, c)


@pytest.mark.parametrize("a,b", K2_PAIRS)
@pytest.mark.parametrize("tau", [0.15, 0.25])
def test_transform_matches_series_k2(a, b, tau):
    assert wright_check(2, a, b, tau).residual < 1e-6


@pytest.mark.parametrize("a,b", [(0, 1), (1, 2)])
@pytest.mark.parametrize("tau", [0.15, 0.25])
def test_transform_matches_series_k3(a, b, tau):
    assert wright_check(3, a, b, tau).residual < 1e-6


@pytest.mark.parametrize("k,a,b", [(2, 1, 5), (2, 3, 8), (4, 1, 3), (4, 1, 2)])
def test_transform_further_points(k, a, b):
    assert wright_check(k, a, b, complex(0.2, 0.05)).residual < 1e-6


def test_odd_k_b3_report(capsys):
    # report-only: the k-th power reading of d_h and b1 is compared with the square reading
    for a in (1, 2):
        power = wright_check(3, a, 3, 0.2).residual
        square = wright_check(3, a, 3, 0.2, root_power=2).residual
        print(f"k=3 a={a} b=3: k-th power residual {power:.3e}, square residual {square:.3e}")
    assert math.isfinite(power) and math.isfinite(square)


def test_P_ab_rearrangement_example():
    k, tau = 2, 0.2
    c = wright_constants(k, 0, 1)
    M = truncation_for_tol(k, 1e-12 * tau**0.5)
    Lam, _ = lambda_upper(k, 0, 1, M)
    target = H_direct(k, cmath.exp(-tau)) / (c.C * math.sqrt(tau) * cmath.exp(Lam / tau**0.5))
    assert abs(P_ab(k, 0, 1, tau, 50) - target) < 1e-9


@pytest.mark.parametrize("k,a,b,tau", [(2, 1, 3, 0.15), (3, 1, 2, 0.25), (2, 3, 4, 0.3 + 0.1j)])
def test_P_truncation_self_consistency(k, a, b, tau):
    c = wright_constants(k, a, b)
    for L in (2, 5, 20):
        gap = abs(log_P_ab(k, a, b, tau, 2 * L) - log_P_ab(k, a, b, tau, L))
        assert gap <= P_tail_envelope(c, tau, L)


def test_choose_L_meets_tol():
    c = wright_constants(2, 1, 3)
    L = choose_L(c, 0.2, 1e-12)
    assert P_tail_envelope(c, 0.2, L) <= 1e-12 < P_tail_envelope(c, 0.2, L - 1)


def test_domain_errors():
    with pytest.raises(ValueError):
        log_P_ab(2, 0, 1, -0.1, 10)
    with pytest.raises(ValueError):
        log_P_ab(2, 0, 1, 0.1, 0)
    with pytest.raises(DivergentProductError):
        choose_L(wright_constants(2, 1, 3), 1e-9 + 1j, 1e-12)
    with pytest.raises(ValueError):
        H_direct(2, 1.0)
    with pytest.raises(ValueError):
        TransformEvaluation(2, 0, 1, 0j, 1, 1, 0j, 0j, 0.0)


def test_H_direct_basics():
    assert H_direct(2, 0) == 1
    q = math.exp(-1)
    prod = 1.0
    for n in range(1, 50):
        prod /= 1 - q ** (n * n)
    assert abs(H_direct(2, q) - prod) < 1e-14 * prod


def test_H_via_transform_complex_tau():
    tau = 0.2 + 0.15j
    q = cmath.exp(2j * math.pi / 3 - tau)
    direct = H_direct(2, q)
    assert abs(H_via_transform(2, 1, 3, tau) - direct) < 1e-8 * abs(direct)


@pytest.mark.parametrize("k,a,b", [(2, 0, 1), (2, 1, 3), (2, 1, 4), (3, 0, 1), (3, 1, 2)])
@pytest.mark.parametrize("tau", [0.15, 0.3])
def test_G_via_transform_matches_series(k, a, b, tau):
    q = cmath.exp(2j * math.pi * a / b - tau)
    direct = G_direct(k, q)
    assert abs(G_via_transform(k, a, b, tau) - direct) < 1e-5 * abs(direct)


def test_G_large_tau_tends_to_one():
    assert abs(G_via_transform(2, 0, 1, 25.0) - 1) < 1e-8
    assert abs(G_direct(2, math.exp(-25.0)) - 1) < 1e-8


@pytest.mark.parametrize("k", [2, 3, 4])
def test_G_constant_at_zero(k):
    assert G_constant(k, 0, 1) == pytest.approx(2 ** (-(k - 1) / 2))


@pytest.mark.parametrize("k,a,b,tau", [(2, 0, 1, 0.05), (3, 0, 1, 0.001), (2, 1, 2, 0.05)])
def test_G_exponent_structure(k, a, b, tau):
    # once P-factors are negligible, G = const * e^{j tau} * exp(lambda_{a,b} / tau^{1/k})
    c = wright_constants(k, a, b)
    lam, _ = lambda_small(k, a, b, truncation_for_tol(k, 1e-13))
    model = G_constant(k, a, b) * cmath.exp(c.j * tau + lam / tau ** (1 / k))
    assert abs(G_via_transform(k, a, b, tau) / model - 1) < 1e-6


@pytest.mark.parametrize("k", [2, 4])
@pytest.mark.parametrize("y", [0.1, 0.02])
def test_even_k_small_y_residual_is_P_correction(k, y):
    # for even k and a/b = 0/1 the transform gives log G = main term + P corrections exactly
    from powerparity.asymptotics import log_Gk_main, log_Gk_series

    c = wright_constants(k, 0, 1)
    corr = sum(
        w * log_P_ab(k, 0, 1, t, choose_L(c, t, 1e-15))
        for w, t in ((1, y), (1, 2 ** (k + 1) * y), (-2, 2**k * y))
    )
    residual = float(log_Gk_series(k, y)) - log_Gk_main(k, y).real
    assert abs(residual - corr) < 1e-12
