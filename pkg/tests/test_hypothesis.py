import math

import numpy as np
import pytest
from scipy.special import digamma, polygamma

from honeycomb.errors import InvalidArgument
from honeycomb.functionals import FunctionalKind, lambda1_disk
from honeycomb.hypothesis import (
    Exponent,
    InductionConfig,
    Verdict,
    chain_check,
    curve_check,
    digamma_g,
    digamma_sandwich_scan,
    h3prime_jensen_check,
    induction_bruteforce,
)

K = FunctionalKind
PI = math.pi


# ---------------------------------------------------------------- curves

@pytest.mark.parametrize("kind, beta", [(K.CHEEGER, 2 / 3), (K.CHEEGER, 2.0), (K.LOGCAP, -2.0), (K.PERIMETER, -2.0)])
def test_curves_pass(kind, beta):
    r = curve_check(kind, beta, 60, 0.01)
    assert r.verdict is Verdict.PASS
    assert r.monotone_margin > 0
    assert r.convexity_margin >= -1e-9


@pytest.mark.parametrize("kind, beta", [(K.CHEEGER, 2 / 3), (K.LOGCAP, -2.0)])
def test_curve_verdict_stable_under_refinement(kind, beta):
    assert curve_check(kind, beta, 20, 0.01).passed
    assert curve_check(kind, beta, 20, 0.001).passed


def test_curve_failure_detected():
    # a very negative power turns the capacity curve convex near t = 3
    r = curve_check(K.LOGCAP, -20.0, 20, 0.01)
    assert r.verdict is Verdict.FAIL
    assert r.fail_t == pytest.approx(3.01)
    assert r.convexity_margin < 0


def test_curve_lambda1_unsupported():
    r = curve_check(K.LAMBDA1, 1.0, 60, 0.01)
    assert r.verdict is Verdict.UNSUPPORTED
    assert "lambda1" in r.detail


def test_curve_bad_grid():
    with pytest.raises(InvalidArgument):
        curve_check(K.CHEEGER, 2 / 3, 6.0, 0.01)


def test_jensen_consistency():
    assert h3prime_jensen_check(K.CHEEGER, 2 / 3, 10_000, rng_seed=1)
    assert h3prime_jensen_check(K.PERIMETER, -2.0, 2_000, rng_seed=2)


# ---------------------------------------------------------------- digamma series

def oracle_g1(a):
    return 2 * (digamma(2 * a) + digamma(-2 * a) - digamma(a) - digamma(-a))


def oracle_g2(a):
    return 2 * (2 * polygamma(1, 2 * a) - 2 * polygamma(1, -2 * a) - polygamma(1, a) + polygamma(1, -a))


@pytest.mark.parametrize("a", [1e-3, 0.05, 0.1, 0.2, 1 / 3])
def test_digamma_series_against_special_functions(a):
    ev = digamma_g(a, 10 ** 5)
    lo, hi = ev.neg_g1_interval
    true1 = -oracle_g1(a)
    # the special-function oracle loses about 1e-16 / alpha to cancellation
    slack = 1e-15 / a
    assert lo <= true1 + slack and true1 <= hi + slack
    assert -ev.g2 <= -oracle_g2(a) * (1 + 1e-12)
    assert -oracle_g2(a) <= -ev.g2 + ev.g2_tail_bound + 1e-9


def test_digamma_one_third():
    a = 1 / 3
    ev = digamma_g(a, 10 ** 6)
    assert 13 * a * a < -ev.g1 < 36 * a * a
    assert -ev.g1 == pytest.approx(3.0, abs=1e-9)  # frozen oracle value


def test_digamma_second_derivative_bound():
    assert -digamma_g(0.1, 10 ** 5).g2 > 2.2


def test_digamma_small_alpha_direct_summation():
    a = 1e-4
    n = np.arange(1, 10 ** 7 + 1, dtype=float)
    direct = float(np.sum(12 * a * a * n / ((n * n - a * a) * (n * n - 4 * a * a))))
    ev = digamma_g(a, 10 ** 5)
    assert -ev.g1 == pytest.approx(direct, rel=1e-9)
    # leading behaviour 12 zeta(3) alpha^2
    assert -ev.g1 == pytest.approx(12 * 1.2020569031595942 * a * a, rel=1e-6)
    assert 13 * a * a < -ev.g1 < 36 * a * a


def test_tail_bound_properties():
    bounds = [digamma_g(1 / 3, t).tail_bound for t in (10, 100, 10 ** 4, 10 ** 5)]
    assert all(b >= 0 for b in bounds)
    assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))
    assert bounds[-1] <= 1e-10
    # partial sums only grow with more terms
    s = [-digamma_g(0.2, t).g1 for t in (10, 100, 1000)]
    assert s[0] < s[1] < s[2]


def test_digamma_range():
    with pytest.raises(InvalidArgument):
        digamma_g(0.34, 100)
    with pytest.raises(InvalidArgument):
        digamma_g(0.0, 100)


def test_sandwich_scan():
    rep = digamma_sandwich_scan(1e-3)
    assert rep.passed and rep.worst_margin > 0
    assert digamma_sandwich_scan(alphas=[1 / 3]).passed


def test_sandwich_negative_controls():
    # 50 alpha^2 claimed as the lower coefficient contradicts -g'(alpha) ~ 14.4 alpha^2
    assert not digamma_sandwich_scan(1e-3, lower=50.0).passed
    # an upper coefficient below the truth near alpha = 1/3 (where -g' = 27 alpha^2)
    assert not digamma_sandwich_scan(1e-3, upper=20.0).passed


# ---------------------------------------------------------------- induction

def test_config_defaults_and_validation():
    cfg = InductionConfig()
    assert cfg.a == pytest.approx(6.022 * PI) and cfg.b == pytest.approx(5.82 * PI)
    with pytest.raises(InvalidArgument):
        InductionConfig(n_max=6)
    with pytest.raises(InvalidArgument):
        InductionConfig(a=-1.0)


def test_specific_multisets():
    cfg = InductionConfig()
    rp = math.sqrt(PI)
    # {7, 5}
    lhs = math.sqrt(cfg.gamma_hat(7)) + math.sqrt(cfg.gamma_hat(5))
    assert lhs >= 2 * 2.433 * rp
    assert lhs / rp == pytest.approx(2.4124 + 2.4539, abs=2e-4)
    # {3, 9}
    assert math.sqrt(cfg.gamma_hat(3)) + math.sqrt(cfg.gamma_hat(9)) >= 2 * 2.433 * rp


@pytest.mark.parametrize("e", [Exponent.HALF, Exponent.ONE])
def test_induction_passes(e):
    rep = induction_bruteforce(InductionConfig(exponent=e))
    assert rep.passed and rep.counterexample is None
    assert rep.worst_slack >= -1e-9


def test_induction_negative_control():
    ball = 5.783 * PI
    rep = induction_bruteforce(InductionConfig(a=ball, b=ball))
    assert not rep.passed and rep.violation > 1e-9
    rep = induction_bruteforce(InductionConfig(a=lambda1_disk(), b=lambda1_disk()))
    assert not rep.passed


def test_chain_check():
    rep = chain_check()
    assert rep.passed
    assert rep.item("ball+3").slack == pytest.approx(0.231, abs=1e-9)
    assert rep.item("ball+4").slack == pytest.approx(0.044, abs=1e-9)
    assert rep.item("7+7+4").slack == pytest.approx(0.0318, abs=1e-9)
    assert rep.item("5+7").slack == pytest.approx(0.0003, abs=1e-9)
    assert all(i.true_slack >= i.slack - 1e-12 for i in rep.items)


def test_chain_with_hexagon_estimate():
    assert chain_check(lambda1_hexagon=18.5907).item("gamma(6)").holds
    assert not chain_check(lambda1_hexagon=18.7).item("gamma(6)").holds
