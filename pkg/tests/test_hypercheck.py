"""Semigroup conditions, the lemma, entropy inequalities, and the scanner."""

from __future__ import annotations

import math

import numpy as np
import pytest

from spherehc import hypercheck, norms
from spherehc.hypercheck import (
    ExponentPair,
    NonnegativityError,
    RHS_BECKNER,
    RHS_SQRT_EIGENVALUE,
    ZonalPolynomial,
    beckner_constant,
    count1_check,
    counterexample_scan,
    eigenvalue_sqrt_laplacian,
    entropy_functional,
    h_function,
    heat_condition,
    hermite_bound_check,
    hermite_growth_rate,
    lemma_check,
    lemma_table,
    logsob_check,
    perturbative_necessity,
    poisson_condition_ii,
    poisson_semigroup_apply,
    random_zonal_polynomial,
    utol1_check,
)
from spherehc.norms import SphereParams, sphere_l2_norm_closed
from spherehc.verdict import FAILS, HOLDS, INCONCLUSIVE, Verdict

from oracles import hermite_fourth_moment


# ----------------------------------------------------------------- spectrum

def test_eigenvalue_sqrt_laplacian():
    assert eigenvalue_sqrt_laplacian(9, 0) == 0.0
    assert eigenvalue_sqrt_laplacian(7, 1) == pytest.approx(math.sqrt(7), rel=1e-15)
    assert eigenvalue_sqrt_laplacian(13, 7) == pytest.approx(math.sqrt(133), rel=1e-15)


def test_exponent_pair():
    pair = ExponentPair(2, 4)
    assert pair.t_star(4) == pytest.approx(math.log(3) / 4, rel=1e-15)
    assert math.exp(-2 * pair.t_star(9) * 3) == pytest.approx(1 / 3, rel=1e-13)
    with pytest.raises(ValueError):
        ExponentPair(1.0, 2.0)
    with pytest.raises(ValueError):
        ExponentPair(3.0, 2.0)


# ---------------------------------------------------------------- semigroup

def test_semigroup_identity_and_multiplier():
    g = ZonalPolynomial(5, (0.3, -0.7, 0.0, 0.2))
    same = poisson_semigroup_apply(g, 0.0)
    assert same.coeffs == g.coeffs
    one = poisson_semigroup_apply(ZonalPolynomial(9, (0.0, 1.0)), 0.25)
    assert one.coeffs[1] == pytest.approx(math.exp(-0.25 * math.sqrt(9)), rel=1e-15)
    const = poisson_semigroup_apply(ZonalPolynomial(9, (2.5,)), 3.0)
    assert const.coeffs == (2.5,)


def test_semigroup_law():
    g = ZonalPolynomial(4, (1.0, 0.5, -0.25, 0.125, 0.3))
    lhs = poisson_semigroup_apply(poisson_semigroup_apply(g, 0.3), 0.9)
    rhs = poisson_semigroup_apply(g, 1.2)
    for a, b in zip(lhs.coeffs, rhs.coeffs):
        assert a == pytest.approx(b, rel=1e-12)


def test_semigroup_strictly_contracts_nonconstant_modes():
    g = ZonalPolynomial(3, (1.0, 0.5, 0.5))
    out = poisson_semigroup_apply(g, 0.1)
    assert out.coeffs[0] == 1.0
    assert all(abs(out.coeffs[k]) < abs(g.coeffs[k]) for k in (1, 2))


def test_lp_contraction_property():
    # ~10^3 random nonnegative zonal polynomials across the (p, t) combinations
    rng = np.random.default_rng(20240817)
    combos = [(p, t) for p in (1.5, 2.0, 3.0) for t in (0.1, 1.0)]
    for trial in range(1002):
        n = 2 if trial % 2 == 0 else 3
        p, t = combos[trial % len(combos)]
        g = random_zonal_polynomial(n, 6, rng)
        before = norms.zonal_lp_norm(SphereParams(n), g.coeffs, p, tol=1e-10)
        after = norms.zonal_lp_norm(
            SphereParams(n), poisson_semigroup_apply(g, t).coeffs, p, tol=1e-10
        )
        assert after.value <= before.value * (1 + 1e-9)


def test_zonal_polynomial_validation():
    with pytest.raises(ValueError):
        ZonalPolynomial(3, (0.0, 0.0))
    with pytest.raises(ValueError):
        ZonalPolynomial(0, (1.0,))


# --------------------------------------------------------- closed conditions

def test_heat_condition_cases():
    assert heat_condition(3, 2, 4, 10.0).status == HOLDS
    assert heat_condition(3, 2, 4, 0.0).status == FAILS
    boundary = heat_condition(1, 2, 4, math.log(math.sqrt(3)))
    assert boundary.status == HOLDS
    assert abs(boundary.margin) < 1e-15


def test_poisson_condition_boundary():
    pair = ExponentPair(2, 4)
    for n in (1, 4, 9, 13):
        t = pair.t_star(n)
        at = poisson_condition_ii(n, 2, 4, t)
        assert at.status == HOLDS and abs(at.margin) < 1e-14
        assert poisson_condition_ii(n, 2, 4, t * 1.01).status == HOLDS
        assert poisson_condition_ii(n, 2, 4, t * 0.99).status == FAILS
    exact = poisson_condition_ii(4, 2, 4, math.log(3) / 4)
    assert exact.status == HOLDS and abs(exact.margin) < 1e-15


def test_condition_edge_exponents():
    # p = q means the ratio bound is 1: contraction, holds for every t
    assert heat_condition(2, 3, 3, 0.0).status == HOLDS
    # p = 1 < q makes the right side zero: impossible for finite t
    assert heat_condition(2, 1, 4, 5.0).status == FAILS


# -------------------------------------------------------------------- lemma

def test_lemma_equality_at_k1():
    for n in (2, 3, 4, 7):
        v = lemma_check(n, 1)
        assert v.status == HOLDS
        assert abs(v.margin) < 1e-14


def test_lemma_small_cases():
    v = lemma_check(2, 2)
    assert v.lhs == pytest.approx(1.5, rel=1e-15)
    assert v.rhs == pytest.approx(math.sqrt(3), rel=1e-15)
    assert v.status == HOLDS
    assert lemma_check(3, 2).status == HOLDS
    assert lemma_check(4, 3).status == FAILS


def test_lemma_holds_everywhere_small_dimensions():
    for n in (2, 3):
        table = lemma_table(n, 2000)
        assert all(v.status == HOLDS for v in table)


def test_lemma_table_matches_pointwise():
    table = lemma_table(5, 50)
    for k in (1, 7, 50):
        v = lemma_check(5, k)
        assert table[k - 1].lhs == pytest.approx(v.lhs, rel=1e-12)
        assert table[k - 1].rhs == v.rhs
        assert table[k - 1].status == v.status


def test_h_function_frozen_values():
    assert h_function(2, 4) == pytest.approx(1 + 2 * math.log(2) - math.sqrt(10), rel=1e-14)
    assert h_function(3, 4) == pytest.approx((2 + 3 * math.log(3) - 4 * math.sqrt(2)) / 3, rel=1e-14)
    assert h_function(2, 4) < 0 and h_function(3, 4) < 0


@pytest.mark.parametrize("n", [2, 3])
def test_h_function_decreasing(n):
    ks = list(range(4, 10_001, 37)) + [10_000]
    values = [h_function(n, k) for k in ks]
    for a, b in zip(values, values[1:]):
        assert b < a


def test_beckner_constant():
    assert beckner_constant(5, 0) == 0.0
    assert beckner_constant(9, 1) == pytest.approx(2.0, rel=1e-15)
    assert beckner_constant(2, 3) == pytest.approx(11 / 3, rel=1e-15)


def test_lemma_matches_logsob_coefficient_ordering():
    # lemma margin sign == sign of 2 sqrt(k(k+n-1)/n) - Delta_n(k), all cells
    for n in range(1, 11):
        table = lemma_table(n, 1000)
        for k, v in enumerate(table, start=1):
            delta = beckner_constant(n, k)
            gap = 2.0 * math.sqrt(k * (k + n - 1) / n) - delta
            assert gap == pytest.approx(2.0 * v.margin, rel=1e-9, abs=1e-9)
            if v.status == HOLDS:
                assert gap >= -1e-12


# ------------------------------------------------------------------ entropy

def test_entropy_of_constant_is_zero():
    assert entropy_functional(ZonalPolynomial(2, (3.0,))) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_entropy_taylor_expansion(n):
    y1_sq = math.exp(2 * sphere_l2_norm_closed(SphereParams(n), 1).log_value)
    for eps in (1e-2, 1e-3):
        got = entropy_functional(ZonalPolynomial(n, (1.0, eps)), tol=1e-12)
        assert got == pytest.approx(2 * eps * eps * y1_sq, rel=1e-4)


def test_entropy_scaling_homogeneity():
    g1 = ZonalPolynomial(3, (1.0, 0.4, 0.2))
    g2 = ZonalPolynomial(3, (3.0, 1.2, 0.6))
    assert entropy_functional(g2) == pytest.approx(9 * entropy_functional(g1), rel=1e-9)


def test_entropy_rejects_negative_polynomials():
    with pytest.raises(NonnegativityError):
        entropy_functional(ZonalPolynomial(2, (0.0, 1.0)))


def test_logsob_constant_is_boundary():
    v = logsob_check(ZonalPolynomial(2, (2.0,)), RHS_BECKNER)
    assert v.status != FAILS
    assert abs(v.margin) < 1e-12
    assert v.rhs == 0.0


@pytest.mark.parametrize("rhs_kind", [RHS_BECKNER, RHS_SQRT_EIGENVALUE])
def test_logsob_small_perturbation(rhs_kind):
    # both coefficient families equal 2 at k=1, so the margin is higher order
    for n in (2, 3):
        eps = 1e-3
        v = logsob_check(ZonalPolynomial(n, (1.0, eps)), rhs_kind, tol=1e-12)
        assert v.status != FAILS
        assert abs(v.margin) < 10 * eps**3


def test_logsob_rejects_unknown_kind():
    with pytest.raises(ValueError):
        logsob_check(ZonalPolynomial(2, (1.0,)), "bogus")


def test_logsob_random_sample_holds():
    rng = np.random.default_rng(99)
    for trial in range(40):
        n = 2 if trial % 2 == 0 else 3
        g = random_zonal_polynomial(n, 8, rng)
        for kind in (RHS_BECKNER, RHS_SQRT_EIGENVALUE):
            assert logsob_check(g, kind).status == HOLDS


def test_random_zonal_polynomials_are_nonnegative():
    rng = np.random.default_rng(5)
    grid = np.linspace(-1, 1, 1001)
    for _ in range(25):
        g = random_zonal_polynomial(3, 8, rng)
        assert float(np.min(np.asarray(g.profile(grid)))) >= 0.0


# -------------------------------------------------------------- necessity

def test_necessity_zero_perturbation():
    r = perturbative_necessity(2, 2, 4, 0.3, 0.0)
    for value in r:
        assert value == pytest.approx(1.0, abs=1e-13)


def test_necessity_taylor_accuracy_and_decay():
    # measured minus predicted vanishes at least cubically (the witness's
    # symmetry actually makes it quartic: odd profile moments vanish)
    pair = ExponentPair(2, 4)
    t = pair.t_star(2)
    eps_list = [0.1, 0.03, 0.01]
    diffs_lhs, diffs_rhs = [], []
    for eps in eps_list:
        r = perturbative_necessity(2, 2, 4, t, eps, tol=1e-13)
        diffs_lhs.append(abs(r.measured_lhs - r.predicted_lhs))
        diffs_rhs.append(abs(r.measured_rhs - r.predicted_rhs))
        assert diffs_lhs[-1] <= 5 * eps**3
        assert diffs_rhs[-1] <= 5 * eps**3
    for diffs in (diffs_lhs, diffs_rhs):
        slope = np.polyfit(np.log10(eps_list), np.log10(diffs), 1)[0]
        assert slope >= 2.7


def test_necessity_below_critical_time_breaks_contraction():
    pair = ExponentPair(2, 4)
    t = 0.97 * pair.t_star(2)
    for eps in (1e-2, 1e-3):
        r = perturbative_necessity(2, 2, 4, t, eps)
        assert r.measured_lhs > r.measured_rhs


def test_necessity_rejects_large_perturbations():
    with pytest.raises(NonnegativityError):
        perturbative_necessity(5, 2, 4, 0.1, 0.3)


# -------------------------------------------------- counterexample machinery

def test_count1_degree_one_holds():
    for n in (2, 5, 13, 50):
        v = count1_check(n, 1, 2, 4)
        assert v.status == HOLDS


def test_count1_fails_at_paper_cell():
    v = count1_check(13, 7, 2, 4)
    assert v.status == FAILS
    assert abs(v.margin) > 10 * v.numeric_error


def test_count1_holds_in_small_dimensions():
    for n in (2, 3):
        for d in range(1, 31):
            assert count1_check(n, d, 2, 4).status == HOLDS


def test_count1_p_equals_q_boundary():
    v = count1_check(5, 3, 2.5, 2.5)
    assert v.status == HOLDS and v.margin == 0.0


def test_utol1_fails_at_paper_cell():
    v = utol1_check(13, 7)
    assert v.status == FAILS
    assert abs(v.margin) > 10 * v.numeric_error


def test_utol1_holds_at_n2_d1_exactly():
    # closed-form oracle: lhs = integral t^4 dt = 2/5;
    # rhs = 9^1 * (n-1)^2 B(1/2, 1) / (d^2 (2d+n-1)^2 B(1,1)^2) = 9 * 2 / 9 = 2
    v = utol1_check(2, 1)
    assert v.status == HOLDS
    assert v.lhs == pytest.approx(math.log(2 / 5), rel=1e-12)
    assert v.rhs == pytest.approx(math.log(2.0), rel=1e-12)


def test_utol1_count1_status_agreement():
    for n in (2, 6, 11, 13):
        for d in (1, 3, 7, 9):
            assert utol1_check(n, d).status == count1_check(n, d, 2, 4).status


def test_hermite_bound_values_and_flip():
    v1 = hermite_bound_check(1, 2, 4)
    assert v1.lhs == pytest.approx(math.log(3 ** 0.25), rel=1e-10)
    assert v1.rhs == pytest.approx(0.5 * math.log(3), rel=1e-14)
    assert v1.status == HOLDS
    assert hermite_bound_check(2, 2, 4).status == HOLDS
    v3 = hermite_bound_check(3, 2, 4)
    assert v3.status == FAILS
    # exact moment oracle for the failing side
    assert v3.lhs == pytest.approx(
        0.25 * math.log(hermite_fourth_moment(3)) - 0.5 * math.log(6), rel=1e-10
    )
    assert hermite_bound_check(3, 3, 3).status == HOLDS


def test_hermite_growth_rate_trend():
    target = math.sqrt(3)
    g20 = hermite_growth_rate(20, 2, 4)
    g40 = hermite_growth_rate(40, 2, 4)
    assert abs(g40 - target) < abs(g20 - target)
    # max(p, 2) in the limit: p = 1.5 targets sqrt(3) as well
    g15 = hermite_growth_rate(15, 1.5, 4)
    g30 = hermite_growth_rate(30, 1.5, 4)
    assert abs(g30 - target) < abs(g15 - target)
    with pytest.raises(ValueError):
        hermite_growth_rate(5, 2, 2)


def test_monotone_time_boundary_consistent_with_count1():
    # ||Y_d||_q/||Y_d||_p <= e^{t sqrt(d(d+n-1))} flips at a single threshold
    # found by bisection, and count1 at t_star agrees with the threshold side
    for n, d, p, q in ((13, 7, 2.0, 4.0), (3, 5, 2.0, 4.0)):
        ratio = norms.norm_ratio_sphere(SphereParams(n), d, p, q)
        lam_sqrt = eigenvalue_sqrt_laplacian(n, d)

        def bound_holds(t: float) -> bool:
            return t * lam_sqrt >= ratio.log_value

        lo, hi = 0.0, 10.0
        assert not bound_holds(lo) and bound_holds(hi)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if bound_holds(mid):
                hi = mid
            else:
                lo = mid
        threshold = 0.5 * (lo + hi)
        t_star = ExponentPair(p, q).t_star(n)
        verdict = count1_check(n, d, p, q)
        if verdict.status == HOLDS:
            assert t_star >= threshold * (1 - 1e-9)
        elif verdict.status == FAILS:
            assert t_star <= threshold * (1 + 1e-9)


# -------------------------------------------------------------------- scan

def test_scan_first_failure_matches_paper():
    report = counterexample_scan(2, 4, range(2, 14), range(1, 11))
    assert report.first_failure == (13, 7)
    assert report.n0_estimate == 13
    assert "upper bound" in report.note
    assert all(v.status != INCONCLUSIVE for v in report.grid.values())


def test_scan_no_failures_in_small_dimensions():
    report = counterexample_scan(2, 4, (2, 3), range(1, 31))
    assert report.first_failure is None
    assert report.n0_estimate is None
    assert all(v.status == HOLDS for v in report.grid.values())


def test_scan_empty_range():
    report = counterexample_scan(2, 4, (5,), ())
    assert report.grid == {}
    assert report.first_failure is None


def test_scan_requires_supercritical_q():
    with pytest.raises(ValueError):
        counterexample_scan(1.5, 1.8, (4,), (1,))


def test_scan_parallel_matches_serial():
    serial = counterexample_scan(2, 4, range(10, 14), range(5, 9), jobs=1)
    parallel = counterexample_scan(2, 4, range(10, 14), range(5, 9), jobs=2)
    assert list(serial.grid) == list(parallel.grid)
    for key in serial.grid:
        assert serial.grid[key] == parallel.grid[key]
    assert serial.first_failure == parallel.first_failure


# ----------------------------------------------------------------- verdicts

def test_verdict_trichotomy():
    rng = np.random.default_rng(0)
    for _ in range(500):
        lhs, rhs = rng.normal(size=2)
        err = abs(rng.normal()) * 0.5
        v = Verdict.compare(lhs, rhs, err)
        statuses = [v.margin > err, v.margin < -err]
        assert statuses.count(True) == (0 if v.status == INCONCLUSIVE else 1)
        if v.status == HOLDS:
            assert v.margin > err
        elif v.status == FAILS:
            assert v.margin < -err
        else:
            assert -err <= v.margin <= err
        assert v.margin == rhs - lhs


def test_nonconverged_inputs_are_inconclusive():
    v = Verdict.compare(1.0, 2.0, math.inf)
    assert v.status == INCONCLUSIVE
