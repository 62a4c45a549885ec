import numpy as np
import pytest

from wickns import (
    ModulationPoint,
    XsbParams,
    bessel_operator,
    bracket,
    convolution_sum_check,
    criticality_report,
    divisor_bound_scan,
    divisor_count,
    lemma_exponent,
    multiplier_supremum,
    multiplier_supremum_report,
    philox_stream,
    resonance_defects,
    tail_estimate_mc,
    trilinear_forcing_block,
    trilinear_ratio,
    variance_invariance_test,
    wick_trilinear,
)
from conftest import random_field


# ---------------------------------------------------------------------------
# modulation arithmetic


def test_resonance_identity_random_triples():
    rng = philox_stream(2)
    n1, n2, n3 = rng.integers(-10**6, 10**6, size=(3, 10_000))
    assert np.all(resonance_defects(n1, n2, n3) == 0)


def test_modulation_point_fields():
    pt = ModulationPoint(n=2, n1=3, n2=4, n3=3, tau=10.0)
    assert pt.sigma0 == 6.0
    assert pt.resonance_product == 2 * (2 - 3) * (2 - 3)
    assert not pt.is_resonant
    assert ModulationPoint(n=3, n1=3, n2=1, n3=1, tau=0.0).is_resonant
    with pytest.raises(ValueError):
        ModulationPoint(n=1, n1=1, n2=1, n3=2, tau=0.0)


# ---------------------------------------------------------------------------
# divisor arithmetic


def test_divisor_count_values():
    assert divisor_count(1) == 1
    assert divisor_count(12) == 6
    assert divisor_count(360) == 24
    assert divisor_count(720720) == 240
    with pytest.raises(ValueError):
        divisor_count(0)


def test_divisor_scan_monotone_in_delta():
    lo = divisor_bound_scan(100_000, 0.5)
    hi = divisor_bound_scan(100_000, 0.6)
    assert hi < lo
    assert lo <= 2.0


def test_divisor_scan_argmax_highly_composite():
    ratio, arg = divisor_bound_scan(100_000, 0.5, return_argmax=True)
    # at delta = 1/2 the maximizer is the highly composite n = 12: d(12)/sqrt(12) = sqrt(3)
    assert arg == 12
    assert ratio == pytest.approx(np.sqrt(3.0), rel=1e-12)
    with pytest.raises(ValueError):
        divisor_bound_scan(0, 0.5)
    with pytest.raises(ValueError):
        divisor_bound_scan(10, 0.0)


# ---------------------------------------------------------------------------
# two-factor lattice sums


def test_lemma_exponent_cases():
    assert lemma_exponent(2.0, 0.6) == 0.6
    assert lemma_exponent(1.0, 0.6) == 0.6 - 0.01
    assert lemma_exponent(0.7, 0.7) == pytest.approx(0.4)


def test_sum_precondition():
    with pytest.raises(ValueError):
        convolution_sum_check(0.6, 0.7, 0, 0, 100)  # beta < gamma
    with pytest.raises(ValueError):
        convolution_sum_check(0.5, 0.4, 0, 0, 100)  # beta + gamma <= 1


def test_sum_convergent_constant():
    a, _ = convolution_sum_check(1.1, 1.1, 0, 0, 2**14)
    b, shape = convolution_sum_check(1.1, 1.1, 0, 0, 2**15)
    assert abs(b - a) < 1e-4
    assert 2.0 < a < 3.5
    assert shape == 1.0  # <k1 - k2> = 1 at k1 = k2


def test_sum_decay_exponent_beta_large():
    # beta = 2 > 1: alpha = gamma = 0.6; slope of log lhs vs log<k1> near -0.6
    k1s = [2**j for j in range(0, 9)]
    lhs = [convolution_sum_check(2.0, 0.6, k, 0, 2**17)[0] for k in k1s]
    logs = np.log([float(bracket(np.float64(k))) for k in k1s])
    slope = np.polyfit(logs, np.log(lhs), 1)[0]
    assert -0.7 < slope < -0.5
    products = [l * float(bracket(np.float64(k))) ** 0.6 for k, l in zip(k1s, lhs)]
    assert max(products) < 4.0


def test_sum_decay_exponent_beta_small():
    # beta = gamma = 0.7 < 1: alpha = beta + gamma - 1 = 0.4
    k1s = [2**j for j in range(6, 14)]
    lhs = [convolution_sum_check(0.7, 0.7, k, 0, 2**17)[0] for k in k1s]
    logs = np.log([float(bracket(np.float64(k))) for k in k1s])
    slope = np.polyfit(logs, np.log(lhs), 1)[0]
    assert abs(-slope - 0.4) < 0.15


# ---------------------------------------------------------------------------
# trilinear multiplier


def test_multiplier_window_enforced():
    with pytest.raises(ValueError):
        multiplier_supremum(XsbParams(0.1, 0.5, -0.3, 4.0, 2.0, 0.5), 8)
    with pytest.raises(ValueError):
        multiplier_supremum(XsbParams(0.1, 0.8, -0.1, 4.0, 2.0, 0.5), 8)


def test_multiplier_resonant_only_is_zero():
    # at cutoff 0 every triple hits the diagonal exclusion
    assert multiplier_supremum(XsbParams(0.1, 0.45, -0.1, 2.0, 2.0, 0.5), 0) == 0.0


def test_multiplier_kernel_peak_location():
    # steep kernel (kappa near 1): the sup over the sigma0 sweep sits at the
    # resonance point sigma0 = -2 (n - n1)(n - n3) of the dominant triples
    params = XsbParams(0.0, 0.49, -0.005, 2.0, 2.0, 0.5)
    rep = multiplier_supremum_report(params, 1, tau_grid=[-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0])
    assert rep.kernel_window_ok
    assert rep.kernel_exponent == pytest.approx(0.91, abs=1e-12)
    assert rep.arg_n == 0
    assert rep.arg_tau == 2.0


def test_multiplier_flat_kernel_flagged():
    # (s, p, b, b') = (0.1, 4, 0.74, -0.24) sits exactly on (b - a) p' = 2/3:
    # the derived kernel exponent collapses to 0 and the window flag clears
    rep = multiplier_supremum_report(XsbParams(0.1, 0.74, -0.24, 4.0, 2.0, 0.5), 8)
    assert not rep.kernel_window_ok
    assert abs(rep.kernel_exponent) < 1e-12
    assert rep.value > 0


# ---------------------------------------------------------------------------
# trilinear ratio ensembles


def test_trilinear_forcing_block_matches_split(rng):
    N = 6
    for _ in range(4):
        u1, u2, u3 = (random_field(N, rng) for _ in range(3))
        block = trilinear_forcing_block(
            u1.coeffs[None, :], u2.coeffs[None, :], u3.coeffs[None, :], N
        )[0]
        split = wick_trilinear(u1, u2, u3)
        assert np.max(np.abs(block - split.total.coeffs)) < 1e-12


def test_trilinear_forcing_single_triple():
    # (e_1, e_0, e_-1): product lands on e_0, both diagonal sums vanish
    def row(n, N=2):
        c = np.zeros((1, 2 * N + 1), dtype=complex)
        c[0, n + N] = 1.0
        return c

    out = trilinear_forcing_block(row(1), row(0), row(-1), 2)[0]
    want = np.zeros(5, dtype=complex)
    want[2] = 1.0
    assert np.max(np.abs(out - want)) < 1e-14


def test_trilinear_ratio_stats_shape():
    stats = trilinear_ratio(
        50, XsbParams(0.1, 0.74, -0.24, 4.0, 2.0, 0.5), 8, philox_stream(606, 8)
    )
    assert stats.count + stats.filtered == 50
    assert 0 < stats.p50 <= stats.p90 <= stats.p99 <= stats.max
    d = stats.as_dict()
    assert d["count"] == stats.count and d["p99"] == stats.p99


# ---------------------------------------------------------------------------
# tail Monte Carlo


def test_tail_fit_small_ensemble():
    op = bessel_operator(8, 0.75)
    params = XsbParams(0.0, 0.45, -0.1, 2.0, 2.0, 0.5)
    rep = tail_estimate_mc(
        op, params, [0.8, 1.0, 1.2, 1.5, 1.8], 1000, philox_stream(92), steps=32
    )
    assert rep.survivals[1] == pytest.approx(0.5, abs=0.01)  # lambda at the median
    assert rep.slope < 0
    assert rep.r_squared >= 0.9
    assert rep.theta == pytest.approx(3 - 2 * 0.45 - 1.0)
    assert not rep.usable[-1]  # zero-survival level dropped
    assert rep.as_dict()["median"] == rep.median


def test_tail_worker_count_invariant():
    op = bessel_operator(8, 0.75)
    params = XsbParams(0.0, 0.45, -0.1, 2.0, 2.0, 0.5)
    r1 = tail_estimate_mc(op, params, [0.8, 1.0, 1.2, 1.5], 1200, philox_stream(91), steps=32, workers=1)
    r3 = tail_estimate_mc(op, params, [0.8, 1.0, 1.2, 1.5], 1200, philox_stream(91), steps=32, workers=3)
    assert r1.as_dict() == r3.as_dict()


def test_tail_sparse_ladder_is_error():
    # widely spaced levels leave fewer than 3 with nontrivial survival
    op = bessel_operator(32, 0.5)
    params = XsbParams(0.0, 0.7, -0.1, 4.0, 4.0, 1.0)
    with pytest.raises(ValueError, match="fewer than 3 usable"):
        tail_estimate_mc(op, params, [1.0, 1.5, 2.0, 2.5], 3000, philox_stream(77), steps=32)


def test_tail_parameter_guards():
    op = bessel_operator(4, 0.75)
    good = XsbParams(0.0, 0.45, -0.1, 2.0, 2.0, 0.5)
    with pytest.raises(ValueError):
        tail_estimate_mc(op, XsbParams(0.0, 0.6, -0.1, 2.0, 2.0, 0.5), [1.0, 1.2, 1.5], 1000, philox_stream(0))
    with pytest.raises(ValueError):
        tail_estimate_mc(op, good, [1.0, 1.2, 1.5], 500, philox_stream(0))
    with pytest.raises(ValueError):
        tail_estimate_mc(op, good, [-1.0, 1.2, 1.5], 1000, philox_stream(0))


# ---------------------------------------------------------------------------
# variance evolution


def test_variance_report_small_ensemble():
    rep = variance_invariance_test(4, 0.25, 1 / 64, 400, philox_stream(62), substeps=2)
    assert rep.times == (0.0625, 0.125, 0.25)
    assert rep.target(0.0) == 1.0
    assert rep.target(0.25) == 1.25
    assert rep.max_rel_dev < 0.2  # loose band at 400 paths
    assert 0.8 < rep.slope < 1.2
    assert rep.blowup_fraction == 0.0
    assert not rep.flagged
    d = rep.as_dict()
    assert len(d["variances"]) == 3 and len(d["variances"][0]) == 9


def test_variance_grid_guards():
    with pytest.raises(ValueError):
        variance_invariance_test(4, 0.25, 0.3, 1000, philox_stream(0))


# ---------------------------------------------------------------------------
# criticality arithmetic


def test_criticality_d1_both_scales_critical():
    rep = criticality_report(1, 2.0)
    assert rep.s_crit_p == -0.5
    assert rep.s_hat_crit_p == -0.5
    assert rep.white_noise_reg_sobolev == -0.5
    assert rep.white_noise_reg_fl == -0.5
    assert rep.classifications["snls_sobolev"] == "critical"
    assert rep.classifications["snls_fourier_lebesgue"] == "critical"
    assert rep.classifications["sqe"] == "subcritical"


def test_criticality_d1_fl_critical_any_p():
    for p in (1.5, 2.0, 4.0, 8.0):
        rep = criticality_report(1, p)
        assert rep.classifications["snls_fourier_lebesgue"] == "critical"


def test_criticality_heat_ladder():
    assert criticality_report(2).classifications["sqe"] == "subcritical"
    assert criticality_report(3).classifications["sqe"] == "subcritical"
    rep4 = criticality_report(4, np.inf)
    assert rep4.classifications["sqe"] == "critical"
    assert rep4.s_crit_p == -1.0
    assert rep4.heat_convolution_reg == -1.0
    assert criticality_report(5).classifications["sqe"] == "supercritical"


def test_criticality_snls_supercritical_d2():
    rep = criticality_report(2, 2.0)
    assert rep.classifications["snls_sobolev"] == "supercritical"
    assert rep.classifications["snls_fourier_lebesgue"] == "supercritical"


def test_criticality_pure_function():
    a = criticality_report(3, 4.0)
    b = criticality_report(3, 4.0)
    assert a == b
    assert criticality_report(4, np.inf).as_dict()["p"] == "inf"
    with pytest.raises(ValueError):
        criticality_report(0)
    with pytest.raises(ValueError):
        criticality_report(2, 1.0)
