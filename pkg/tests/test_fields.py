import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wickns import (
    SpectralField,
    apply_linear_propagator,
    convolve,
    evaluate,
    field_from_csv,
    field_to_csv,
    fl_norm,
    make_field,
    mode_field,
    philox_stream,
    project,
    zero_field,
)
from conftest import brute_convolve, random_field

complex_lists = st.integers(min_value=0, max_value=8).flatmap(
    lambda N: st.lists(
        st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
        min_size=2 * N + 1,
        max_size=2 * N + 1,
    )
)


def test_make_field_single_mode():
    f = make_field(0, [1.0])
    assert f.coeff(0) == 1.0
    assert f.cutoff == 0


def test_make_field_zero():
    f = make_field(1, [0, 0, 0])
    assert f.allclose(zero_field(1))
    assert f.mass() == 0.0


def test_make_field_index_convention():
    f = make_field(1, [0, 1, 1])
    assert f.coeff(-1) == 0
    assert f.coeff(0) == 1
    assert f.coeff(1) == 1


def test_make_field_length_mismatch():
    with pytest.raises(ValueError):
        make_field(2, [1.0, 2.0])


def test_make_field_rejects_nonfinite():
    with pytest.raises(ValueError):
        make_field(0, [np.nan])


def test_propagator_zero_mode_fixed():
    f = mode_field(3, 0, 2.0 - 1.0j)
    g = apply_linear_propagator(f, 17.3)
    assert g.allclose(f, 1e-15)


def test_propagator_unit_rotation():
    f = mode_field(2, 1, 1.0)
    g = apply_linear_propagator(f, np.pi)
    assert abs(g.coeff(1) - (-1.0)) < 1e-14


def test_propagator_inverse_round_trip(rng):
    f = random_field(6, rng)
    g = apply_linear_propagator(apply_linear_propagator(f, 0.7), -0.7)
    assert g.allclose(f, 1e-12)


@given(complex_lists, st.floats(-20, 20), st.floats(-20, 20))
@settings(max_examples=60, deadline=None)
def test_propagator_unitary_and_group(coeffs, t1, t2):
    N = (len(coeffs) - 1) // 2
    f = make_field(N, coeffs)
    # unitarity of every FL norm
    g = apply_linear_propagator(f, t1)
    for s, p in [(0.0, 2.0), (0.5, 3.0), (-1.0, 1.5)]:
        a, b = fl_norm(f, s, p), fl_norm(g, s, p)
        assert abs(a - b) <= 1e-14 * max(1.0, a)
    # group law S(t1) S(t2) = S(t1 + t2)
    lhs = apply_linear_propagator(g, t2)
    rhs = apply_linear_propagator(f, t1 + t2)
    assert lhs.allclose(rhs, 1e-12 * max(1.0, float(np.max(np.abs(f.coeffs)))))


def test_convolve_delta_identity():
    e0 = mode_field(3, 0, 1.0)
    assert convolve(e0, e0).allclose(e0)


def test_convolve_truncation_rule():
    e1 = mode_field(2, 1, 1.0)
    out = convolve(e1, e1)
    assert out.allclose(mode_field(2, 2, 1.0))
    e1_small = mode_field(1, 1, 1.0)
    assert convolve(e1_small, e1_small).allclose(zero_field(1))


def test_convolve_matches_brute_force(rng):
    f = random_field(8, rng)
    g = random_field(8, rng)
    assert convolve(f, g).allclose(brute_convolve(f, g), 1e-13)


@given(st.integers(0, 5), st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_convolve_brute_force_property(N, seed):
    r = philox_stream(seed)
    f, g = random_field(N, r), random_field(N, r)
    got = convolve(f, g)
    assert got.allclose(brute_convolve(f, g), 1e-12)
    # commutativity
    assert got.allclose(convolve(g, f), 1e-12)


def test_convolve_cutoff_mismatch():
    with pytest.raises(ValueError):
        convolve(mode_field(2, 0), mode_field(3, 0))


def test_project_full_is_identity(rng):
    f = random_field(5, rng)
    assert project(f, 5).allclose(f, 0.0)


def test_project_kills_high_mode():
    f = mode_field(3, 2, 1.0)
    assert project(f, 1).allclose(zero_field(3))


def test_project_idempotent_and_contractive(rng):
    f = random_field(7, rng)
    g = project(f, 3)
    assert project(g, 3).allclose(g, 0.0)
    assert fl_norm(g, 0.0, 2.0) <= fl_norm(f, 0.0, 2.0)


def test_project_band_error():
    with pytest.raises(ValueError):
        project(mode_field(2, 0), 3)


def test_evaluate_constant():
    vals = evaluate(mode_field(1, 0, 1.0), 8)
    assert np.allclose(vals, 1.0)


def test_evaluate_zero():
    assert np.allclose(evaluate(zero_field(4), 16), 0.0)


def test_evaluate_round_trip(rng):
    N = 6
    f = random_field(N, rng)
    vals = evaluate(f, 4 * N)
    # forward transform on the same grid recovers the coefficients
    back = np.fft.fft(vals) / (4 * N)
    rec = np.concatenate([back[-N:], back[: N + 1]])
    assert np.max(np.abs(rec - f.coeffs)) < 1e-12


def test_evaluate_grid_too_small():
    with pytest.raises(ValueError):
        evaluate(mode_field(4, 0), 8)


def test_field_csv_round_trip(rng):
    f = random_field(5, rng)
    text = field_to_csv(f)
    assert text.splitlines()[0] == "n,re,im"
    g = field_from_csv(text)
    assert g.cutoff == f.cutoff
    assert np.array_equal(g.coeffs, f.coeffs)


def test_field_arithmetic(rng):
    f, g = random_field(4, rng), random_field(4, rng)
    assert (f + g - g).allclose(f, 1e-14)
    assert (f * 2.0).allclose(make_field(4, 2.0 * f.coeffs), 0.0)


def test_field_coeffs_read_only(rng):
    f = random_field(3, rng)
    with pytest.raises(ValueError):
        f.coeffs[0] = 1.0


def test_mass_is_parseval_sum(rng):
    f = random_field(5, rng)
    assert abs(f.mass() - np.sum(np.abs(f.coeffs) ** 2)) < 1e-14
