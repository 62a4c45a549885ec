import numpy as np
import pytest

from wickns import (
    NoiseOperator,
    NoisePath,
    Trajectory,
    bessel_operator,
    convolution_from_path,
    convolution_paths_block,
    convolution_variance,
    frequencies,
    identity_operator,
    make_grid,
    matrix_operator,
    moment_bound_check,
    multiplier_operator,
    operator_to_csv,
    philox_stream,
    sample_convolution_path,
    sample_noise_path,
    sample_white_noise_field,
    trajectory_from_csv,
    trajectory_to_csv,
)


# ---------------------------------------------------------------------------
# operators


def test_bessel_small_case():
    op = bessel_operator(1, 2.0)
    assert np.array_equal(op.multiplier, [0.5, 1.0, 0.5])


def test_bessel_high_mode_value():
    op = bessel_operator(64, 0.25)
    assert op.multiplier[-1] == (1.0 + 64**2) ** -0.125


def test_identity_operator_is_flat():
    op = identity_operator(6)
    assert np.array_equal(op.multiplier, np.ones(13))


def test_bessel_negative_alpha_amplifies():
    op = bessel_operator(4, -1.0)
    assert op.multiplier[-1] == np.sqrt(17.0)


def test_multiplier_row_l2():
    op = multiplier_operator([0.25, -1.0, 0.5])
    assert np.array_equal(op.row_l2(), [0.25, 1.0, 0.5])


def test_matrix_operator_row_l2_and_apply(rng):
    mat = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    op = matrix_operator(mat)
    assert op.cutoff == 2
    want = np.sqrt(np.sum(np.abs(mat) ** 2, axis=1))
    assert np.allclose(op.row_l2(), want, rtol=0, atol=1e-14)
    z = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    assert np.allclose(op.apply_to_vector(z), mat @ z, rtol=0, atol=1e-13)


def test_operator_validation():
    with pytest.raises(ValueError):
        NoiseOperator(1)  # neither given
    with pytest.raises(ValueError):
        NoiseOperator(1, multiplier=np.ones(3), matrix=np.eye(3))
    with pytest.raises(ValueError):
        NoiseOperator(2, multiplier=np.ones(3))  # wrong length
    with pytest.raises(ValueError):
        NoiseOperator(1, multiplier=np.array([1.0, np.inf, 1.0]))
    with pytest.raises(ValueError):
        NoiseOperator(129, matrix=np.eye(259))  # matrix size cap


def test_operator_csv_multiplier():
    text = operator_to_csv(bessel_operator(1, 2.0))
    lines = text.strip().splitlines()
    assert lines[0] == "n,phi_n"
    assert lines[1] == "-1,0.5"
    assert lines[2] == "0,1.0"


def test_operator_csv_matrix_header():
    text = operator_to_csv(matrix_operator(np.eye(3)))
    lines = text.strip().splitlines()
    assert lines[0] == "n,k,re,im"
    assert len(lines) == 1 + 9


# ---------------------------------------------------------------------------
# streams and white noise


def test_philox_stream_reproducible():
    a = philox_stream(7, 3).standard_normal(8)
    b = philox_stream(7, 3).standard_normal(8)
    assert np.array_equal(a, b)


def test_philox_stream_keys_disjoint():
    a = philox_stream(7, 0).standard_normal(8)
    b = philox_stream(7, 1).standard_normal(8)
    assert not np.allclose(a, b)


def test_white_noise_zero_variance():
    f = sample_white_noise_field(3, 0.0, philox_stream(0))
    assert f.mass() == 0.0


def test_white_noise_negative_variance():
    with pytest.raises(ValueError):
        sample_white_noise_field(3, -1.0, philox_stream(0))


def test_white_noise_moments():
    # E|g_n|^2 = 1 per mode, modes uncorrelated
    rng = philox_stream(11)
    block = np.stack(
        [sample_white_noise_field(2, 1.0, rng).coeffs for _ in range(100_000)]
    )
    second = np.mean(np.abs(block) ** 2, axis=0)
    assert second.min() > 0.99 and second.max() < 1.01
    cov = block.conj().T @ block / block.shape[0]
    off = cov - np.diag(np.diag(cov))
    assert np.max(np.abs(off)) < 0.02


# ---------------------------------------------------------------------------
# increment paths and the convolution recursion


def test_sample_noise_path_shape_and_reproducibility():
    grid = make_grid(1.0, 8)
    p1 = sample_noise_path(4, grid, seed=5, trajectory_id=2)
    p2 = sample_noise_path(4, grid, seed=5, trajectory_id=2)
    assert p1.increments.shape == (8, 9)
    assert np.array_equal(p1.increments, p2.increments)
    p3 = sample_noise_path(4, grid, seed=5, trajectory_id=3)
    assert not np.allclose(p1.increments, p3.increments)


def test_noise_path_shape_validation():
    with pytest.raises(ValueError):
        NoisePath(np.linspace(0, 1, 5), np.zeros((5, 3), dtype=complex))


def test_convolution_recursion_unrolled():
    op = bessel_operator(3, 0.5)
    grid = make_grid(0.5, 6)
    path = sample_noise_path(3, grid, seed=9)
    traj = convolution_from_path(op, path)
    ns = frequencies(3).astype(float)
    prop = np.exp(1j * (grid[1] - grid[0]) * ns**2)
    cur = np.zeros(7, dtype=complex)
    assert np.array_equal(traj.states[0], cur)
    for m in range(6):
        cur = prop * cur + op.multiplier * path.increments[m]
        assert np.max(np.abs(traj.states[m + 1] - cur)) == 0.0


def test_convolution_width_mismatch():
    grid = make_grid(1.0, 4)
    path = sample_noise_path(3, grid, seed=1)
    with pytest.raises(ValueError):
        convolution_from_path(bessel_operator(5, 1.0), path)


def test_convolution_nonuniform_grid_rejected():
    times = np.array([0.0, 0.1, 0.5, 1.0])
    path = NoisePath(np.linspace(0, 1, 4), np.zeros((3, 3), dtype=complex))
    object.__setattr__(path, "times", times)
    with pytest.raises(ValueError):
        convolution_from_path(identity_operator(1), path)


def test_grid_halving_consistency():
    # Two fine steps compose into one coarse step with the combined increment
    # zeta' = exp(i delta n^2) zeta_{2m} + zeta_{2m+1}; trajectories agree on
    # the shared grid times.
    op = bessel_operator(4, 1.0)
    fine = make_grid(1.0, 16)
    path = sample_noise_path(4, fine, seed=77)
    traj_fine = convolution_from_path(op, path)
    ns = frequencies(4).astype(float)
    delta = fine[1] - fine[0]
    phase = np.exp(1j * delta * ns**2)
    combined = phase * path.increments[0::2] + path.increments[1::2]
    coarse = fine[::2]
    traj_coarse = convolution_from_path(op, NoisePath(coarse, combined))
    err = np.max(np.abs(traj_fine.states[::2] - traj_coarse.states))
    assert err < 1e-13


def test_block_matches_single_path():
    op = bessel_operator(5, 0.75)
    grid = make_grid(1.0, 10)
    single = sample_convolution_path(op, grid, philox_stream(3, 1))
    block = convolution_paths_block(op, grid, philox_stream(3, 1), 1)
    assert np.array_equal(block[0], single.states)


def test_block_matrix_case_matches_multiplier():
    grid = make_grid(0.5, 4)
    mult = bessel_operator(2, 1.0)
    mat = matrix_operator(np.diag(mult.multiplier))
    a = convolution_paths_block(mult, grid, philox_stream(8), 3)
    b = convolution_paths_block(mat, grid, philox_stream(8), 3)
    assert np.max(np.abs(a - b)) < 1e-14


# ---------------------------------------------------------------------------
# variance law and moment bounds


def test_convolution_variance_identity():
    assert convolution_variance(identity_operator(7), 3.0, 7) == 3.0


def test_convolution_variance_bessel_closed_form():
    op = bessel_operator(8, 1.0)
    assert abs(convolution_variance(op, 2.0, 4) - 2.0 / 17.0) < 1e-15


def test_convolution_variance_errors():
    op = identity_operator(2)
    with pytest.raises(ValueError):
        convolution_variance(op, -1.0, 0)
    with pytest.raises(ValueError):
        convolution_variance(op, 1.0, 5)


def test_empirical_variance_bessel():
    # mode 4, alpha = 1, horizon 2: target 2/17 within 5%
    op = bessel_operator(8, 1.0)
    grid = make_grid(2.0, 8)
    states = convolution_paths_block(op, grid, philox_stream(22), 10_000)
    v = np.mean(np.abs(states[:, -1, 4 + 8]) ** 2)
    assert abs(v - 2.0 / 17.0) / (2.0 / 17.0) < 0.05


def test_empirical_variance_identity_band():
    op = identity_operator(8)
    grid = make_grid(1.0, 4)
    states = convolution_paths_block(op, grid, philox_stream(31), 10_000)
    ratios = np.mean(np.abs(states[:, -1, :]) ** 2, axis=0)
    assert ratios.min() > 0.94 and ratios.max() < 1.06


def test_moment_ratio_p2():
    a = np.array([1.0, 0.5 + 0.5j, -0.25, 0.1j])
    r = moment_bound_check(a, 2.0, 100_000, philox_stream(42, 2))
    assert abs(r - 1.0 / np.sqrt(2.0)) < 0.02 / np.sqrt(2.0)


def test_moment_ratio_p4():
    a = np.array([1.0, 0.5 + 0.5j, -0.25, 0.1j])
    r = moment_bound_check(a, 4.0, 100_000, philox_stream(42, 4))
    want = 2.0**0.25 / 2.0
    assert abs(r - want) < 0.05 * want


def test_moment_ratio_p8_bounded():
    a = np.array([1.0, 0.5 + 0.5j, -0.25, 0.1j])
    r = moment_bound_check(a, 8.0, 100_000, philox_stream(42, 8))
    assert 0.0 < r < 3.0


def test_moment_bound_errors(rng):
    with pytest.raises(ValueError):
        moment_bound_check([1.0], 1.5, 10, rng)
    with pytest.raises(ValueError):
        moment_bound_check([0.0, 0.0], 2.0, 10, rng)


def test_path_continuity_exponent():
    # In the rotating frame the squared modulus of an increment scales like
    # the separation; the log-log slope over dyadic separations sits near 1.
    rng = philox_stream(808)
    op = bessel_operator(16, 1.0)
    grid = make_grid(1.0, 64)
    states = convolution_paths_block(op, grid, rng, 2000)
    ns = frequencies(16).astype(float)
    V = states * np.exp(-1j * grid[None, :, None] * ns[None, None, :] ** 2)
    dt = 1.0 / 64
    hs, ds = [], []
    for k in (1, 2, 4, 8, 16, 32):
        diffs = V[:, k:, :] - V[:, :-k, :]
        hs.append(k * dt)
        ds.append(np.mean(np.sum(np.abs(diffs) ** 2, axis=2)))
    slope = np.polyfit(np.log(hs), np.log(ds), 1)[0]
    assert 0.9 < slope < 1.1


# ---------------------------------------------------------------------------
# trajectories and serialization


def test_trajectory_validation():
    with pytest.raises(ValueError):
        Trajectory(np.array([0.0, 1.0]), np.zeros((3, 3), dtype=complex))
    with pytest.raises(ValueError):
        Trajectory(np.array([0.0, 1.0]), np.zeros((2, 4), dtype=complex))
    with pytest.raises(ValueError):
        Trajectory(np.array([1.0, 0.0]), np.zeros((2, 3), dtype=complex))


def test_trajectory_state_at():
    grid = make_grid(1.0, 4)
    traj = sample_convolution_path(identity_operator(2), grid, philox_stream(1))
    f = traj.state_at(0.5)
    assert np.array_equal(f.coeffs, traj.states[2])
    with pytest.raises(ValueError):
        traj.state_at(0.3)


def test_trajectory_csv_round_trip():
    grid = make_grid(0.25, 3)
    traj = sample_convolution_path(bessel_operator(2, 0.5), grid, philox_stream(6))
    text = trajectory_to_csv(traj)
    assert text.splitlines()[0] == "t,n,re,im"
    back = trajectory_from_csv(text)
    assert np.array_equal(back.times, traj.times)
    assert np.array_equal(back.states, traj.states)


def test_make_grid_contract():
    g = make_grid(1.0, 4)
    assert np.array_equal(g, [0.0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(ValueError):
        make_grid(0.0, 4)
    with pytest.raises(ValueError):
        make_grid(1.0, 0)
