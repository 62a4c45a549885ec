"""Cylindrical Wiener process, the smoothing operator phi, and the
stochastic convolution, exact in distribution per Fourier mode.

The driving noise has independent complex Brownian modes with
E|beta_n(t)|^2 = t (real and imaginary parts independent, variance t/2
each), which makes the Ito isometry hold with constant exactly 1.  Because
the free propagator is a unit-modulus multiplier, the grid recursion

    psi_hat(t_{m+1}, n) = exp(i dt n^2) psi_hat(t_m, n) + phi_n zeta_{m,n}

with zeta complex Gaussian of variance dt reproduces the law of the
stochastic convolution at the grid points with no time-discretization bias.

Reproducibility: every sampler either takes an explicit numpy Generator or a
(seed, trajectory_id) pair routed through a counter-based Philox stream, so
parallel ensembles are independent of worker count and scheduling order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .fields import SpectralField, frequencies, make_field

__all__ = [
    "NoiseOperator",
    "NoisePath",
    "Trajectory",
    "bessel_operator",
    "identity_operator",
    "multiplier_operator",
    "matrix_operator",
    "make_grid",
    "philox_stream",
    "sample_white_noise_field",
    "sample_noise_path",
    "sample_convolution_path",
    "convolution_from_path",
    "convolution_paths_block",
    "convolution_variance",
    "moment_bound_check",
    "trajectory_to_csv",
    "trajectory_from_csv",
    "operator_to_csv",
]


@dataclass(frozen=True)
class NoiseOperator:
    """The operator phi on the truncated basis.

    Either a real Fourier multiplier (phi_n)_{|n| <= N} or a dense complex
    matrix whose entry (n, k) is the coefficient of phi(e_k) on e_n.  Only
    desk-scale matrices are supported; the reference case is the diagonal
    Bessel multiplier.
    """

    cutoff: int
    multiplier: Optional[np.ndarray] = None
    matrix: Optional[np.ndarray] = None

    def __post_init__(self):
        dim = 2 * self.cutoff + 1
        if (self.multiplier is None) == (self.matrix is None):
            raise ValueError("exactly one of multiplier/matrix must be given")
        if self.multiplier is not None:
            arr = np.asarray(self.multiplier, dtype=np.float64)
            if arr.shape != (dim,):
                raise ValueError(f"multiplier must have shape ({dim},)")
            if not np.all(np.isfinite(arr)):
                raise ValueError("multiplier entries must be finite")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, "multiplier", arr)
        else:
            mat = np.asarray(self.matrix, dtype=np.complex128)
            if mat.shape != (dim, dim):
                raise ValueError(f"matrix must have shape ({dim}, {dim})")
            if not np.all(np.isfinite(mat.view(np.float64))):
                raise ValueError("matrix entries must be finite")
            if self.cutoff > 128:
                raise ValueError("matrix operators supported only at N <= 128")
            mat = mat.copy()
            mat.setflags(write=False)
            object.__setattr__(self, "matrix", mat)

    @property
    def is_multiplier(self) -> bool:
        return self.multiplier is not None

    def row_l2(self) -> np.ndarray:
        """Per-output-mode l2 norm over driving indices: (sum_k |phi(e_k)(n)|^2)^(1/2)."""
        if self.is_multiplier:
            return np.abs(self.multiplier)
        return np.sqrt(np.sum(np.abs(self.matrix) ** 2, axis=1))

    def apply_to_vector(self, z: np.ndarray) -> np.ndarray:
        """phi applied to a coefficient vector over driving indices."""
        if self.is_multiplier:
            return self.multiplier * z
        return self.matrix @ z


def bessel_operator(cutoff: int, alpha: float) -> NoiseOperator:
    """Smoothing multiplier phi_n = (1 + n^2)^(-alpha/2); alpha may be <= 0."""
    ns = frequencies(cutoff).astype(np.float64)
    return NoiseOperator(cutoff, multiplier=(1.0 + ns**2) ** (-alpha / 2.0))


def identity_operator(cutoff: int) -> NoiseOperator:
    """phi = Id, the space-time white noise case (alpha = 0)."""
    return bessel_operator(cutoff, 0.0)


def multiplier_operator(values) -> NoiseOperator:
    values = np.asarray(values, dtype=np.float64)
    return NoiseOperator((values.shape[0] - 1) // 2, multiplier=values)


def matrix_operator(mat) -> NoiseOperator:
    mat = np.asarray(mat, dtype=np.complex128)
    return NoiseOperator((mat.shape[0] - 1) // 2, matrix=mat)


@dataclass(frozen=True)
class NoisePath:
    """Per-step complex Gaussian increments zeta_{m,k} with E|zeta|^2 = dt.

    Increments across (m, k) are mutually independent given the seed, and the
    path regenerates bit-identically from (seed, trajectory_id).
    """

    times: np.ndarray = dc_field(repr=False)
    increments: np.ndarray = dc_field(repr=False)  # shape (M, K)
    seed: Optional[int] = None
    trajectory_id: int = 0

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        z = np.asarray(self.increments, dtype=np.complex128)
        if t.ndim != 1 or z.ndim != 2 or z.shape[0] != t.shape[0] - 1:
            raise ValueError("increments must have shape (len(times)-1, K)")
        t = t.copy()
        z = z.copy()
        t.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "increments", z)


@dataclass(frozen=True)
class Trajectory:
    """Time-gridded sequence of spectral states sharing one cutoff.

    failed_at carries the last valid time when a solver aborted on a
    non-finite state; None means the trajectory is clean.
    """

    times: np.ndarray = dc_field(repr=False)
    states: np.ndarray = dc_field(repr=False)  # shape (len(times), 2N+1)
    noise: Optional[NoisePath] = None
    failed_at: Optional[float] = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        s = np.asarray(self.states, dtype=np.complex128)
        if t.ndim != 1 or s.ndim != 2 or s.shape[0] != t.shape[0]:
            raise ValueError("states must have one row per grid time")
        if s.shape[1] % 2 != 1:
            raise ValueError("states must have 2N+1 columns")
        if t.shape[0] > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("time grid must be strictly increasing")
        t = t.copy()
        s = s.copy()
        t.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "states", s)

    @property
    def cutoff(self) -> int:
        return (self.states.shape[1] - 1) // 2

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    def field(self, m: int) -> SpectralField:
        return make_field(self.cutoff, self.states[m])

    def state_at(self, t: float) -> SpectralField:
        m = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[m] - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"time {t} not on the grid")
        return self.field(m)


def make_grid(horizon: float, steps: int) -> np.ndarray:
    """Uniform grid 0 = t_0 < ... < t_M = horizon with M = steps."""
    if horizon <= 0 or steps < 1:
        raise ValueError("horizon must be positive and steps >= 1")
    return np.linspace(0.0, horizon, steps + 1)


def _check_uniform(times: np.ndarray) -> float:
    """Returns dt; raises on a non-uniform grid."""
    if len(times) < 2:
        return 0.0
    diffs = np.diff(times)
    dt = float(diffs[0])
    if dt <= 0 or np.max(np.abs(diffs - dt)) > 1e-9 * dt:
        raise ValueError("time grid must be uniform")
    return dt


def philox_stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based stream keyed by (seed, *key); disjoint for distinct keys."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, key)])))


def sample_white_noise_field(cutoff: int, variance: float, rng: np.random.Generator) -> SpectralField:
    """u_hat(n) = sigma * g_n with g_n iid standard complex Gaussian.

    E|g_n|^2 = 1: real and imaginary parts each have variance 1/2.
    """
    if variance < 0:
        raise ValueError("variance must be non-negative")
    dim = 2 * cutoff + 1
    g = (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / np.sqrt(2.0)
    return make_field(cutoff, np.sqrt(variance) * g)


def _draw_increments(rng: np.random.Generator, steps: int, dim: int, dt: float) -> np.ndarray:
    # One block draw per path: the stream layout is independent of how steps
    # or modes are later traversed.
    re = rng.standard_normal((steps, dim))
    im = rng.standard_normal((steps, dim))
    return (re + 1j * im) * np.sqrt(dt / 2.0)


def sample_noise_path(cutoff: int, grid, seed: int, trajectory_id: int = 0) -> NoisePath:
    """Increment block for one trajectory from its own Philox stream."""
    times = np.asarray(grid, dtype=np.float64)
    dt = _check_uniform(times)
    rng = philox_stream(seed, trajectory_id)
    z = _draw_increments(rng, len(times) - 1, 2 * cutoff + 1, dt)
    return NoisePath(times, z, seed=seed, trajectory_id=trajectory_id)


def convolution_from_path(op: NoiseOperator, path: NoisePath) -> Trajectory:
    """Deterministic map from an increment block to the convolution trajectory."""
    times = path.times
    dim = 2 * op.cutoff + 1
    if path.increments.shape[1] != dim:
        raise ValueError("path increment width does not match operator cutoff")
    dt = _check_uniform(times)
    ns = frequencies(op.cutoff).astype(np.float64)
    prop = np.exp(1j * dt * ns**2)
    states = np.zeros((len(times), dim), dtype=np.complex128)
    cur = np.zeros(dim, dtype=np.complex128)
    for m in range(len(times) - 1):
        cur = prop * cur + op.apply_to_vector(path.increments[m])
        states[m + 1] = cur
    return Trajectory(times, states, noise=path)


def sample_convolution_path(op: NoiseOperator, grid, rng: np.random.Generator) -> Trajectory:
    """Stochastic convolution sample: psi_hat(0) = 0 and

        psi_hat(t_{m+1}, n) = exp(i dt n^2) psi_hat(t_m, n) + (phi zeta_m)(n).

    Exact in distribution at the grid points; the marginal at t_m is complex
    Gaussian with per-mode variance |phi_n|^2 t_m in the multiplier case.
    """
    times = np.asarray(grid, dtype=np.float64)
    dt = _check_uniform(times)
    z = _draw_increments(rng, len(times) - 1, 2 * op.cutoff + 1, dt)
    return convolution_from_path(op, NoisePath(times, z))


def convolution_paths_block(op: NoiseOperator, grid, rng: np.random.Generator, n_paths: int) -> np.ndarray:
    """Vectorized ensemble of convolution samples.

    Returns states of shape (n_paths, len(grid), 2N+1).  Same per-mode law as
    sample_convolution_path; increments are drawn as one (paths, steps, modes)
    block so the result depends only on the generator state, not on batching.
    """
    times = np.asarray(grid, dtype=np.float64)
    dt = _check_uniform(times)
    dim = 2 * op.cutoff + 1
    steps = len(times) - 1
    re = rng.standard_normal((n_paths, steps, dim))
    im = rng.standard_normal((n_paths, steps, dim))
    z = (re + 1j * im) * np.sqrt(dt / 2.0)
    ns = frequencies(op.cutoff).astype(np.float64)
    prop = np.exp(1j * dt * ns**2)
    out = np.zeros((n_paths, steps + 1, dim), dtype=np.complex128)
    cur = np.zeros((n_paths, dim), dtype=np.complex128)
    for m in range(steps):
        if op.is_multiplier:
            kick = op.multiplier * z[:, m, :]
        else:
            kick = z[:, m, :] @ op.matrix.T
        cur = prop * cur + kick
        out[:, m + 1, :] = cur
    return out


def convolution_variance(op: NoiseOperator, t: float, n: int) -> float:
    """Exact second moment of psi_hat(t, n): t * sum_k |phi(e_k)(n)|^2."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if abs(n) > op.cutoff:
        raise ValueError(f"frequency {n} outside cutoff {op.cutoff}")
    row = op.row_l2()[n + op.cutoff]
    return float(t * row**2)


def moment_bound_check(coeffs, p: float, samples: int, rng: np.random.Generator) -> float:
    """Empirical L^p norm of sum a_n g_n divided by sqrt(p) * ||a||_{l2}.

    The Gaussian moment equivalence says this ratio is bounded by an absolute
    constant over p >= 2 and arbitrary coefficient sequences.
    """
    a = np.asarray(coeffs, dtype=np.complex128)
    if p < 2:
        raise ValueError("p must be >= 2")
    g = (rng.standard_normal((samples, a.shape[0])) + 1j * rng.standard_normal((samples, a.shape[0]))) / np.sqrt(2.0)
    x = g @ a
    lp = float(np.mean(np.abs(x) ** p) ** (1.0 / p))
    l2 = float(np.sqrt(np.sum(np.abs(a) ** 2)))
    if l2 == 0:
        raise ValueError("coefficient sequence must be non-zero")
    return lp / (np.sqrt(p) * l2)


def trajectory_to_csv(traj: Trajectory) -> str:
    """CSV serialization: header `t,n,re,im`, grid-major then frequency."""
    ns = frequencies(traj.cutoff)
    lines = ["t,n,re,im"]
    for m, t in enumerate(traj.times):
        row = traj.states[m]
        for n, c in zip(ns, row):
            lines.append(f"{float(t)!r},{n},{float(c.real)!r},{float(c.imag)!r}")
    return "\n".join(lines) + "\n"


def trajectory_from_csv(text: str) -> Trajectory:
    rows = text.strip().splitlines()
    if not rows or rows[0].strip() != "t,n,re,im":
        raise ValueError("expected header 't,n,re,im'")
    ts, recs = [], {}
    for ln in rows[1:]:
        st, sn, sre, sim = ln.split(",")
        t = float(st)
        if not ts or t != ts[-1]:
            ts.append(t)
        recs.setdefault(t, []).append(complex(float(sre), float(sim)))
    states = np.asarray([recs[t] for t in ts], dtype=np.complex128)
    return Trajectory(np.asarray(ts), states)


def operator_to_csv(op: NoiseOperator) -> str:
    """Multiplier: `n,phi_n` rows.  Matrix: `n,k,re,im` rows."""
    ns = frequencies(op.cutoff)
    if op.is_multiplier:
        lines = ["n,phi_n"]
        for n, v in zip(ns, op.multiplier):
            lines.append(f"{n},{float(v)!r}")
    else:
        lines = ["n,k,re,im"]
        for i, n in enumerate(ns):
            for j, k in enumerate(ns):
                c = op.matrix[i, j]
                lines.append(f"{n},{k},{float(c.real)!r},{float(c.imag)!r}")
    return "\n".join(lines) + "\n"
