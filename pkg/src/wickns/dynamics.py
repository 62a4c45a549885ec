"""Wick-ordered cubic dynamics on the truncated basis.

The renormalized nonlinearity is N(u) = (|u|^2 - 2 M) u with M the Parseval
mass sum |u_hat(n)|^2.  Truncation semantics are P_N(|P_N u|^2 P_N u): the
cubic product is formed with its full frequency band [-3N, 3N] and only the
final result is truncated, which is what makes the resonant/non-resonant
split an exact identity at finite N.

Two solution procedures are provided: a first-order exponential Euler
stepper for the mild formulation (exact linear flow, exact-in-law noise
increments) and a Picard iteration sharing the same left-endpoint Duhamel
quadrature, so a converged Picard fixed point reproduces the stepper's
trajectory.  A batched 4th-order interaction-picture integrator backs the
Monte-Carlo ensemble studies, where the first-order stepper's per-step mass
inflation is unaffordable at white-noise-scale data.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .fields import SpectralField, frequencies, make_field
from .noise import NoiseOperator, NoisePath, Trajectory, _check_uniform, philox_stream
from .norms import TimeWindow, XsbParams, discrete_duhamel, xsb_norm

__all__ = [
    "SolverConfig",
    "WickSplit",
    "PicardReport",
    "wick_nonlinearity_direct",
    "cubic_nonlinearity",
    "wick_trilinear",
    "gauge_transform",
    "step_exponential_euler",
    "solve",
    "picard_iterate",
    "cubic_coeffs_block",
    "wick_coeffs_block",
    "evolve_wick_rk4ip",
]

INTEGRATORS = ("exponential-euler", "picard")
NONLINEARITIES = ("wick", "cubic", "none")


@dataclass(frozen=True)
class SolverConfig:
    cutoff: int
    dt: float
    horizon: float
    integrator: str = "exponential-euler"
    picard_max_iters: int = 25
    picard_tolerance: float = 1e-10
    seed: int = 0
    ensemble_size: int = 1

    def __post_init__(self):
        if self.integrator not in INTEGRATORS:
            raise ValueError(f"integrator must be one of {INTEGRATORS}")
        if self.dt <= 0 or self.horizon <= 0:
            raise ValueError("dt and horizon must be positive")
        steps = self.horizon / self.dt
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError("dt must divide the horizon")
        if self.picard_tolerance <= 0:
            raise ValueError("picard_tolerance must be positive")

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.dt))

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.steps + 1)


@dataclass(frozen=True)
class WickSplit:
    """Non-resonant and resonant parts; their sum is the renormalized cubic."""

    nonres: SpectralField
    res: SpectralField

    @property
    def total(self) -> SpectralField:
        return self.nonres + self.res


def _fft_length(N: int) -> int:
    # alias-free cubic needs L >= 4N + 1
    L = 1
    while L < 4 * N + 1:
        L *= 2
    return L


def cubic_coeffs_block(U: np.ndarray, N: int) -> np.ndarray:
    """(|u|^2 u)^ on [-N, N] for a block of coefficient rows, full-band
    intermediate via a zero-padded transform (no aliasing for L >= 4N+1)."""
    L = _fft_length(N)
    B = U.shape[0]
    spec = np.zeros((B, L), dtype=np.complex128)
    spec[:, : N + 1] = U[:, N:]
    if N > 0:
        spec[:, L - N :] = U[:, :N]
    phys = np.fft.ifft(spec, axis=1) * L
    w = np.abs(phys) ** 2 * phys
    W = np.fft.fft(w, axis=1) / L
    out = np.empty_like(U)
    out[:, N:] = W[:, : N + 1]
    if N > 0:
        out[:, :N] = W[:, L - N :]
    return out


def wick_coeffs_block(U: np.ndarray, N: int) -> np.ndarray:
    """Renormalized cubic (|u|^2 - 2M) u for a block of coefficient rows."""
    mass = np.sum(np.abs(U) ** 2, axis=1, keepdims=True)
    return cubic_coeffs_block(U, N) - 2.0 * mass * U


def _cubic_coeffs_conv(u: np.ndarray, N: int) -> np.ndarray:
    """Same cubic via two plain convolutions; reference path for single fields."""
    g = np.conj(u[::-1])  # coefficients of conj(u)
    dens = np.convolve(u, g)  # |u|^2 on [-2N, 2N], kept untruncated
    full = np.convolve(dens, u)  # [-3N, 3N]
    return full[2 * N : 4 * N + 1]


def wick_nonlinearity_direct(u: SpectralField) -> SpectralField:
    """(|u|^2 - 2 M) u in coefficient space, truncated to [-N, N] at the end."""
    cubic = _cubic_coeffs_conv(u.coeffs, u.cutoff)
    return make_field(u.cutoff, cubic - 2.0 * u.mass() * u.coeffs)


def cubic_nonlinearity(u: SpectralField) -> SpectralField:
    """Plain |u|^2 u without renormalization, for gauge-equivalence checks."""
    return make_field(u.cutoff, _cubic_coeffs_conv(u.coeffs, u.cutoff))


def wick_trilinear(u1: SpectralField, u2: SpectralField, u3: SpectralField) -> WickSplit:
    """Resonant/non-resonant split of the trilinear form.

    nonres(n) sums u1(n1) conj(u2(n2)) u3(n3) over n = n1 - n2 + n3 with the
    diagonal exclusions n != n1 and n != n3; res(n) = -u1(n) conj(u2(n)) u3(n).
    On the diagonal u1 = u2 = u3 = u the two parts sum to the renormalized
    cubic.  Implemented by direct summation over (n1, n3), independently of
    the convolution route, so agreement with wick_nonlinearity_direct is a
    genuine cross-check.
    """
    if not (u1.cutoff == u2.cutoff == u3.cutoff):
        raise ValueError("cutoff mismatch among the three arguments")
    N = u1.cutoff
    dim = 2 * N + 1
    c1, c2, c3 = u1.coeffs, u2.coeffs, u3.coeffs
    # conj(u2) gathered at n2 = n1 + n3 - n; pad over [-3N, 3N] so every
    # gather index is in range and out-of-band n2 contributes zero.
    pad2 = np.zeros(6 * N + 1, dtype=np.complex128)
    pad2[2 * N : 4 * N + 1] = np.conj(c2)
    outer13 = np.outer(c1, c3)
    idx = np.arange(dim)
    gather_base = idx[:, None] + idx[None, :] + 2 * N  # i1 + i3 + 2N
    nonres = np.empty(dim, dtype=np.complex128)
    for i_n in range(dim):
        term = outer13 * pad2[gather_base - i_n]
        term[i_n, :] = 0.0  # n1 = n excluded
        term[:, i_n] = 0.0  # n3 = n excluded
        nonres[i_n] = term.sum()
    res = -(c1 * np.conj(c2) * c3)
    return WickSplit(make_field(N, nonres), make_field(N, res))


def gauge_transform(traj: Trajectory, sign: int = 1) -> Trajectory:
    """Mass-dependent phase rotation u(t_m) -> exp(-sign * 2 i t_m M(t_m)) u(t_m).

    The modulus of every coefficient is untouched, so all FL norms are
    preserved pointwise in time, and sign=+1 followed by sign=-1 is the
    identity exactly (the mass it reads is unchanged by the phase).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    mass = np.sum(np.abs(traj.states) ** 2, axis=1)
    phase = np.exp(-1j * sign * 2.0 * traj.times * mass)
    return Trajectory(traj.times, traj.states * phase[:, None], noise=traj.noise)


def _nonlinearity_block(U: np.ndarray, N: int, kind: str) -> np.ndarray:
    if kind == "wick":
        return wick_coeffs_block(U, N)
    if kind == "cubic":
        return cubic_coeffs_block(U, N)
    if kind == "none":
        return np.zeros_like(U)
    raise ValueError(f"nonlinearity must be one of {NONLINEARITIES}")


def step_exponential_euler(
    u: SpectralField,
    op: Optional[NoiseOperator],
    dt: float,
    noise_increment: Optional[np.ndarray] = None,
    nonlinearity: str = "wick",
) -> SpectralField:
    """One mild-formulation step:

        u_hat(t+dt, n) = exp(i dt n^2) [u_hat(t, n) + i dt N_hat(u)(n)] - i (phi zeta)(n)

    with zeta the step's exact-in-law complex Gaussian increment.  The
    deterministic part is first-order accurate; with the nonlinearity forced
    off and phi = 0 the step is exactly the free propagator.
    """
    N = u.cutoff
    ns = frequencies(N).astype(np.float64)
    nl = _nonlinearity_block(u.coeffs[None, :], N, nonlinearity)[0]
    new = np.exp(1j * dt * ns**2) * (u.coeffs + 1j * dt * nl)
    if op is not None and noise_increment is not None:
        new = new - 1j * op.apply_to_vector(np.asarray(noise_increment))
    return make_field(N, new)


def solve(
    u0: SpectralField,
    op: Optional[NoiseOperator],
    cfg: SolverConfig,
    rng: Optional[np.random.Generator] = None,
    nonlinearity: str = "wick",
) -> Trajectory:
    """Repeated exponential-Euler steps on the uniform grid.

    Deterministic given (u0, op, cfg, seed): with rng omitted the noise block
    comes from the Philox stream keyed by cfg.seed.  A non-finite state aborts
    the run; the returned trajectory then ends at the last valid time and
    carries failed_at.  integrator="picard" delegates to picard_iterate
    against a convolution sampled from the same increments.
    """
    if u0.cutoff != cfg.cutoff:
        raise ValueError("u0 cutoff does not match the config")
    times = cfg.grid()
    M = cfg.steps
    dim = 2 * cfg.cutoff + 1
    path = None
    if op is not None:
        if op.cutoff != cfg.cutoff:
            raise ValueError("operator cutoff does not match the config")
        if rng is None:
            rng = philox_stream(cfg.seed, 0)
        re = rng.standard_normal((M, dim))
        im = rng.standard_normal((M, dim))
        z = (re + 1j * im) * np.sqrt(cfg.dt / 2.0)
        path = NoisePath(times, z, seed=cfg.seed)

    if cfg.integrator == "picard":
        from .noise import convolution_from_path

        if path is None:
            psi = Trajectory(times, np.zeros((M + 1, dim), dtype=np.complex128))
        else:
            psi = convolution_from_path(op, path)
        report = picard_iterate(u0, op, psi, cfg)
        return report.iterates[-1]

    ns = frequencies(cfg.cutoff).astype(np.float64)
    prop = np.exp(1j * cfg.dt * ns**2)
    states = np.zeros((M + 1, dim), dtype=np.complex128)
    states[0] = u0.coeffs
    cur = u0.coeffs.copy()
    for m in range(M):
        nl = _nonlinearity_block(cur[None, :], cfg.cutoff, nonlinearity)[0]
        cur = prop * (cur + 1j * cfg.dt * nl)
        if path is not None:
            cur = cur - 1j * op.apply_to_vector(path.increments[m])
        if not np.all(np.isfinite(cur.view(np.float64))):
            return Trajectory(
                times[: m + 1], states[: m + 1], noise=path, failed_at=float(times[m])
            )
        states[m + 1] = cur
    return Trajectory(times, states, noise=path)


def evolve_wick_rk4ip(
    U0: np.ndarray,
    phi: Optional[np.ndarray],
    Z: Optional[np.ndarray],
    dt: float,
    steps: int,
    N: int,
    substeps: int = 2,
    record: Optional[list[int]] = None,
) -> np.ndarray:
    """Batched interaction-picture RK4 for the Wick flow with end-of-step
    noise kicks.

    U0: (B, 2N+1) initial coefficient rows.  Z: (B, steps, 2N+1) complex
    Gaussian increments of variance dt (or None for phi = 0).  Each noise
    step is split into `substeps` deterministic RK4 substeps; the kick
    -i phi zeta is applied at the step end, which leaves the per-mode law of
    the linear part exact.  Returns states at the grid indices in `record`
    (default: final time only) as an array (len(record), B, 2N+1).
    """
    ns = frequencies(N).astype(np.float64)
    n2 = ns**2
    h = dt / substeps
    record = [steps] if record is None else record
    rec_set = {int(r) for r in record}
    out = np.empty((len(record), *U0.shape), dtype=np.complex128)
    order = {int(r): i for i, r in enumerate(record)}
    U = U0.astype(np.complex128, copy=True)
    if 0 in rec_set:
        out[order[0]] = U

    def rhs(V: np.ndarray, s: float) -> np.ndarray:
        ph = np.exp(1j * s * n2)
        return 1j * np.conj(ph) * wick_coeffs_block(ph * V, N)

    for m in range(steps):
        V = U  # interaction rep referenced to the step start
        for k in range(substeps):
            s = k * h
            k1 = rhs(V, s)
            k2 = rhs(V + 0.5 * h * k1, s + 0.5 * h)
            k3 = rhs(V + 0.5 * h * k2, s + 0.5 * h)
            k4 = rhs(V + h * k3, s + h)
            V = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        U = np.exp(1j * dt * n2) * V
        if phi is not None and Z is not None:
            U = U - 1j * phi * Z[:, m, :]
        if m + 1 in rec_set:
            out[order[m + 1]] = U
    return out


@dataclass
class PicardReport:
    """Iteration diagnostics of the fixed-point map."""

    iterates: list = dc_field(default_factory=list)
    differences: list = dc_field(default_factory=list)
    ratios: list = dc_field(default_factory=list)
    contraction_factor: Optional[float] = None
    converged: bool = False
    non_contracting: bool = False
    iterations: int = 0


def picard_iterate(
    u0: SpectralField,
    op: Optional[NoiseOperator],
    psi: Trajectory,
    cfg: SolverConfig,
    params: Optional[XsbParams] = None,
    window: Optional[TimeWindow] = None,
) -> PicardReport:
    """Fixed-point iteration of the mild formulation on psi's grid:

        u^(j+1) = S(t) u0 + i Duhamel(N(u^(j))) - i psi,   u^(0) = S(t) u0 - i psi

    with the left-endpoint discrete Duhamel.  Successive differences are
    measured in the windowed restriction-norm surrogate; the contraction
    factor is the geometric mean of the difference ratios.  Three consecutive
    non-contracting ratios abort with a partial report.
    """
    times = psi.times
    dt = _check_uniform(times)
    if abs(dt - cfg.dt) > 1e-9 * cfg.dt or abs(times[-1] - cfg.horizon) > 1e-9:
        raise ValueError("psi must be sampled on the config grid")
    if params is None:
        params = XsbParams(s=0.0, b=0.3, bprime=-0.3, p=2.0, q=2.0, T=float(times[-1]))
    N = u0.cutoff
    ns = frequencies(N).astype(np.float64)
    lin = u0.coeffs[None, :] * np.exp(1j * np.outer(times, ns**2))
    cur = lin - 1j * psi.states
    report = PicardReport()
    report.iterates.append(Trajectory(times, cur))
    bad_streak = 0
    for it in range(cfg.picard_max_iters):
        forcing = wick_coeffs_block(cur, N)
        duh = discrete_duhamel(Trajectory(times, forcing))
        new = lin + 1j * duh.states - 1j * psi.states
        diff = xsb_norm(Trajectory(times, new - cur), params, window)
        report.differences.append(diff)
        report.iterates.append(Trajectory(times, new))
        report.iterations = it + 1
        if len(report.differences) >= 2:
            prev = report.differences[-2]
            ratio = diff / prev if prev > 0 else 0.0
            report.ratios.append(ratio)
            bad_streak = bad_streak + 1 if ratio >= 1.0 else 0
        cur = new
        if diff < cfg.picard_tolerance:
            report.converged = True
            break
        if bad_streak >= 3:
            report.non_contracting = True
            break
    pos = [r for r in report.ratios if r > 0]
    if pos:
        report.contraction_factor = float(np.exp(np.mean(np.log(pos))))
    return report
