"""Norms: Fourier-Lebesgue, Sobolev (p = 2), gamma-radonifying and
Hilbert-Schmidt operator norms, and a discrete restriction-norm proxy built
from the interaction representation.

The restriction norm of a gridded trajectory u on [0, T] is computed from
one canonical windowed extension: w(t) = S(-t) u(t) is extended to
[-2T, 2T] by its boundary values, multiplied by a C^2 bump that is 1 on
[0, T] and supported in [-2T, 2T], transformed in time by a zero-padded
discrete transform, and measured in l^p_n L^q_tau with weights <n>^s <tau>^b.
This is a quadrature surrogate for the localized norm, not an infimum over
extensions; all inequality checks in this package compare like with like
under the same window.  For a free trajectory u(t) = S(t) f the surrogate
factorizes exactly into (temporal window factor) * (FL norm of f), which the
tests exploit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fields import SpectralField, frequencies, make_field
from .noise import NoiseOperator, Trajectory, _check_uniform

__all__ = [
    "XsbParams",
    "TimeWindow",
    "raised_cosine_ramp",
    "fl_norm",
    "gamma_norm",
    "hs_norm",
    "operator_norm",
    "xsb_norm",
    "xsb_norm_batch",
    "temporal_window_factor",
    "homogeneous_estimate_check",
    "discrete_duhamel",
    "duhamel_estimate_check",
    "bracket",
]

DEFAULT_PAD = 8  # zero-pad factor of the temporal transform
MIN_GRID_POINTS = 16


def bracket(x) -> np.ndarray:
    """Japanese bracket <x> = (1 + x^2)^(1/2), used for both n and tau."""
    x = np.asarray(x, dtype=np.float64)
    return np.sqrt(1.0 + x * x)


@dataclass(frozen=True)
class XsbParams:
    """Exponent tuple (s, b, b', p, q, T) governing the norms and estimates."""

    s: float
    b: float
    bprime: float
    p: float
    q: float
    T: float

    def __post_init__(self):
        if not (0 < self.T <= 1):
            raise ValueError("T must lie in (0, 1]")
        if not (1 < self.p < np.inf and 1 < self.q < np.inf):
            raise ValueError("p and q must lie in (1, inf)")

    @property
    def p_dual(self) -> float:
        return self.p / (self.p - 1.0)

    def trilinear_window_ok(self) -> bool:
        """-1/p < b' < 0 < b < 1 - 1/p, the admissible trilinear window."""
        return -1.0 / self.p < self.bprime < 0.0 < self.b < 1.0 - 1.0 / self.p

    def solution_class_ok(self) -> bool:
        """(b - 1) p < -1, required of the solution-space exponent."""
        return (self.b - 1.0) * self.p < -1.0

    def with_exponent(self, b: float) -> "XsbParams":
        return replace(self, b=b)


def raised_cosine_ramp(v: np.ndarray) -> np.ndarray:
    """C^2 ramp from 0 to 1 on [0, 1]; its derivative is the raised-cosine
    (Hann) window, so first and second derivatives vanish at both ends."""
    v = np.asarray(v, dtype=np.float64)
    return v - np.sin(2.0 * np.pi * v) / (2.0 * np.pi)


@dataclass(frozen=True)
class TimeWindow:
    """C^2 bump eta(t / scale): 1 on [0, scale], supported in [-2 scale, 2 scale]."""

    scale: float = 1.0

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")

    def profile(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=np.float64)
        out = np.zeros_like(u)
        left = (u >= -2.0) & (u < 0.0)
        mid = (u >= 0.0) & (u <= 1.0)
        right = (u > 1.0) & (u <= 2.0)
        out[left] = raised_cosine_ramp((u[left] + 2.0) / 2.0)
        out[mid] = 1.0
        out[right] = 1.0 - raised_cosine_ramp(u[right] - 1.0)
        return out

    def __call__(self, t) -> np.ndarray:
        return self.profile(np.asarray(t, dtype=np.float64) / self.scale)


def fl_norm(f: SpectralField, s: float, p: float) -> float:
    """Fourier-Lebesgue norm (sum <n>^{sp} |u_hat(n)|^p)^(1/p); H^s at p = 2.

    p = inf is the weighted sup over modes.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    w = bracket(f.ns) ** s * np.abs(f.coeffs)
    if np.isinf(p):
        return float(np.max(w))
    return float(np.sum(w**p) ** (1.0 / p))


def gamma_norm(op: NoiseOperator, s: float, p: float) -> float:
    """|| <n>^s (sum_k |phi(e_k)(n)|^2)^(1/2) ||_{l^p_n} over the truncation.

    For the Bessel multiplier this is ||<n>^{s - alpha}||_{l^p}; at p = 2 it
    coincides with the Hilbert-Schmidt norm into H^s.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    w = bracket(frequencies(op.cutoff)) ** s * op.row_l2()
    if np.isinf(p):
        return float(np.max(w))
    return float(np.sum(w**p) ** (1.0 / p))


def hs_norm(op: NoiseOperator, s: float) -> float:
    """Hilbert-Schmidt norm into H^s; equals gamma_norm(op, s, 2) exactly."""
    return gamma_norm(op, s, 2.0)


def operator_norm(op: NoiseOperator, iters: int = 300, tol: float = 1e-13) -> float:
    """l2 -> l2 operator norm by power iteration on A^H A."""
    if op.is_multiplier:
        return float(np.max(np.abs(op.multiplier)))
    a = op.matrix
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(0)))
    dim = a.shape[0]
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = a.conj().T @ (a @ v)
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v_new = w / nw
        if abs(nw - lam) <= tol * max(1.0, nw):
            lam = nw
            break
        lam = nw
        v = v_new
    return float(np.sqrt(lam))


def _validate_xsb_grid(times: np.ndarray, params: XsbParams) -> float:
    dt = _check_uniform(times)
    if len(times) < MIN_GRID_POINTS:
        raise ValueError(f"grid too coarse: need at least {MIN_GRID_POINTS} points")
    if abs(times[0]) > 1e-12 or abs(times[-1] - params.T) > 1e-9 * max(1.0, params.T):
        raise ValueError("trajectory grid must cover [0, T]")
    return dt


def _resolve_window(params: XsbParams, window) -> TimeWindow:
    if window is None:
        return TimeWindow(scale=params.T)
    if abs(window.scale - params.T) > 1e-12 * max(1.0, params.T):
        raise ValueError("window scale must equal params.T for the canonical extension")
    return window


def _modulation_lq(v: np.ndarray, dt: float, b: float, q: float, pad: int) -> np.ndarray:
    """Temporal factor per mode: (sum <tau>^{bq} |V|^q dtau / (2 pi))^(1/q).

    v has shape (..., J, modes); V(tau) = dt * zero-padded FFT along the time
    axis, tau on the discrete transform grid.  A global phase from the grid
    origin drops out of |V|.
    """
    J = v.shape[-2]
    L = pad * J
    V = np.abs(np.fft.fft(v, n=L, axis=-2)) * dt
    tau = 2.0 * np.pi * np.fft.fftfreq(L, d=dt)
    dtau = 2.0 * np.pi / (L * dt)
    wt = bracket(tau) ** (b * q)
    acc = np.einsum("...tm,t->...m", V**q, wt)
    return (acc * dtau / (2.0 * np.pi)) ** (1.0 / q)


def _extend_and_window(states: np.ndarray, times: np.ndarray, params: XsbParams, window: TimeWindow):
    """Windowed boundary-value extension of the interaction representation.

    states: (..., M+1, modes) on the uniform grid over [0, T].  Returns
    (v, dt) with v on the extended grid of 4M+1 points spanning [-2T, 2T].
    """
    dt = _validate_xsb_grid(times, params)
    modes = states.shape[-1]
    N = (modes - 1) // 2
    ns = frequencies(N).astype(np.float64)
    phases = np.exp(-1j * np.outer(times, ns**2))  # S(-t) on each slice
    w = states * phases
    M = len(times) - 1
    J = 4 * M + 1
    i0 = 2 * M
    tj = -2.0 * params.T + dt * np.arange(J)
    v = np.empty(states.shape[:-2] + (J, modes), dtype=np.complex128)
    v[..., :i0, :] = w[..., :1, :]
    v[..., i0 : i0 + M + 1, :] = w
    v[..., i0 + M + 1 :, :] = w[..., -1:, :]
    v *= window(tj)[:, None]
    return v, dt


def xsb_norm(traj: Trajectory, params: XsbParams, window: TimeWindow | None = None, pad: int = DEFAULT_PAD) -> float:
    """Windowed restriction-norm surrogate of a trajectory on [0, T].

    || <n>^s <tau>^b (windowed extension of S(-t)u(t))^(t -> tau) ||_{l^p_n L^q_tau}
    with the temporal transform and L^q_tau both discrete.
    """
    window = _resolve_window(params, window)
    v, dt = _extend_and_window(traj.states, traj.times, params, window)
    tf = _modulation_lq(v, dt, params.b, params.q, pad)
    N = traj.cutoff
    wn = bracket(frequencies(N)) ** params.s
    weighted = wn * tf
    if np.isinf(params.p):
        return float(np.max(weighted))
    return float(np.sum(weighted**params.p) ** (1.0 / params.p))


def xsb_norm_batch(
    states: np.ndarray,
    times: np.ndarray,
    params: XsbParams,
    window: TimeWindow | None = None,
    pad: int = DEFAULT_PAD,
    chunk: int = 64,
) -> np.ndarray:
    """xsb_norm over an ensemble: states of shape (B, M+1, 2N+1) -> (B,).

    Identical numerics to the scalar path; chunked to bound the FFT workspace.
    """
    window = _resolve_window(params, window)
    B = states.shape[0]
    modes = states.shape[-1]
    wn = bracket(frequencies((modes - 1) // 2)) ** params.s
    out = np.empty(B, dtype=np.float64)
    for lo in range(0, B, chunk):
        hi = min(lo + chunk, B)
        v, dt = _extend_and_window(states[lo:hi], times, params, window)
        tf = _modulation_lq(v, dt, params.b, params.q, pad)
        weighted = wn * tf
        out[lo:hi] = np.sum(weighted**params.p, axis=-1) ** (1.0 / params.p)
    return out


def temporal_window_factor(
    params: XsbParams,
    window: TimeWindow | None = None,
    steps: int = 64,
    exponent: float | None = None,
    pad: int = DEFAULT_PAD,
) -> float:
    """Temporal factor || <tau>^b (windowed scalar 1)^ ||_{L^q_tau} on the
    same extended grid and quadrature as xsb_norm.

    For u(t) = S(t) f the surrogate norm equals this factor times
    fl_norm(f, s, p) exactly, because S(-t)u(t) is constant in t.
    """
    window = _resolve_window(params, window)
    b = params.b if exponent is None else exponent
    times = np.linspace(0.0, params.T, steps + 1)
    ones = np.ones((steps + 1, 1), dtype=np.complex128)
    v, dt = _extend_and_window(ones, times, params, window)
    tf = _modulation_lq(v, dt, b, params.q, pad)
    return float(tf[0])


def homogeneous_estimate_check(
    f: SpectralField,
    params: XsbParams,
    window: TimeWindow | None = None,
    steps: int = 64,
    pad: int = DEFAULT_PAD,
) -> float:
    """xsb_norm of the windowed free flow of f divided by fl_norm(f, s, p).

    The ratio is independent of f: it equals the temporal window factor by
    the factorization identity.  Raises on fl_norm(f) = 0.
    """
    denom = fl_norm(f, params.s, params.p)
    if denom == 0:
        raise ValueError("fl_norm of the datum is zero")
    times = np.linspace(0.0, params.T, steps + 1)
    ns = f.ns.astype(np.float64)
    states = f.coeffs[None, :] * np.exp(1j * np.outer(times, ns**2))
    traj = Trajectory(times, states)
    return xsb_norm(traj, params, window, pad) / denom


def discrete_duhamel(F: Trajectory) -> Trajectory:
    """Left-endpoint quadrature of t -> integral_0^t S(t - t') F(t') dt':

        I(t_0) = 0,   I(t_{m+1}) = S(dt) (I(t_m) + dt F(t_m)).

    Matches the first-order exponential stepper's quadrature exactly.
    """
    dt = _check_uniform(F.times)
    ns = frequencies(F.cutoff).astype(np.float64)
    prop = np.exp(1j * dt * ns**2)
    out = np.zeros_like(F.states)
    for m in range(len(F.times) - 1):
        out[m + 1] = prop * (out[m] + dt * F.states[m])
    return Trajectory(F.times, out)


def duhamel_estimate_check(
    F: Trajectory,
    params: XsbParams,
    window: TimeWindow | None = None,
    pad: int = DEFAULT_PAD,
) -> tuple[float, float]:
    """Returns (||Duhamel(F)|| at exponent b, ||F|| at exponent b').

    Exponent window: -1/q < b' <= 0 <= b <= 1 + b'.  The inhomogeneous linear
    estimate asserts lhs <= C T^{1 + b' - b} rhs with C independent of T.
    """
    p = params
    if not (-1.0 / p.q < p.bprime <= 0.0 <= p.b <= 1.0 + p.bprime):
        raise ValueError("exponent window violated: need -1/q < b' <= 0 <= b <= 1 + b'")
    lhs = xsb_norm(discrete_duhamel(F), params, window, pad)
    rhs = xsb_norm(F, params.with_exponent(params.bprime), window, pad)
    return lhs, rhs
