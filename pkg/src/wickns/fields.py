"""Truncated Fourier representation of periodic complex fields.

A field u on the torus is stored by its coefficients u_hat(n) for integer
frequencies n in [-N, N].  The Laplacian eigenvalue on the mode e_n is -n^2,
so the free Schroedinger propagator acts as the diagonal multiplier
exp(i*t*n^2), which has unit modulus for every t and n.  All dynamics in this
package live in coefficient space; physical-space evaluation exists for
output only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SpectralField",
    "make_field",
    "zero_field",
    "mode_field",
    "frequencies",
    "apply_linear_propagator",
    "propagator_phases",
    "convolve",
    "project",
    "evaluate",
    "field_to_csv",
    "field_from_csv",
]


def frequencies(cutoff: int) -> np.ndarray:
    """Integer frequency range -N..N for a given cutoff."""
    return np.arange(-cutoff, cutoff + 1)


@dataclass(frozen=True)
class SpectralField:
    """Coefficient vector of a truncated periodic field.

    coeffs[i] is the amplitude of frequency i - cutoff; the array has exactly
    2*cutoff + 1 entries and is frozen after construction.
    """

    cutoff: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("cutoff must be a non-negative integer")
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.shape[0] != 2 * self.cutoff + 1:
            raise ValueError(
                f"expected {2 * self.cutoff + 1} coefficients, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("coefficients must be finite")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def ns(self) -> np.ndarray:
        return frequencies(self.cutoff)

    def coeff(self, n: int) -> complex:
        """Amplitude of frequency n (0 outside the truncation)."""
        if abs(n) > self.cutoff:
            return 0j
        return complex(self.coeffs[n + self.cutoff])

    def mass(self) -> float:
        """Parseval mass: sum |u_hat(n)|^2."""
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def __add__(self, other: "SpectralField") -> "SpectralField":
        _check_same_cutoff(self, other)
        return SpectralField(self.cutoff, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        _check_same_cutoff(self, other)
        return SpectralField(self.cutoff, self.coeffs - other.coeffs)

    def __mul__(self, scalar: complex) -> "SpectralField":
        return SpectralField(self.cutoff, self.coeffs * scalar)

    __rmul__ = __mul__

    def allclose(self, other: "SpectralField", tol: float = 1e-12) -> bool:
        _check_same_cutoff(self, other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= tol)


def _check_same_cutoff(f: SpectralField, g: SpectralField) -> None:
    if f.cutoff != g.cutoff:
        raise ValueError(f"cutoff mismatch: {f.cutoff} != {g.cutoff}")


def make_field(cutoff: int, coeffs) -> SpectralField:
    """Field with frequencies -N..N bound to the given amplitudes in order."""
    return SpectralField(cutoff, np.asarray(coeffs, dtype=np.complex128))


def zero_field(cutoff: int) -> SpectralField:
    return SpectralField(cutoff, np.zeros(2 * cutoff + 1, dtype=np.complex128))


def mode_field(cutoff: int, n: int, amplitude: complex = 1.0) -> SpectralField:
    """The single mode amplitude * e_n."""
    if abs(n) > cutoff:
        raise ValueError(f"frequency {n} outside cutoff {cutoff}")
    c = np.zeros(2 * cutoff + 1, dtype=np.complex128)
    c[n + cutoff] = amplitude
    return SpectralField(cutoff, c)


def propagator_phases(cutoff: int, t: float) -> np.ndarray:
    """Diagonal multiplier exp(i*t*n^2) on the truncated basis."""
    ns = frequencies(cutoff).astype(np.float64)
    return np.exp(1j * t * ns**2)


def apply_linear_propagator(f: SpectralField, t: float) -> SpectralField:
    """Free evolution: u_hat(n) -> exp(i*t*n^2) * u_hat(n).

    Unit-modulus phases, so every Fourier-Lebesgue norm is preserved exactly.
    """
    return SpectralField(f.cutoff, f.coeffs * propagator_phases(f.cutoff, t))


def convolve(f: SpectralField, g: SpectralField) -> SpectralField:
    """Exact truncated product convolution h(n) = sum_k f(k) g(n-k).

    Both inputs must share one cutoff; output frequencies outside [-N, N]
    are discarded.
    """
    _check_same_cutoff(f, g)
    N = f.cutoff
    full = np.convolve(f.coeffs, g.coeffs)  # frequencies -2N..2N
    return SpectralField(N, full[N : 3 * N + 1])


def project(f: SpectralField, M: int) -> SpectralField:
    """Sharp frequency truncation: zero all coefficients with |n| > M."""
    if M > f.cutoff:
        raise ValueError(f"projection level {M} exceeds cutoff {f.cutoff}")
    if M < 0:
        raise ValueError("projection level must be non-negative")
    c = f.coeffs.copy()
    ns = f.ns
    c[np.abs(ns) > M] = 0
    return SpectralField(f.cutoff, c)


def evaluate(f: SpectralField, gridpoints: int) -> np.ndarray:
    """Samples of sum_n u_hat(n) e^{2 pi i n x_j} on the uniform grid.

    gridpoints must be at least 2N+1 so the forward transform can recover the
    coefficients without aliasing.
    """
    N = f.cutoff
    if gridpoints < 2 * N + 1:
        raise ValueError(
            f"need at least {2 * N + 1} gridpoints to avoid aliasing, got {gridpoints}"
        )
    spec = np.zeros(gridpoints, dtype=np.complex128)
    spec[: N + 1] = f.coeffs[N:]  # frequencies 0..N
    if N > 0:
        spec[-N:] = f.coeffs[:N]  # frequencies -N..-1
    return np.fft.ifft(spec) * gridpoints


def field_to_csv(f: SpectralField) -> str:
    """CSV serialization: header `n,re,im`, one row per frequency."""
    lines = ["n,re,im"]
    for n, c in zip(f.ns, f.coeffs):
        lines.append(f"{n},{float(c.real)!r},{float(c.imag)!r}")
    return "\n".join(lines) + "\n"


def field_from_csv(text: str) -> SpectralField:
    rows = [ln for ln in text.strip().splitlines()]
    if not rows or rows[0].strip() != "n,re,im":
        raise ValueError("expected header 'n,re,im'")
    ns, vals = [], []
    for ln in rows[1:]:
        sn, sre, sim = ln.split(",")
        ns.append(int(sn))
        vals.append(complex(float(sre), float(sim)))
    ns_arr = np.asarray(ns)
    N = (len(ns) - 1) // 2
    if len(ns) != 2 * N + 1 or not np.array_equal(ns_arr, frequencies(N)):
        raise ValueError("rows must cover contiguous frequencies -N..N")
    return make_field(N, vals)
