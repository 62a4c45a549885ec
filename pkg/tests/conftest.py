import numpy as np
import pytest

from wickns import make_field, philox_stream


@pytest.fixture
def rng():
    return philox_stream(20240817)


def random_field(N, rng, scale=1.0):
    dim = 2 * N + 1
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return make_field(N, scale * z / np.sqrt(2.0))


def brute_convolve(f, g):
    """O(N^2) reference: h(n) = sum_k f(k) g(n-k), truncated to the band."""
    N = f.cutoff
    out = np.zeros(2 * N + 1, dtype=np.complex128)
    for n in range(-N, N + 1):
        acc = 0.0 + 0.0j
        for k in range(-N, N + 1):
            if -N <= n - k <= N:
                acc += f.coeff(k) * g.coeff(n - k)
        out[n + N] = acc
    return make_field(N, out)
