"""Matrix permanents via the Glynn formula with Gray-code updates.

The Glynn formula evaluates an n x n permanent in O(2^n * n) by walking
sign vectors in Gray-code order so each step updates a single running
column sum.  Kernels are JIT-compiled with numba when available; a pure
numpy path is kept as a fallback.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _glynn(a):
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    # running sums for delta = (+1, ..., +1)
    sums = np.zeros(n, dtype=np.complex128)
    for j in range(n):
        for i in range(n):
            sums[j] += a[i, j]
    prod = 1.0 + 0.0j
    for j in range(n):
        prod *= sums[j]
    acc = prod
    sign = 1.0
    gray = 0
    for k in range(1, 2 ** (n - 1)):
        # bit flipped between consecutive Gray codes; delta_0 stays +1
        new_gray = k ^ (k >> 1)
        bit = new_gray ^ gray
        gray = new_gray
        row = 1
        while not (bit & 1):
            bit >>= 1
            row += 1
        direction = -2.0 if (gray >> (row - 1)) & 1 else 2.0
        for j in range(n):
            sums[j] += direction * a[row, j]
        sign = -sign
        prod = 1.0 + 0.0j
        for j in range(n):
            prod *= sums[j]
        acc += sign * prod
    return acc / 2 ** (n - 1)


def permanent(matrix) -> complex:
    """Permanent of a square complex matrix."""
    a = np.ascontiguousarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("permanent requires a square matrix")
    return complex(_glynn(a))


@njit(cache=True)
def _sector_amplitudes(colmat, outputs, norms):
    """Permanents of row-expanded submatrices for a batch of outputs.

    colmat: (D, N) input-column matrix (columns already repeated per the
    input occupation); outputs: (d, D) int64 occupations; norms: (d,)
    precomputed 1/sqrt(prod n_in! * prod n_out!).
    """
    d, D = outputs.shape
    N = colmat.shape[1]
    out = np.zeros(d, dtype=np.complex128)
    sub = np.empty((N, N), dtype=np.complex128)
    for t in range(d):
        r = 0
        for i in range(D):
            for _ in range(outputs[t, i]):
                for j in range(N):
                    sub[r, j] = colmat[i, j]
                r += 1
        out[t] = _glynn(sub) * norms[t]
    return out
