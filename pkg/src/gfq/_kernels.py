"""Compiled inner loops for the amplitude recurrence, its adjoint and permanents."""

import numpy as np
from numba import njit


@njit(cache=True)
def _row_major_strides(cutoffs):
    ell = cutoffs.shape[0]
    strides = np.ones(ell, dtype=np.int64)
    for ax in range(ell - 2, -1, -1):
        strides[ax] = strides[ax + 1] * cutoffs[ax + 1]
    return strides


@njit(cache=True)
def hermite_fill(A, b, c, cutoffs):
    """Fill the renormalized Hermite tensor in lexicographic order.

    Each index ``k`` is reached from ``k - 1_i`` with ``i`` the first non-zero
    axis of ``k``; all neighbours used by the recurrence precede ``k``.
    """
    ell = cutoffs.shape[0]
    total = 1
    for ax in range(ell):
        total *= cutoffs[ax]
    strides = _row_major_strides(cutoffs)
    out = np.zeros(total, dtype=np.complex128)
    kmax = 1
    for ax in range(ell):
        kmax = max(kmax, cutoffs[ax])
    sqrt = np.sqrt(np.arange(kmax + 1).astype(np.float64))
    k = np.zeros(ell, dtype=np.int64)
    out[0] = c
    for flat in range(1, total):
        ax = ell - 1
        while True:
            k[ax] += 1
            if k[ax] < cutoffs[ax]:
                break
            k[ax] = 0
            ax -= 1
        i = 0
        while k[i] == 0:
            i += 1
        prev = flat - strides[i]
        val = b[i] * out[prev]
        for j in range(ell):
            kj = k[j] - 1 if j == i else k[j]
            if kj > 0:
                val += sqrt[kj] * A[i, j] * out[prev - strides[j]]
        out[flat] = val / sqrt[k[i]]
    return out


@njit(cache=True)
def hermite_vjp(G, upstream, c, cutoffs):
    """Contract ``upstream`` with the derivatives of ``G`` w.r.t. ``(A, b, c)``."""
    ell = cutoffs.shape[0]
    total = G.shape[0]
    strides = _row_major_strides(cutoffs)
    kmax = 1
    for ax in range(ell):
        kmax = max(kmax, cutoffs[ax])
    sqrt = np.sqrt(np.arange(kmax + 1).astype(np.float64))
    dA = np.zeros((ell, ell), dtype=np.complex128)
    db = np.zeros(ell, dtype=np.complex128)
    dc = 0j
    k = np.zeros(ell, dtype=np.int64)
    for flat in range(total):
        if flat > 0:
            ax = ell - 1
            while True:
                k[ax] += 1
                if k[ax] < cutoffs[ax]:
                    break
                k[ax] = 0
                ax -= 1
        u = upstream[flat]
        if u == 0:
            continue
        dc += u * G[flat]
        for i in range(ell):
            if k[i] == 0:
                continue
            lower = flat - strides[i]
            db[i] += u * sqrt[k[i]] * G[lower]
            for j in range(ell):
                kj = k[j] - 1 if j == i else k[j]
                if kj > 0:
                    dA[i, j] += 0.5 * u * sqrt[k[i]] * sqrt[kj] * G[lower - strides[j]]
    return dA, db, dc / c


@njit(cache=True)
def ryser_permanent(mat):
    """Permanent by Ryser's inclusion-exclusion formula with Gray-code updates."""
    n = mat.shape[0]
    if n == 0:
        return 1.0 + 0j
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0j
    sign_n = -1.0 if n % 2 else 1.0
    gray_prev = 0
    for step in range(1, 1 << n):
        gray = step ^ (step >> 1)
        diff = gray ^ gray_prev
        col = 0
        while (diff >> col) & 1 == 0:
            col += 1
        if gray & diff:
            for r in range(n):
                row_sums[r] += mat[r, col]
        else:
            for r in range(n):
                row_sums[r] -= mat[r, col]
        gray_prev = gray
        prod = 1.0 + 0j
        for r in range(n):
            prod *= row_sums[r]
        bits = 0
        g = gray
        while g:
            bits += g & 1
            g >>= 1
        total += (-1.0 if bits % 2 else 1.0) * prod
    return sign_n * total
