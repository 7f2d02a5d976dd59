"""Pure-NumPy versions of the hot kernels (fallback for the compiled core)."""

import numpy as np


def single_copy_mask(d):
    i, j, k, l = np.indices((d, d, d, d))
    keep = ((i == k) & (j == l)) | ((i == j) & (k == l))
    return keep.reshape(d * d, d * d)


def pinch_mask(d, n):
    one = single_copy_mask(d)
    mask = one
    for _ in range(n - 1):
        mask = np.kron(mask, one).astype(bool)
    return mask


def pinch(matrix, d, n):
    """Zero every entry outside the n-copy survival pattern."""
    mask = pinch_mask(d, n)
    return np.where(mask, matrix, 0.0).astype(complex)


def off_pattern_max(matrix, d, n):
    mask = pinch_mask(d, n)
    return float(np.max(np.abs(np.where(mask, 0.0, matrix)), initial=0.0))


def type2_extremes(dn, wn, m):
    """Extreme eigenvalues over all 2x2 Type-II compressions.

    For every pair of (n-1)-copy basis states (p1, p2) and indices i != j the
    compression is [[dn[p1] m_ii, wn[p1,p2] m_ij], [c.c., dn[p2] m_jj]].
    Returns (lo, hi, argmin) with argmin = (p1, p2, i, j).
    """
    dn = np.asarray(dn, dtype=float)
    wn = np.asarray(wn, dtype=complex)
    m = np.asarray(m, dtype=complex)
    d = m.shape[0]
    lo, hi, arg = np.inf, -np.inf, None
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            p = dn[:, None] * m[i, i].real
            q = dn[None, :] * m[j, j].real
            c = wn * m[i, j]
            mid = 0.5 * (p + q)
            rad = np.sqrt((0.5 * (p - q)) ** 2 + (c.real ** 2 + c.imag ** 2))
            low = mid - rad
            k = int(np.argmin(low))
            if low.flat[k] < lo:
                lo = float(low.flat[k])
                arg = (*divmod(k, dn.shape[0]), i, j)
            hi = max(hi, float(np.max(mid + rad)))
    return lo, hi, arg
