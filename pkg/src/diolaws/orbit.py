"""Blocks of signed distances <n alpha> for many angles at once.

Dyadic angles are advanced in 128-bit fixed point held as two uint64
words, so every distance is exact until it is cast to float, which
costs at most a couple of ulps.
Each angle occupies one row, and rows never interact.
"""

from __future__ import annotations

import numpy as np

from .sums import SingularTermError

BLOCK = 1024
_M64 = (1 << 64) - 1
_HALF = np.uint64(1 << 63)


def _words(values):
    hi = np.array([(v >> 64) & _M64 for v in values], dtype=np.uint64)
    lo = np.array([v & _M64 for v in values], dtype=np.uint64)
    return hi, lo


def _add(ah, al, bh, bl):
    lo = al + bl
    hi = ah + bh + (lo < al).astype(np.uint64)
    return hi, lo


def _to_signed_float(hi, lo):
    neg = (hi > _HALF) | ((hi == _HALF) & (lo > 0))
    nlo = np.where(neg, np.uint64(0) - lo, lo)
    nhi = np.where(neg, ~hi + (lo == 0).astype(np.uint64), hi)
    d = nhi.astype(np.float64) * 2.0**-64 + nlo.astype(np.float64) * 2.0**-128
    return np.where(neg, -d, d)


def _dyadic_blocks(numerators, N, block):
    M = len(numerators)
    a_hi, a_lo = _words(numerators)
    # J[:, j] = (j + 1) * alpha, so a block starting at n0 holds (n0 - 1) alpha + J
    J_hi = np.empty((M, block), dtype=np.uint64)
    J_lo = np.empty((M, block), dtype=np.uint64)
    h, l = a_hi.copy(), a_lo.copy()
    for j in range(block):
        J_hi[:, j], J_lo[:, j] = h, l
        h, l = _add(h, l, a_hi, a_lo)
    step_hi, step_lo = J_hi[:, -1].copy(), J_lo[:, -1].copy()
    base_hi = np.zeros(M, dtype=np.uint64)
    base_lo = np.zeros(M, dtype=np.uint64)
    for start in range(1, N + 1, block):
        lo = base_lo[:, None] + J_lo
        hi = base_hi[:, None] + J_hi + (lo < J_lo).astype(np.uint64)
        yield start, _to_signed_float(hi, lo), (hi == 0) & (lo == 0)
        base_hi, base_lo = _add(base_hi, base_lo, step_hi, step_lo)


def _rational_blocks(angles, N, block):
    P = np.array([a.numerator for a in angles], dtype=np.int64)[:, None]
    Q = np.array([a.denominator for a in angles], dtype=np.int64)[:, None]
    if int(Q.max()) * (N + block) >= (1 << 62):
        raise ValueError("rational angle too large for 64-bit orbit")
    for start in range(1, N + 1, block):
        n = np.arange(start, start + block, dtype=np.int64)[None, :]
        r = (n * P) % Q
        r = np.where(2 * r > Q, r - Q, r)
        yield start, r / Q, r == 0


def signed_distance_blocks(angles, N: int, block: int = BLOCK):
    """Yield (n, d, valid) with d[i, j] = <n_j alpha_i> for n_j = n[j] <= N.

    Columns past N are present but flagged invalid so that every block
    has the same shape; a zero distance at a valid column raises.
    """
    angles = list(angles)
    if not angles:
        return
    if all(a.dyadic for a in angles):
        gen = _dyadic_blocks([a.numerator for a in angles], N, block)
    elif not any(a.dyadic for a in angles):
        gen = _rational_blocks(angles, N, block)
    else:
        raise ValueError("cannot mix dyadic and rational angles in one batch")
    for start, d, zero in gen:
        n = np.arange(start, start + block, dtype=np.float64)
        valid = n <= N
        hit = zero & valid[None, :]
        if hit.any():
            raise SingularTermError(int(n[np.argmax(hit.any(axis=0))]))
        yield n, d, valid


class Accumulator:
    """Per-row compensated running sums, independent of how rows are grouped."""

    def __init__(self, rows: int, columns: int):
        self.s = np.zeros((rows, columns))
        self.c = np.zeros((rows, columns))

    def add(self, column: int, x):
        s = self.s[:, column]
        t = s + x
        self.c[:, column] += np.where(np.abs(s) >= np.abs(x), (s - t) + x, (x - t) + s)
        self.s[:, column] = t

    def total(self):
        return self.s + self.c
