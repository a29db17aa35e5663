"""Row-range stencil kernels shared by the serial and parallel engines.

Each kernel reads whole input arrays and writes only rows ``[r0, r1)`` of its
output, so disjoint row ranges can run concurrently without locks. They are
compiled with ``nogil=True`` so worker threads actually overlap.
"""

import math

import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def cardinality_rows(img, alpha, beta, out, r0, r1):
    height, width = img.shape
    for r in range(r0, r1):
        i_lo = max(0, r - beta)
        i_hi = min(height, r + beta + 1)
        for c in range(width):
            center = np.int64(img[r, c])
            j_lo = max(0, c - beta)
            j_hi = min(width, c + beta + 1)
            n = 0
            for i in range(i_lo, i_hi):
                for j in range(j_lo, j_hi):
                    d = np.int64(img[i, j]) - center
                    if -alpha < d < alpha:
                        n += 1
            out[r, c] = n


@njit(nogil=True, cache=True)
def removal_rows(img, card, alpha, beta, threshold, faithful, out, r0, r1):
    """Write rows ``[r0, r1)`` of the pass output; return (flagged, replaced)."""
    height, width = img.shape
    window = (2 * beta + 1) * (2 * beta + 1)
    flagged = 0
    replaced = 0
    for r in range(r0, r1):
        i_lo = max(0, r - beta)
        i_hi = min(height, r + beta + 1)
        for c in range(width):
            out[r, c] = img[r, c]
            if card[r, c] >= threshold:
                continue
            flagged += 1
            center = np.int64(img[r, c])
            j_lo = max(0, c - beta)
            j_hi = min(width, c + beta + 1)
            if faithful:
                pix_count = window
            else:
                pix_count = (i_hi - i_lo) * (j_hi - j_lo)
            sq_sum = np.int64(0)
            flag = 0
            for i in range(i_lo, i_hi):
                for j in range(j_lo, j_hi):
                    v = np.int64(img[i, j])
                    d = v - center
                    if not (-alpha < d < alpha):
                        sq_sum += v * v
                        flag += 1
            # tiny InBounds windows can pass the test with no dissimilar cell at all
            if flag > 0 and flag > pix_count - 3:
                rms = min(255, max(0, math.floor(math.sqrt(sq_sum / flag) + 0.5)))
                # a rewrite that reproduces the input value is not a replacement
                if rms != center:
                    out[r, c] = rms
                    replaced += 1
    return flagged, replaced

