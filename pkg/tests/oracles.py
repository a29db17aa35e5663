"""Brute-force pure-Python references, independent of the compiled kernels.

Images are plain nested lists ``rows[r][c]``.
"""

import math
import threading


def to_rows(img):
    return [list(row) for row in img.pixels.tolist()]


def _sim(a, b, alpha):
    return abs(a - b) < alpha


def window(r, c, beta, height, width):
    """All (i, j) in the square window, in-bounds or not."""
    return [(i, j) for i in range(r - beta, r + beta + 1) for j in range(c - beta, c + beta + 1)]


def in_bounds(i, j, height, width):
    return 0 <= i < height and 0 <= j < width


def cardinality_gather(rows, alpha, beta):
    h, w = len(rows), len(rows[0])
    out = [[0] * w for _ in range(h)]
    for r in range(h):
        for c in range(w):
            out[r][c] = sum(
                1 for i, j in window(r, c, beta, h, w)
                if in_bounds(i, j, h, w) and _sim(rows[i][j], rows[r][c], alpha)
            )
    return out


def cardinality_scatter(rows, alpha, beta, threads=4):
    """Each pixel increments the counter of every similar neighbor, from
    several threads, with a lock standing in for an atomic add."""
    h, w = len(rows), len(rows[0])
    card = [[0] * w for _ in range(h)]
    lock = threading.Lock()

    def work(pixels):
        for r, c in pixels:
            for i, j in window(r, c, beta, h, w):
                if in_bounds(i, j, h, w) and _sim(rows[i][j], rows[r][c], alpha):
                    with lock:
                        card[i][j] += 1

    coords = [(r, c) for r in range(h) for c in range(w)]
    chunks = [coords[t::threads] for t in range(threads)]
    ts = [threading.Thread(target=work, args=(ch,)) for ch in chunks]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    return card


def removal_pass(rows, card, alpha, beta, threshold=3, faithful=True):
    """Returns (new_rows, flagged, replaced)."""
    h, w = len(rows), len(rows[0])
    out = [row[:] for row in rows]
    flagged = replaced = 0
    for r in range(h):
        for c in range(w):
            if card[r][c] >= threshold:
                continue
            flagged += 1
            center = rows[r][c]
            pix_count = 0
            dissimilar = []
            for i, j in window(r, c, beta, h, w):
                if faithful:
                    pix_count += 1
                if not in_bounds(i, j, h, w):
                    continue
                if not faithful:
                    pix_count += 1
                if not _sim(rows[i][j], center, alpha):
                    dissimilar.append(rows[i][j])
            flag = len(dissimilar)
            if flag > 0 and flag > pix_count - 3:
                value = math.floor(math.sqrt(sum(v * v for v in dissimilar) / flag) + 0.5)
                value = min(255, max(0, value))
                if value != center:
                    out[r][c] = value
                    replaced += 1
    return out, flagged, replaced


def denoise(rows, alpha, beta, k, threshold=3, faithful=True):
    """Returns (rows, [(flagged, replaced), ...])."""
    stats = []
    for _ in range(k):
        card = cardinality_gather(rows, alpha, beta)
        rows, flagged, replaced = removal_pass(rows, card, alpha, beta, threshold, faithful)
        stats.append((flagged, replaced))
        if replaced == 0:
            break
    return rows, stats
