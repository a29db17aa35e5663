"""MSE, PSNR and residual-noise measurement for 8-bit images."""

from __future__ import annotations

import math

import numpy as np

from .core import DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_CARD_THRESHOLD, compute_cardinality
from .image_io import GrayImage

MAX_INTENSITY = 255
INF_TOKEN = "inf"


def _check_dims(a: GrayImage, b: GrayImage) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.width}x{a.height} vs {b.width}x{b.height}")


def squared_error_sum(a: GrayImage, b: GrayImage) -> int:
    _check_dims(a, b)
    diff = a.pixels.astype(np.int64) - b.pixels.astype(np.int64)
    return int(np.sum(diff * diff))


def mse(a: GrayImage, b: GrayImage) -> float:
    # exact integer sum, one final division
    return squared_error_sum(a, b) / (a.width * a.height)


def psnr(a: GrayImage, b: GrayImage) -> float:
    """Peak signal-to-noise ratio in dB with peak 255; ``math.inf`` for identical images."""
    sse = squared_error_sum(a, b)
    if sse == 0:
        return math.inf
    n = a.width * a.height
    return 10.0 * math.log10(MAX_INTENSITY * MAX_INTENSITY * n / sse)


def format_db(value: float) -> str:
    return INF_TOKEN if math.isinf(value) else f"{value:.3f}"


def residual_noise_count(img: GrayImage, alpha: int = DEFAULT_ALPHA, beta: int = DEFAULT_BETA,
                         card_threshold: int = DEFAULT_CARD_THRESHOLD) -> int:
    """Number of pixels whose cardinality is still below ``card_threshold``."""
    card = compute_cardinality(img, alpha, beta)
    return int(np.count_nonzero(card.counts < card_threshold))
