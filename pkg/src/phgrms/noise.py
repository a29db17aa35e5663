"""Reproducible salt-and-pepper corruption.

Positions are drawn with ``numpy.random.Generator(PCG64(seed)).permutation``,
which is a Fisher-Yates shuffle of the flat pixel indices; the first
``round(density * N)`` entries of the shuffle are corrupted and the first
``round(salt_ratio * n)`` of those become salt (255), the rest pepper (0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image_io import GrayImage

SALT = 255
PEPPER = 0


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class NoiseSpec:
    density: float
    salt_ratio: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.density <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {self.density}")
        if not 0.0 <= self.salt_ratio <= 1.0:
            raise ValueError(f"salt_ratio must be in [0, 1], got {self.salt_ratio}")


@dataclass(frozen=True, eq=False)
class CorruptionMask:
    """Boolean raster, True where a pixel was overwritten with salt or pepper."""

    flags: np.ndarray

    @property
    def width(self) -> int:
        return self.flags.shape[1]

    @property
    def height(self) -> int:
        return self.flags.shape[0]

    @property
    def count(self) -> int:
        return int(self.flags.sum())

    def as_image(self) -> GrayImage:
        return GrayImage(np.where(self.flags, 255, 0).astype(np.uint8))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CorruptionMask):
            return NotImplemented
        return bool(np.array_equal(self.flags, other.flags))


def inject_sp_noise(img: GrayImage, spec: NoiseSpec) -> tuple[GrayImage, CorruptionMask]:
    total = img.width * img.height
    n = round_half_up(spec.density * total)
    n_salt = round_half_up(spec.salt_ratio * n)

    rng = np.random.Generator(np.random.PCG64(spec.seed))
    chosen = rng.permutation(total)[:n]

    flat = img.pixels.ravel().copy()
    flat[chosen[:n_salt]] = SALT
    flat[chosen[n_salt:]] = PEPPER
    flags = np.zeros(total, dtype=bool)
    flags[chosen] = True
    flags = flags.reshape(img.shape)
    flags.flags.writeable = False
    return GrayImage(flat.reshape(img.shape)), CorruptionMask(flags)
