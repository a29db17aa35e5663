"""Hypergraph root-mean-square salt-and-pepper denoising for 8-bit grayscale images."""

from .core import (
    BorderMode,
    CardinalityMap,
    DenoiseParams,
    EngineMode,
    EngineSpec,
    PassStats,
    compute_cardinality,
    denoise,
    denoise_pass,
    partition_rows,
    run_parallel_pass,
    similar,
)
from .image_io import GrayImage, PgmError, read_pgm, synth_image, write_pgm
from .metrics import mse, psnr, residual_noise_count
from .noise import CorruptionMask, NoiseSpec, inject_sp_noise

__all__ = [
    "BorderMode", "CardinalityMap", "CorruptionMask", "DenoiseParams", "EngineMode",
    "EngineSpec", "GrayImage", "NoiseSpec", "PassStats", "PgmError", "compute_cardinality",
    "denoise", "denoise_pass", "inject_sp_noise", "mse", "partition_rows", "psnr",
    "read_pgm", "residual_noise_count", "run_parallel_pass", "similar", "synth_image",
    "write_pgm",
]
