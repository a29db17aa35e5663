"""Timing and restoration-quality grid: runtime and PSNR against noise level,
and serial/parallel speedup against image size, written out as CSV."""

from __future__ import annotations

import csv
import io
import logging
import math
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .core import DenoiseParams, EngineSpec, denoise, hardware_threads, total_replaced, \
    warmup
from .image_io import GrayImage, PgmError, load_pgm, synth_image
from .metrics import format_db, psnr
from .noise import NoiseSpec, inject_sp_noise

log = logging.getLogger(__name__)

DEFAULT_SIZES = (128, 256, 512, 1024, 2048)
DEFAULT_DENSITIES = (0.05, 0.10, 0.15, 0.20)
DEFAULT_REPETITIONS = 5

CSV_FIELDS = (
    "image_id", "width", "height", "noise_pct", "engine", "workers", "iterations_run",
    "total_ms", "psnr_noisy_db", "psnr_denoised_db", "replaced_total",
)
SKIPPED = "skipped"


@dataclass
class BenchConfig:
    sizes: Sequence[int] = DEFAULT_SIZES
    corpus: Path | None = None
    densities: Sequence[float] = DEFAULT_DENSITIES
    serial: bool = True
    workers: Sequence[int] = field(default_factory=lambda: (hardware_threads(),))
    repetitions: int = DEFAULT_REPETITIONS
    params: DenoiseParams = field(default_factory=DenoiseParams)
    seed: int = 0
    synth_kind: str = "smooth-random"

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ValueError("repetitions must be ≥ 1")
        if not self.sizes and self.corpus is None:
            raise ValueError("at least one image source is required")
        if any(not 0.0 <= d <= 1.0 for d in self.densities):
            raise ValueError("densities must lie in [0, 1]")
        if any(s < 1 for s in self.sizes):
            raise ValueError("sizes must be ≥ 1")
        if any(w < 1 for w in self.workers):
            raise ValueError("workers must be ≥ 1")

    def engines(self) -> list[EngineSpec]:
        out = [EngineSpec.serial()] if self.serial else []
        out.extend(EngineSpec.parallel(w) for w in self.workers)
        return out


@dataclass(frozen=True)
class BenchRecord:
    image_id: str
    width: int
    height: int
    noise_pct: float
    engine: str
    workers: int
    iterations_run: int
    total_ms: float
    psnr_noisy_db: float
    psnr_denoised_db: float
    replaced_total: int

    @property
    def skipped(self) -> bool:
        return self.engine == SKIPPED


def _skip_record(image_id: str) -> BenchRecord:
    nan = math.nan
    return BenchRecord(image_id, 0, 0, nan, SKIPPED, 0, 0, nan, nan, nan, 0)


def _sources(cfg: BenchConfig) -> list[tuple[str, GrayImage | None]]:
    sources: list[tuple[str, GrayImage | None]] = []
    if cfg.corpus is not None:
        for path in sorted(Path(cfg.corpus).glob("*.pgm")):
            try:
                sources.append((path.name, load_pgm(path)))
            except (OSError, PgmError) as exc:
                log.warning("skipping %s: %s", path, exc)
                sources.append((path.name, None))
    for size in cfg.sizes:
        sources.append((f"{cfg.synth_kind}-{size}", synth_image(size, size, cfg.seed, cfg.synth_kind)))
    if not any(img is not None for _, img in sources):
        raise ValueError("empty image set")
    return sources


def _time_denoise(noisy: GrayImage, params: DenoiseParams, engine: EngineSpec, reps: int):
    times = []
    result = None
    for _ in range(reps):
        t0 = time.perf_counter()
        result = denoise(noisy, params, engine)
        times.append(time.perf_counter() - t0)
    return result, statistics.median(times) * 1000.0


def run_benchmark(cfg: BenchConfig) -> list[BenchRecord]:
    """Run every (image, density, engine) cell in sequence.

    All engines within a cell denoise the same noisy realization, so their
    PSNR and replacement fields must agree.
    """
    records: list[BenchRecord] = []
    engines = cfg.engines()
    warmup()
    for image_id, clean in _sources(cfg):
        if clean is None:
            records.append(_skip_record(image_id))
            continue
        for density in cfg.densities:
            noisy, _ = inject_sp_noise(clean, NoiseSpec(density, seed=cfg.seed))
            noisy_db = psnr(clean, noisy)
            for engine in engines:
                (out, stats), ms = _time_denoise(noisy, cfg.params, engine, cfg.repetitions)
                records.append(BenchRecord(
                    image_id=image_id,
                    width=clean.width,
                    height=clean.height,
                    noise_pct=density * 100.0,
                    engine=engine.mode.value,
                    workers=engine.workers,
                    iterations_run=len(stats),
                    # clock granularity can round a tiny run to zero
                    total_ms=max(ms, 1e-6),
                    psnr_noisy_db=noisy_db,
                    psnr_denoised_db=psnr(clean, out),
                    replaced_total=total_replaced(stats),
                ))
                log.info("%s %.0f%% %s(%d): %.3f ms", image_id, density * 100,
                         engine.mode.value, engine.workers, ms)
    return records


def _fmt_real(x: float) -> str:
    if math.isnan(x):
        return ""
    return format_db(x)


def write_csv(records: Sequence[BenchRecord]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in records:
        if r.skipped:
            writer.writerow([r.image_id, "", "", "", SKIPPED, "", "", "", "", "", ""])
            continue
        writer.writerow([
            r.image_id, r.width, r.height, _fmt_real(r.noise_pct), r.engine, r.workers,
            r.iterations_run, _fmt_real(r.total_ms), _fmt_real(r.psnr_noisy_db),
            _fmt_real(r.psnr_denoised_db), r.replaced_total,
        ])
    return buf.getvalue().encode("utf-8")


def speedup_by_size(records: Sequence[BenchRecord]) -> dict[int, float]:
    """Serial over parallel time per image width, summed over all cells of that width.

    Uses the parallel rows with the largest worker count.
    """
    rows = [r for r in records if not r.skipped]
    par = [r for r in rows if r.engine == "parallel"]
    if not par:
        return {}
    top = max(r.workers for r in par)
    serial_ms: dict[int, float] = {}
    parallel_ms: dict[int, float] = {}
    for r in rows:
        if r.engine == "serial":
            serial_ms[r.width] = serial_ms.get(r.width, 0.0) + r.total_ms
        elif r.workers == top:
            parallel_ms[r.width] = parallel_ms.get(r.width, 0.0) + r.total_ms
    return {w: serial_ms[w] / parallel_ms[w]
            for w in sorted(serial_ms) if w in parallel_ms}
