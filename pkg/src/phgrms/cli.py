"""Command-line entry point: ``phgrms {denoise,add-noise,psnr,cardmap,bench}``.

Exit codes: 0 success, 1 runtime or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import DEFAULT_DENSITIES, DEFAULT_REPETITIONS, DEFAULT_SIZES, BenchConfig, \
    run_benchmark, speedup_by_size, write_csv
from .core import BorderMode, DenoiseParams, EngineSpec, compute_cardinality, denoise, \
    hardware_threads
from .image_io import PgmError, load_pgm, save_pgm
from .metrics import format_db, mse, psnr
from .noise import NoiseSpec, inject_sp_noise

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: D401 - argparse hook
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text: str) -> list[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _add_filter_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=int, default=20, help="intensity tolerance (default 20)")
    p.add_argument("--beta", type=int, default=1, help="window radius (default 1)")
    p.add_argument("--iters", type=int, default=5, help="iteration cap k (default 5)")
    p.add_argument("--border", choices=[m.value for m in BorderMode], default="faithful")


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--engine", choices=["serial", "parallel"], default="parallel")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for the parallel engine (default: hardware threads)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phgrms", description="Salt-and-pepper denoising toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("denoise", help="remove salt-and-pepper noise from a PGM")
    p.add_argument("in_path", type=Path)
    p.add_argument("out_path", type=Path)
    _add_filter_flags(p)
    _add_engine_flags(p)
    p.add_argument("--stats", action="store_true", help="print one line per iteration")
    p.add_argument("--ascii", action="store_true", help="write P2 instead of P5")

    p = sub.add_parser("add-noise", help="inject seeded salt-and-pepper noise")
    p.add_argument("in_path", type=Path)
    p.add_argument("out_path", type=Path)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--salt-ratio", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mask", type=Path, default=None, help="write the corruption mask as P5 PGM")

    p = sub.add_parser("psnr", help="PSNR and MSE between two PGMs")
    p.add_argument("path_a", type=Path)
    p.add_argument("path_b", type=Path)

    p = sub.add_parser("cardmap", help="dump the cardinality map as an ASCII PGM")
    p.add_argument("in_path", type=Path)
    p.add_argument("out_path", type=Path)
    p.add_argument("--alpha", type=int, default=20)
    p.add_argument("--beta", type=int, default=1)

    p = sub.add_parser("bench", help="runtime / PSNR / speedup grid to CSV")
    p.add_argument("--sizes", type=_int_list, default=None,
                   help="comma-separated square sizes (default 128,256,512,1024,2048 "
                        "unless --corpus is given)")
    p.add_argument("--densities", type=_float_list, default=list(DEFAULT_DENSITIES))
    p.add_argument("--corpus", type=Path, default=None, help="directory of *.pgm images")
    p.add_argument("--reps", type=int, default=DEFAULT_REPETITIONS)
    p.add_argument("--threads", type=_int_list, default=None,
                   help="comma-separated worker counts (default: hardware threads)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)
    _add_filter_flags(p)
    return parser


def _params(parser: argparse.ArgumentParser, args) -> DenoiseParams:
    if args.alpha < 1:
        parser.error("alpha must be ≥ 1")
    if args.alpha > 255:
        parser.error("alpha must be ≤ 255")
    if args.beta < 1:
        parser.error("beta must be ≥ 1")
    if getattr(args, "iters", 1) < 1:
        parser.error("iters must be ≥ 1")
    return DenoiseParams(alpha=args.alpha, beta=args.beta, k=getattr(args, "iters", 5),
                         border_mode=BorderMode(getattr(args, "border", "faithful")))


def _require_file(parser: argparse.ArgumentParser, path: Path) -> None:
    if not path.is_file():
        parser.error(f"no such file: {path}")


def _cmd_denoise(parser, args) -> int:
    params = _params(parser, args)
    if args.threads is not None and args.threads < 1:
        parser.error("threads must be ≥ 1")
    _require_file(parser, args.in_path)
    engine = (EngineSpec.serial() if args.engine == "serial"
              else EngineSpec.parallel(args.threads))
    img = load_pgm(args.in_path)
    out, stats = denoise(img, params, engine)
    save_pgm(args.out_path, out, ascii=args.ascii)
    if args.stats:
        for s in stats:
            print(s.format_line())
    return EXIT_OK


def _cmd_add_noise(parser, args) -> int:
    if not 0.0 <= args.density <= 1.0:
        parser.error("density must be in [0, 1]")
    if not 0.0 <= args.salt_ratio <= 1.0:
        parser.error("salt-ratio must be in [0, 1]")
    _require_file(parser, args.in_path)
    img = load_pgm(args.in_path)
    noisy, mask = inject_sp_noise(img, NoiseSpec(args.density, args.salt_ratio, args.seed))
    save_pgm(args.out_path, noisy)
    if args.mask is not None:
        save_pgm(args.mask, mask.as_image())
    return EXIT_OK


def _cmd_psnr(parser, args) -> int:
    _require_file(parser, args.path_a)
    _require_file(parser, args.path_b)
    a, b = load_pgm(args.path_a), load_pgm(args.path_b)
    print(f"psnr_db={format_db(psnr(a, b))} mse={mse(a, b):.3f}")
    return EXIT_OK


def _cmd_cardmap(parser, args) -> int:
    _params(parser, args)
    _require_file(parser, args.in_path)
    card = compute_cardinality(load_pgm(args.in_path), args.alpha, args.beta)
    maxval = (2 * args.beta + 1) ** 2
    header = f"P2\n{card.width} {card.height}\n{maxval}\n"
    body = "\n".join(" ".join(str(v) for v in row) for row in card.counts.tolist())
    args.out_path.write_text(header + body + "\n", encoding="ascii")
    return EXIT_OK


def _cmd_bench(parser, args) -> int:
    params = _params(parser, args)
    if args.reps < 1:
        parser.error("reps must be ≥ 1")
    if any(not 0.0 <= d <= 1.0 for d in args.densities):
        parser.error("densities must lie in [0, 1]")
    if args.corpus is not None and not args.corpus.is_dir():
        parser.error(f"no such directory: {args.corpus}")
    sizes = args.sizes if args.sizes is not None else ([] if args.corpus else list(DEFAULT_SIZES))
    if any(s < 1 for s in sizes):
        parser.error("sizes must be ≥ 1")
    workers = args.threads or [hardware_threads()]
    if any(w < 1 for w in workers):
        parser.error("threads must be ≥ 1")
    cfg = BenchConfig(sizes=sizes, corpus=args.corpus, densities=args.densities,
                      workers=workers, repetitions=args.reps, params=params, seed=args.seed)
    records = run_benchmark(cfg)
    args.out.write_bytes(write_csv(records))
    for size, ratio in speedup_by_size(records).items():
        print(f"size={size} speedup={ratio:.3f}")
    return EXIT_OK


_COMMANDS = {
    "denoise": _cmd_denoise,
    "add-noise": _cmd_add_noise,
    "psnr": _cmd_psnr,
    "cardmap": _cmd_cardmap,
    "bench": _cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](parser, args)
    except (PgmError, ValueError, OSError) as exc:
        print(f"phgrms {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
