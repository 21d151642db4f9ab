"""Command-line interface: ``plfc compress|decompress|inspect|bench|probe``.

Exit codes: 0 success, 1 data error in at least one file, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .baselines import CodecId
from .bench import emit_probe, emit_report, run_bench, scaling_probe
from .container import HEADER_SIZE, read_header
from .errors import EmptyCorpus, LengthMismatch, PlfcError
from .image import parse_csv
from .pipeline import CompressionSpec, compress, compression_ratio, decompress, format_ratio

log = logging.getLogger("plfc")

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def atomic_write(path, data: bytes) -> None:
    """Write via a temp file in the target directory, renamed into place on success."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _spec_from_args(args) -> CompressionSpec:
    return CompressionSpec(args.seams, args.seam_frac, CodecId.from_name(args.codec))


def _plan(src: Path, out, suffix: str, pattern: str) -> list[tuple[Path, Path, str]]:
    """(source, destination, display name) per file; directories are mirrored under ``out``."""
    if src.is_dir():
        files = sorted(p for p in src.rglob(pattern) if p.is_file())
        if not files:
            raise UsageError(f"no {pattern} files under {src}")
        if out is None:
            raise UsageError("--out is required when the input is a directory")
        dst_root = Path(out)
        return [(p, (dst_root / p.relative_to(src)).with_suffix(suffix),
                 p.relative_to(src).as_posix()) for p in files]
    if not src.is_file():
        raise UsageError(f"{src} does not exist")
    if out is None:
        dst = src.with_suffix(suffix)
    else:
        dst = Path(out)
        if dst.is_dir():
            dst = dst / src.with_suffix(suffix).name
    return [(src, dst, str(src))]


def _compress_one(task):
    src, dst, name, spec = task
    try:
        text = src.read_bytes()
        blob = compress(parse_csv(text), spec)
        atomic_write(dst, blob)
    except (PlfcError, OSError) as exc:
        return name, False, f"{type(exc).__name__}: {exc}"
    ratio = format_ratio(compression_ratio(len(text), len(blob)))
    return name, True, f"{name}: {len(text)} -> {len(blob)} bytes, ratio {ratio}"


def _decompress_one(task):
    src, dst, name = task
    try:
        out = decompress(src.read_bytes())
        atomic_write(dst, out)
    except (PlfcError, OSError) as exc:
        return name, False, f"{type(exc).__name__}: {exc}"
    return name, True, f"{name}: -> {dst} ({len(out)} bytes)"


def _run_batch(fn, tasks, jobs: int) -> int:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(fn, tasks))
    else:
        results = [fn(t) for t in tasks]
    status = EXIT_OK
    for name, ok, msg in results:
        if ok:
            print(msg)
        else:
            print(f"error: {name}: {msg}", file=sys.stderr)
            status = EXIT_DATA
    return status


def cmd_compress(args) -> int:
    spec = _spec_from_args(args)
    plan = _plan(Path(args.input), args.out, ".plfc", "*.csv")
    return _run_batch(_compress_one, [(s, d, n, spec) for s, d, n in plan], args.jobs)


def cmd_decompress(args) -> int:
    plan = _plan(Path(args.input), args.out, ".csv", "*.plfc")
    return _run_batch(_decompress_one, plan, args.jobs)


def inspect_text(path) -> str:
    """Header summary of a container; reads only the header and the file size."""
    path = Path(path)
    with open(path, "rb") as f:
        head = f.read(HEADER_SIZE)
    size = path.stat().st_size
    h = read_header(head)
    if size != h.file_size:
        raise LengthMismatch(f"file is {size} bytes, header implies {h.file_size}")
    orig_px = h.orig_rows * h.orig_cols
    carved_px = h.carved_rows * h.carved_cols
    lines = [
        f"codec: {h.codec.label}",
        f"carved: {h.carved_rows}x{h.carved_cols}",
        f"original: {h.orig_rows}x{h.orig_cols}",
        f"seams removed: {h.orig_cols - h.carved_cols}",
        f"payload bits: {h.payload_bit_length}",
        f"container bytes: {size}",
        f"raw ratio: {format_ratio(compression_ratio(orig_px, size))}",
        f"carved raw ratio: {format_ratio(compression_ratio(carved_px, size))}",
        f"pixels kept: {carved_px / orig_px:.4f}",
    ]
    return "\n".join(lines) + "\n"


def cmd_inspect(args) -> int:
    try:
        sys.stdout.write(inspect_text(args.input))
    except OSError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except PlfcError as exc:
        print(f"error: {args.input}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def _figure_dir(args):
    if args.no_figures:
        return None
    if args.figures:
        return Path(args.figures)
    if args.out:
        return Path(args.out).parent
    return None


def _emit(data: bytes, out) -> None:
    if out:
        atomic_write(out, data)
    else:
        sys.stdout.write(data.decode())


def cmd_bench(args) -> int:
    spec = _spec_from_args(args)
    try:
        report = run_bench(args.corpus, spec, args.jobs)
    except EmptyCorpus as exc:
        raise UsageError(str(exc)) from exc
    _emit(emit_report(report, args.report), args.out)
    fig_dir = _figure_dir(args)
    if fig_dir is not None:
        from .plotting import plot_bench

        stem = Path(args.out).stem if args.out else "bench"
        for p in plot_bench(report, fig_dir, stem):
            log.info("wrote %s", p)
    for r in report.failed:
        print(f"error: {r.file_id}: {r.error}", file=sys.stderr)
    return EXIT_DATA if report.failed else EXIT_OK


def _parse_sizes(text: str) -> list:
    sizes = []
    for part in text.split(","):
        part = part.strip().lower()
        try:
            if "x" in part:
                r, c = part.split("x")
                sizes.append((int(r), int(c)))
            else:
                sizes.append(int(part))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad size {part!r}") from None
    return sizes


def cmd_probe(args) -> int:
    spec = _spec_from_args(args)
    try:
        rows = scaling_probe(args.sizes, spec, seed=args.seed, repeats=args.repeats)
    except ValueError as exc:
        if isinstance(exc, PlfcError):
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_DATA
        raise UsageError(str(exc)) from exc
    _emit(emit_probe(rows, args.report), args.out)
    fig_dir = _figure_dir(args)
    if fig_dir is not None:
        from .plotting import plot_probe

        fig_dir.mkdir(parents=True, exist_ok=True)
        stem = Path(args.out).stem if args.out else "probe"
        log.info("wrote %s", plot_probe(rows, fig_dir / f"{stem}_scaling.png"))
    return EXIT_OK


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("PLFC_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plfc", description="Seam-carving + lossless compression of grayscale CSV images."
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--seams", type=int, help="number of seams to remove")
        g.add_argument("--seam-frac", type=float, help="fraction of the width to remove (default 0.2)")
        p.add_argument("--codec", default="lzw", choices=[c.label for c in CodecId])

    def jobs_flag(p):
        p.add_argument("--jobs", type=int, default=_default_jobs(),
                       help="worker processes (default $PLFC_JOBS or 1)")

    def figure_flags(p):
        p.add_argument("--figures", metavar="DIR", help="write PNG figures here (default: next to --out)")
        p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("compress", help="CSV image(s) -> .plfc container(s)")
    p.add_argument("input")
    p.add_argument("--out")
    spec_flags(p)
    jobs_flag(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help=".plfc container(s) -> carved CSV image(s)")
    p.add_argument("input")
    p.add_argument("--out")
    jobs_flag(p)
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("inspect", help="print a container header summary")
    p.add_argument("input")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("bench", help="benchmark a corpus directory")
    p.add_argument("corpus")
    p.add_argument("--out")
    p.add_argument("--report", choices=["json", "csv"], default="json")
    spec_flags(p)
    jobs_flag(p)
    figure_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("probe", help="time compression of synthetic images of growing size")
    p.add_argument("--sizes", type=_parse_sizes, default=[32, 64, 128],
                   help="comma-separated side lengths or RxC pairs (default 32,64,128)")
    p.add_argument("--out")
    p.add_argument("--report", choices=["json", "csv"], default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=1)
    spec_flags(p)
    figure_flags(p)
    p.set_defaults(func=cmd_probe)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        if hasattr(args, "codec"):
            _spec_from_args(args)
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"plfc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        if isinstance(exc, PlfcError):
            raise
        parser.print_usage(sys.stderr)
        print(f"plfc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
