"""Matplotlib figures for bench and probe reports, written straight to files."""

from __future__ import annotations

from pathlib import Path

from matplotlib.figure import Figure

from .bench import ALL, BenchReport

FIGSIZE = (6.4, 4.0)
DPI = 120


def _save(fig: Figure, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    return path


def plot_ratios(report: BenchReport, path) -> Path:
    """Mean CSV and raw-pixel ratio per partition, as grouped bars."""
    means = [a for a in report.aggregates if a.stat == "mean"]
    labels = [a.partition for a in means]
    xs = range(len(labels))
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    w = 0.38
    ax.bar([x - w / 2 for x in xs], [a.values["csv_ratio"] for a in means], w, label="CSV bytes")
    ax.bar([x + w / 2 for x in xs], [a.values["raw_ratio"] for a in means], w, label="raw pixels")
    ax.axhline(1.0, color="0.4", lw=0.8, ls="--")
    ax.set_xticks(list(xs), labels)
    ax.set_ylabel("mean compression ratio (R:1)")
    ax.set_title(f"codec {report.spec.get('codec')}")
    ax.legend(frameon=False)
    return _save(fig, Path(path))


def plot_times(report: BenchReport, path) -> Path:
    ok = [r for r in report.records if r.ok]
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    size_mb = [r.orig_csv_bytes / 1e6 for r in ok]
    ax.scatter(size_mb, [r.compress_wall_seconds for r in ok], s=14, label="compress")
    ax.scatter(size_mb, [r.decompress_wall_seconds for r in ok], s=14, marker="x", label="decompress")
    ax.set_xlabel("CSV file size (MB)")
    ax.set_ylabel("wall time (s)")
    ax.legend(frameon=False)
    return _save(fig, Path(path))


def plot_memory(report: BenchReport, path) -> Path:
    ok = [r for r in report.records if r.ok]
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    px = [r.raw_pixel_bytes for r in ok]
    ax.scatter(px, [r.peak_compress_bytes / 1e6 for r in ok], s=14, label="compress")
    ax.scatter(px, [r.peak_decompress_bytes / 1e6 for r in ok], s=14, marker="x", label="decompress")
    ax.set_xlabel("pixels")
    ax.set_ylabel("peak buffer (MB)")
    ax.legend(frameon=False)
    return _save(fig, Path(path))


def plot_bench(report: BenchReport, out_dir, stem: str = "bench") -> list[Path]:
    """Write the ratio, time and memory figures; returns their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if not any(a.partition == ALL for a in report.aggregates):
        return []
    return [
        plot_ratios(report, out_dir / f"{stem}_ratios.png"),
        plot_times(report, out_dir / f"{stem}_times.png"),
        plot_memory(report, out_dir / f"{stem}_memory.png"),
    ]


def plot_probe(rows, path) -> Path:
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot()
    ax.loglog([r.pixels for r in rows], [r.seconds for r in rows], "o-")
    ax.set_xlabel("pixels")
    ax.set_ylabel("compress time (s)")
    ax.grid(True, which="both", lw=0.3)
    return _save(fig, Path(path))
