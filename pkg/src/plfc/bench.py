"""Batch benchmark over a corpus of CSV images: sizes, ratios, wall time, buffer peaks.

A corpus is a directory tree of ``*.csv`` files.  The first directory level
under the corpus root names the partition (e.g. ``healthy/`` and ``sick/``);
files directly in the root belong to the partition ``"."``.

JSON report schema (``plfc-bench/1``)::

    {
      "schema": "plfc-bench/1",
      "spec": {"seams": int|null, "seam_frac": float|null, "codec": str},
      "environment": {"host": str, "python": str, "timestamp": str},
      "records": [ {<RECORD_FIELDS>}, ... ],          # sorted by file_id
      "aggregates": [ {"partition": str, "stat": "mean"|"median"|"min"|"max",
                       "n": int, <METRICS>: float}, ... ]
    }

Errored files appear as records with ``error`` set and every metric null.
Aggregates cover successful records only, per partition and for ``"all"``.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
import platform
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .errors import EmptyCorpus, PlfcError, ReportMismatch
from .image import GrayImage, parse_csv, to_csv
from .meter import BufferMeter
from .pipeline import CompressionSpec, compress, compress_carved, compression_ratio, decompress

SCHEMA = "plfc-bench/1"
ALL = "all"
STATS = ("mean", "median", "min", "max")
METRICS = (
    "orig_csv_bytes",
    "raw_pixel_bytes",
    "container_bytes",
    "csv_ratio",
    "raw_ratio",
    "compress_wall_seconds",
    "decompress_wall_seconds",
    "peak_compress_bytes",
    "peak_decompress_bytes",
)
TIMING_FIELDS = ("compress_wall_seconds", "decompress_wall_seconds")
AGG_REL_TOL = 1e-9


@dataclass
class BenchRecord:
    file_id: str
    partition: str
    codec: str
    seams: int | None = None
    orig_rows: int | None = None
    orig_cols: int | None = None
    carved_rows: int | None = None
    carved_cols: int | None = None
    orig_csv_bytes: int | None = None
    raw_pixel_bytes: int | None = None
    container_bytes: int | None = None
    csv_ratio: float | None = None
    raw_ratio: float | None = None
    compress_wall_seconds: float | None = None
    decompress_wall_seconds: float | None = None
    peak_compress_bytes: int | None = None
    peak_decompress_bytes: int | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


RECORD_FIELDS = tuple(f.name for f in fields(BenchRecord))


@dataclass
class Aggregate:
    partition: str
    stat: str
    n: int
    values: dict


@dataclass
class BenchReport:
    spec: dict
    records: list
    aggregates: list
    environment: dict

    @property
    def failed(self) -> list:
        return [r for r in self.records if not r.ok]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "spec": self.spec,
            "environment": self.environment,
            "records": [asdict(r) for r in self.records],
            "aggregates": [
                {"partition": a.partition, "stat": a.stat, "n": a.n, **a.values}
                for a in self.aggregates
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> BenchReport:
        if d.get("schema") != SCHEMA:
            raise ReportMismatch(f"unknown report schema {d.get('schema')!r}")
        records = [BenchRecord(**r) for r in d["records"]]
        aggregates = [
            Aggregate(a["partition"], a["stat"], a["n"], {m: a[m] for m in METRICS})
            for a in d["aggregates"]
        ]
        report = cls(d["spec"], records, aggregates, d["environment"])
        check_aggregates(report)
        return report

    def stable_view(self) -> dict:
        """Report contents with timing and environment fields removed."""
        d = self.to_dict()
        del d["environment"]
        for r in d["records"]:
            for k in TIMING_FIELDS:
                r.pop(k)
        for a in d["aggregates"]:
            for k in TIMING_FIELDS:
                a.pop(k)
        return d


def _stat(name: str, values: list) -> float:
    if name == "mean":
        return math.fsum(values) / len(values)
    if name == "median":
        return float(statistics.median(values))
    return float(min(values) if name == "min" else max(values))


def aggregate(records) -> list[Aggregate]:
    groups: dict[str, list] = {}
    for r in records:
        if r.ok:
            groups.setdefault(r.partition, []).append(r)
    ok = [r for r in records if r.ok]
    out = []
    labels = sorted(groups) + ([ALL] if ok else [])
    for label in labels:
        members = ok if label == ALL else groups[label]
        for stat in STATS:
            values = {m: _stat(stat, [getattr(r, m) for r in members]) for m in METRICS}
            out.append(Aggregate(label, stat, len(members), values))
    return out


def check_aggregates(report: BenchReport, rel_tol: float = AGG_REL_TOL) -> None:
    """Raise ReportMismatch unless every aggregate matches a recomputation from the records."""
    fresh = {(a.partition, a.stat): a for a in aggregate(report.records)}
    seen = {(a.partition, a.stat): a for a in report.aggregates}
    if fresh.keys() != seen.keys():
        raise ReportMismatch("aggregate rows do not match the record partitions")
    for key, a in seen.items():
        b = fresh[key]
        if a.n != b.n:
            raise ReportMismatch(f"{key}: n={a.n}, recomputed {b.n}")
        for m in METRICS:
            if not math.isclose(a.values[m], b.values[m], rel_tol=rel_tol, abs_tol=0.0):
                raise ReportMismatch(f"{key} {m}: {a.values[m]!r} != recomputed {b.values[m]!r}")


def environment_stamp() -> dict:
    return {
        "host": f"{platform.node()} {platform.platform()} {platform.machine()}",
        "python": platform.python_version(),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def corpus_files(corpus_dir) -> list[tuple[Path, str, str]]:
    """(path, file_id, partition) for every CSV under ``corpus_dir``, sorted by file id."""
    root = Path(corpus_dir)
    if not root.is_dir():
        raise EmptyCorpus(f"{root} is not a directory")
    out = []
    for path in root.rglob("*.csv"):
        if not path.is_file():
            continue
        rel = path.relative_to(root)
        partition = rel.parts[0] if len(rel.parts) > 1 else "."
        out.append((path, rel.as_posix(), partition))
    if not out:
        raise EmptyCorpus(f"no CSV files under {root}")
    return sorted(out, key=lambda t: t[1])


def bench_file(path, file_id: str, partition: str, spec: CompressionSpec) -> BenchRecord:
    rec = BenchRecord(file_id, partition, spec.codec.label)
    try:
        text = Path(path).read_bytes()
    except OSError as exc:
        rec.error = f"read failed: {exc}"
        return rec
    try:
        cmeter = BufferMeter()
        t0 = time.perf_counter()
        img = parse_csv(text)
        blob, carved = compress_carved(img, spec, cmeter)
        t1 = time.perf_counter()

        dmeter = BufferMeter()
        t2 = time.perf_counter()
        out = decompress(blob, dmeter)
        t3 = time.perf_counter()
    except PlfcError as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    if out != to_csv(carved):
        rec.error = "round trip mismatch: decoded CSV differs from the carved image"
        return rec

    rec.seams = img.cols - carved.cols
    rec.orig_rows, rec.orig_cols = img.rows, img.cols
    rec.carved_rows, rec.carved_cols = carved.rows, carved.cols
    rec.orig_csv_bytes = len(text)
    rec.raw_pixel_bytes = img.rows * img.cols
    rec.container_bytes = len(blob)
    rec.csv_ratio = compression_ratio(len(text), len(blob))
    rec.raw_ratio = compression_ratio(rec.raw_pixel_bytes, len(blob))
    rec.compress_wall_seconds = t1 - t0
    rec.decompress_wall_seconds = t3 - t2
    rec.peak_compress_bytes = cmeter.peak
    rec.peak_decompress_bytes = dmeter.peak
    return rec


def _bench_task(args):
    return bench_file(*args)


def run_bench(corpus_dir, spec: CompressionSpec | None = None, parallelism: int = 1) -> BenchReport:
    spec = spec or CompressionSpec()
    tasks = [(str(p), fid, part, spec) for p, fid, part in corpus_files(corpus_dir)]
    if parallelism > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(_bench_task, tasks))
    else:
        records = [_bench_task(t) for t in tasks]
    records.sort(key=lambda r: r.file_id)
    return BenchReport(spec.to_dict(), records, aggregate(records), environment_stamp())


# --- report output ---------------------------------------------------------

CSV_COLUMNS = ("row_type",) + RECORD_FIELDS + ("stat", "n")


def emit_report(report: BenchReport, fmt: str = "json") -> bytes:
    """Serialize a report as JSON or as CSV (one REC row per file, one AGG row per aggregate)."""
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2) + "\n").encode()
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report.records:
        d = asdict(r)
        w.writerow(["REC"] + [_cell(d[k]) for k in RECORD_FIELDS] + ["", ""])
    for a in report.aggregates:
        row = {k: "" for k in RECORD_FIELDS}
        row["partition"] = a.partition
        row["codec"] = report.spec.get("codec", "")
        row.update({m: _cell(v) for m, v in a.values.items()})
        w.writerow(["AGG"] + [row[k] for k in RECORD_FIELDS] + [a.stat, a.n])
    return buf.getvalue().encode()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def load_report(data) -> BenchReport:
    return BenchReport.from_dict(json.loads(data))


# --- scaling probe ---------------------------------------------------------

@dataclass(frozen=True)
class ProbeRow:
    rows: int
    cols: int
    pixels: int
    seconds: float


def scaling_probe(sizes, spec: CompressionSpec | None = None, seed: int = 0,
                  repeats: int = 1) -> list[ProbeRow]:
    """Time compression of random images of each size; ``seconds`` is the best of ``repeats``.

    Sizes are square side lengths or ``(rows, cols)`` pairs and must be
    ascending in pixel count.  Nothing is judged; the table is the result.
    """
    spec = spec or CompressionSpec()
    dims = [(s, s) if isinstance(s, int) else tuple(s) for s in sizes]
    pixels = [r * c for r, c in dims]
    if any(b <= a for a, b in zip(pixels, pixels[1:])):
        raise ValueError(f"sizes must be strictly ascending in pixel count, got {dims}")
    rng = np.random.default_rng(seed)
    out = []
    for r, c in dims:
        img = GrayImage.from_array(rng.integers(0, 256, size=(r, c), dtype=np.uint8))
        best = math.inf
        for _ in range(max(1, repeats)):
            t0 = time.perf_counter()
            compress(img, spec)
            best = min(best, time.perf_counter() - t0)
        out.append(ProbeRow(r, c, r * c, best))
    return out


def emit_probe(rows, fmt: str = "csv") -> bytes:
    if fmt == "json":
        return (json.dumps([asdict(r) for r in rows], indent=2) + "\n").encode()
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rows", "cols", "pixels", "seconds"])
    for r in rows:
        w.writerow([r.rows, r.cols, r.pixels, repr(r.seconds)])
    return buf.getvalue().encode()
