import csv
import io
import json
import math
import statistics

import numpy as np
import pytest

from plfc.baselines import CodecId
from plfc.bench import (
    ALL,
    METRICS,
    STATS,
    Aggregate,
    BenchReport,
    check_aggregates,
    emit_probe,
    emit_report,
    load_report,
    run_bench,
    scaling_probe,
)
from plfc.container import HEADER_SIZE
from plfc.errors import EmptyCorpus, ReportMismatch
from plfc.image import GrayImage, to_csv
from plfc.pipeline import CompressionSpec

from conftest import piecewise_image, random_image


def write_corpus(root, images):
    for rel, img in images.items():
        p = root / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_bytes(to_csv(img))
    return root


@pytest.fixture
def corpus(tmp_path, rng):
    return write_corpus(tmp_path / "corpus", {
        "healthy/a.csv": piecewise_image(rng, 24, 32),
        "healthy/b.csv": random_image(rng, 16, 16, levels=4),
        "sick/c.csv": piecewise_image(rng, 20, 20, blocks=4),
    })


def test_single_constant_image_store(tmp_path):
    root = write_corpus(tmp_path, {"x.csv": GrayImage(8, 8, bytes([9]) * 64)})
    report = run_bench(root, CompressionSpec(seams=0, codec=CodecId.STORE))
    (rec,) = report.records
    assert rec.ok and rec.partition == "."
    assert rec.raw_pixel_bytes == 64
    assert rec.container_bytes == HEADER_SIZE + 64
    assert rec.orig_csv_bytes == 8 * (8 + 7 + 1)
    assert rec.peak_compress_bytes >= 64


def test_records_sorted_and_partitioned(corpus):
    report = run_bench(corpus, CompressionSpec(seam_frac=0.2))
    assert [r.file_id for r in report.records] == ["healthy/a.csv", "healthy/b.csv", "sick/c.csv"]
    assert [r.partition for r in report.records] == ["healthy", "healthy", "sick"]
    assert {a.partition for a in report.aggregates} == {"healthy", "sick", ALL}
    assert len(report.aggregates) == 3 * len(STATS)
    for r in report.records:
        assert r.csv_ratio == r.orig_csv_bytes / r.container_bytes
        assert r.raw_ratio == r.raw_pixel_bytes / r.container_bytes
        assert r.compress_wall_seconds >= 0 and r.decompress_wall_seconds >= 0
        assert r.seams == math.floor(0.2 * r.orig_cols)


def test_mean_ratio_hand_computed(corpus):
    report = run_bench(corpus, CompressionSpec(seams=1, codec=CodecId.HUFFMAN))
    ratios = [r.orig_csv_bytes / r.container_bytes for r in report.records]
    mean = next(a for a in report.aggregates if a.partition == ALL and a.stat == "mean")
    assert mean.values["csv_ratio"] == pytest.approx((ratios[0] + ratios[1] + ratios[2]) / 3, rel=1e-12)
    med = next(a for a in report.aggregates if a.partition == "healthy" and a.stat == "median")
    assert med.values["csv_ratio"] == pytest.approx(statistics.median(ratios[:2]), rel=1e-12)


def test_errors_recorded_not_skipped(corpus):
    (corpus / "sick" / "bad.csv").write_text("1,2\n3\n")
    (corpus / "narrow.csv").write_text("1\n2\n")
    report = run_bench(corpus, CompressionSpec(seams=1))
    errs = {r.file_id: r.error for r in report.failed}
    assert set(errs) == {"sick/bad.csv", "narrow.csv"}
    assert "RaggedRows" in errs["sick/bad.csv"] and "TooManySeams" in errs["narrow.csv"]
    # aggregates only cover successful files; the root partition has none and is omitted
    assert "." not in {a.partition for a in report.aggregates}
    n_all = next(a.n for a in report.aggregates if a.partition == ALL)
    assert n_all == 3
    check_aggregates(report)


def test_empty_corpus(tmp_path):
    with pytest.raises(EmptyCorpus):
        run_bench(tmp_path)
    with pytest.raises(EmptyCorpus):
        run_bench(tmp_path / "missing")


def test_determinism_and_parallelism(corpus):
    spec = CompressionSpec(seams=3, codec=CodecId.LZ77)
    a = run_bench(corpus, spec)
    b = run_bench(corpus, spec)
    c = run_bench(corpus, spec, parallelism=2)
    assert a.stable_view() == b.stable_view() == c.stable_view()


def test_json_parse_back(corpus):
    report = run_bench(corpus)
    back = load_report(emit_report(report, "json"))
    assert back.to_dict() == report.to_dict()


def test_tampered_aggregate_rejected(corpus):
    d = json.loads(emit_report(run_bench(corpus), "json"))
    d["aggregates"][0]["csv_ratio"] *= 1 + 1e-6
    with pytest.raises(ReportMismatch):
        BenchReport.from_dict(d)
    d["aggregates"].pop()
    with pytest.raises(ReportMismatch):
        BenchReport.from_dict(d)


def test_csv_report_rows(corpus):
    report = run_bench(corpus)
    rows = list(csv.reader(io.StringIO(emit_report(report, "csv").decode())))
    header, body = rows[0], rows[1:]
    assert header[0] == "row_type"
    assert len(body) == len(report.records) + len(report.aggregates)
    assert [r[0] for r in body].count("AGG") == len(report.aggregates)
    agg = [dict(zip(header, r)) for r in body if r[0] == "AGG"]
    first = report.aggregates[0]
    assert (agg[0]["partition"], agg[0]["stat"]) == (first.partition, first.stat)
    assert float(agg[0]["csv_ratio"]) == first.values["csv_ratio"]
    with pytest.raises(ValueError):
        emit_report(report, "xml")


def test_check_aggregates_tolerance():
    report = BenchReport({}, [], [], {})
    check_aggregates(report)
    report.aggregates.append(Aggregate(ALL, "mean", 0, {m: 0.0 for m in METRICS}))
    with pytest.raises(ReportMismatch):
        check_aggregates(report)


def test_scaling_probe_rows():
    rows = scaling_probe([8, 16, (16, 32)], CompressionSpec(seams=2))
    assert [r.pixels for r in rows] == [64, 256, 512]
    assert all(r.seconds > 0 for r in rows)
    assert emit_probe(rows).decode().splitlines()[0] == "rows,cols,pixels,seconds"
    assert len(json.loads(emit_probe(rows, "json"))) == 3
    with pytest.raises(ValueError):
        scaling_probe([16, 8])


def test_scaling_probe_larger_image_costs_more():
    # fixed k; four times the pixels must cost at least 1.5x as long
    rows = scaling_probe([64, 128], CompressionSpec(seams=4), repeats=3)
    assert rows[1].seconds >= 1.5 * rows[0].seconds


def test_parallel_records_match_serial(tmp_path):
    rng = np.random.default_rng(5)
    root = write_corpus(tmp_path, {f"p{i % 2}/img{i}.csv": random_image(rng, 10, 12, levels=5) for i in range(6)})
    serial = run_bench(root, CompressionSpec(seams=2))
    par = run_bench(root, CompressionSpec(seams=2), parallelism=3)
    assert serial.stable_view()["records"] == par.stable_view()["records"]
