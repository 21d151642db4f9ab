from pathlib import Path

from plfc.bench import BenchRecord, BenchReport, aggregate, environment_stamp, run_bench, scaling_probe
from plfc.pipeline import CompressionSpec
from plfc.plotting import plot_bench, plot_probe

CORPUS = Path(__file__).parent / "fixtures" / "corpus"
PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_bench_figures(tmp_path):
    report = run_bench(CORPUS, CompressionSpec(seams=2))
    paths = plot_bench(report, tmp_path / "figs", "run")
    assert sorted(p.name for p in paths) == ["run_memory.png", "run_ratios.png", "run_times.png"]
    for p in paths:
        assert p.read_bytes().startswith(PNG_MAGIC)


def test_all_failed_report_has_no_figures(tmp_path):
    recs = [BenchRecord("a.csv", ".", "lzw", error="EmptyInput: no rows")]
    report = BenchReport(CompressionSpec().to_dict(), recs, aggregate(recs), environment_stamp())
    assert plot_bench(report, tmp_path) == []


def test_probe_figure(tmp_path):
    rows = scaling_probe([8, 16], CompressionSpec(seams=1))
    path = plot_probe(rows, tmp_path / "probe.png")
    assert path.read_bytes().startswith(PNG_MAGIC)
