import numpy as np
import pytest
from hypothesis import strategies as st

from plfc.image import GrayImage


@st.composite
def gray_images(draw, max_rows=12, max_cols=12):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    pixels = draw(st.binary(min_size=rows * cols, max_size=rows * cols))
    return GrayImage(rows, cols, pixels)


def random_image(rng, rows, cols, levels=256):
    return GrayImage.from_array(rng.integers(0, levels, size=(rows, cols), dtype=np.uint8))


def piecewise_image(rng, rows, cols, blocks=8):
    """Blocky synthetic image: a few flat rectangles of random gray levels."""
    arr = np.empty((rows, cols), dtype=np.uint8)
    ys = np.linspace(0, rows, blocks + 1).astype(int)
    xs = np.linspace(0, cols, blocks + 1).astype(int)
    for i in range(blocks):
        for j in range(blocks):
            arr[ys[i]:ys[i + 1], xs[j]:xs[j + 1]] = rng.integers(0, 256)
    return GrayImage.from_array(arr)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# --- acceptance summary ----------------------------------------------------

_CRITERIA = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    label = dict(report.user_properties).get("criterion")
    if label:
        crash = getattr(report.longrepr, "reprcrash", None)
        detail = crash.message.splitlines()[0] if report.failed and crash else ""
        _CRITERIA.append((label, report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, detail in _CRITERIA:
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"{status}  {label}"
        if detail:
            line += f"  -- {detail[:160]}"
        terminalreporter.write_line(line)
