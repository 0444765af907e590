import json
import os
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from tcfkit.ecf import BinaryModel

GOLDEN = Path(__file__).parent / "golden"

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def golden(name):
    with open(GOLDEN / name, encoding="utf-8") as fh:
        return json.load(fh)


def frac_list(values):
    return tuple(Fraction(v) for v in values)


@st.composite
def binary_models(draw, min_n=2, max_n=5, equal=True):
    """Random BinaryModel; with ``equal`` the events get a common probability
    by mixing in mass on singletons to level the margins."""
    n = draw(st.integers(min_n, max_n))
    k = draw(st.integers(1, 6))
    labels = draw(st.lists(st.integers(1, (1 << n) - 1), min_size=k, max_size=k))
    weights = draw(st.lists(st.integers(1, 9), min_size=k, max_size=k))
    mass = {}
    for s, w in zip(labels, weights):
        mass[s] = mass.get(s, 0) + w
    if equal:
        margins = [sum(w for s, w in mass.items() if s >> i & 1) for i in range(n)]
        top = max(margins)
        for i, m in enumerate(margins):
            if m < top:
                mass[1 << i] = mass.get(1 << i, 0) + (top - m)
    empty = draw(st.integers(0, 5))
    if empty:
        mass[0] = empty
    total = sum(mass.values())
    return BinaryModel(n, tuple((s, Fraction(w, total)) for s, w in sorted(mass.items())))


@pytest.fixture(scope="session")
def golden_counts():
    return golden("counts.json")


def pytest_addoption(parser):
    parser.addoption("--extended", action="store_true", help="run the n = 6 recomputations")


def pytest_configure(config):
    if config.getoption("--extended", default=False):
        os.environ["TCFKIT_EXTENDED"] = "1"


# ---------------------------------------------------------------------------
# acceptance reporting: one PASS/FAIL line per criterion

_CRITERIA: dict = {}


@pytest.fixture
def detail(request):
    """Callable that attaches a one-line measurement to the criterion line."""
    notes = []
    request.node._criterion_notes = notes
    return notes.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key, title = mark.args
    notes = "; ".join(getattr(item, "_criterion_notes", []))
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if rep.skipped:
            status = "SKIP"
        else:
            status = "PASS" if rep.passed else "FAIL"
        _CRITERIA[key] = (status, title, notes)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: (int(str(k).rstrip("abcdefgh")), str(k))):
        status, title, notes = _CRITERIA[key]
        line = f"{status} criterion {key}: {title}"
        if notes:
            line += f" [{notes}]"
        terminalreporter.write_line(line)
