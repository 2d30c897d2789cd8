import re
from pathlib import Path

import pytest

from cascade_sac.casefile import parse

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def mutate(text: str, drop=(), add=(), sub=()):
    """Edit casefile text: drop nodes (and their edges), append lines, regex-substitute."""
    drop = set(drop)
    out = []
    for line in text.split("\n"):
        toks = line.split()
        if toks[:1] == ["node"] and toks[1] in drop:
            continue
        if toks[:1] == ["edge"] and (toks[1] in drop or toks[3] in drop):
            continue
        out.append(line)
    text = "\n".join(out).rstrip("\n") + "\n" + "".join(l + "\n" for l in add)
    for pattern, repl in sub:
        new = re.sub(pattern, repl, text, flags=re.M)
        assert new != text, f"substitution {pattern!r} did not apply"
        text = new
    return text


@pytest.fixture
def headlamp_text():
    return fixture_text("headlamp.sac")


@pytest.fixture
def headlamp(headlamp_text):
    return parse(headlamp_text)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


# ---------------------------------------------------------------- acceptance summary

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    n, title = marker
    if report.when == "call" or report.outcome != "passed":
        prev = _CRITERIA.get(n, (title, "PASS"))[1]
        outcome = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        _CRITERIA[n] = (title, outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, outcome = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {outcome}  {title}")
