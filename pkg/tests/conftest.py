import os
import sys
from collections import OrderedDict
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from mopuc import FloatField, GaussRat, MeasureSystem, bernstein_szego, lebesgue_atoms, trig_density  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def reference_system(field=None):
    return MeasureSystem([bernstein_szego(F(1, 2)), bernstein_szego(F(-1, 3))], field)


def companion_system(field=None):
    g = GaussRat
    return MeasureSystem(
        [
            lebesgue_atoms(F(1, 2), [(g(F(3, 5), F(4, 5)), F(1, 4)), (g(F(-5, 13), F(12, 13)), F(1, 4))]),
            lebesgue_atoms(F(1, 3), [(g(F(8, 17), F(-15, 17)), F(1, 3)), (g(F(-7, 25), F(-24, 25)), F(1, 3))]),
        ],
        field,
    )


def duplicated_system(field=None):
    return MeasureSystem([bernstein_szego(F(1, 2)), bernstein_szego(F(1, 2))], field)


def lebesgue(field=None):
    return MeasureSystem([lebesgue_atoms(1)], field)


def cosine_density(field=None):
    return MeasureSystem([trig_density({1: F(1, 4)})], field)


@pytest.fixture
def ref():
    return reference_system()


@pytest.fixture
def ref_float():
    return reference_system(FloatField())


@pytest.fixture
def companion():
    return companion_system()


@pytest.fixture
def dup():
    return duplicated_system()


# -- one summary line per acceptance criterion ---------------------------------

_CRITERIA: "OrderedDict[int, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _CRITERIA.setdefault(number, {"title": title, "outcomes": []})


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for number, entry in _CRITERIA.items():
        if f"criterion{number}" in report.keywords:
            entry["outcomes"].append(report.outcome)


def pytest_itemcollected(item):
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        item.keywords[f"criterion{mark.args[0]}"] = True


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        outs = entry["outcomes"]
        if not outs:
            verdict = "NOT RUN"
        elif all(o == "passed" for o in outs):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {entry['title']}  ({len(outs)} tests)")
