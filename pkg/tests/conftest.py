import pytest

from holoqutrit.harness import scenarios
from holoqutrit.harness.config import load_config

_ACCEPTANCE = {}


def record_criterion(number, name, ok, detail):
    """Print and remember one acceptance verdict."""
    line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    _ACCEPTANCE[number] = line
    print(line)
    return ok


@pytest.fixture(scope="session")
def ladder_cfg():
    return load_config("fig5", overrides={"simulation": {"two_photon": "ladder"}})


@pytest.fixture(scope="session")
def ladder_cal(ladder_cfg, tmp_path_factory):
    """Ladder pi and pi/2 calibrations, computed once per session."""
    cache = tmp_path_factory.mktemp("cal") / "calibration_cache.json"
    return scenarios.calibrate(ladder_cfg, ladder=True, cache_path=str(cache))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])
