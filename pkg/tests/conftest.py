import time

import pytest

from arvaseek.sim import Scenario, planar_optimum, run

# long enough to hold the 1x1 m box for a full loiter period before 450 s
LONG_RUN = 470.0


def _timed_run(**overrides):
    sc = Scenario.default(duration=LONG_RUN, **overrides)
    t0 = time.perf_counter()
    log, metrics = run(sc)
    return {"scenario": sc, "log": log, "metrics": metrics, "wall": time.perf_counter() - t0}


@pytest.fixture(scope="session")
def p_star():
    return planar_optimum(Scenario.default().transmitter)


@pytest.fixture(scope="session")
def run_noiseless():
    return _timed_run(**{"emi.bound": 0.0})


@pytest.fixture(scope="session")
def run_noisy():
    return _timed_run()


@pytest.fixture(scope="session")
def run_detuned():
    return _timed_run(**{"emi.bound": 0.0, "lqr.detune": 100.0})


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
