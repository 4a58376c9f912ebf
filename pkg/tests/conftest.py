import time

SUITE_BUDGET_SECONDS = 300.0
_start = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: heat-flow or ODE heavy test")


def pytest_sessionstart(session):
    _start["t"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if "t" not in _start:
        return
    elapsed = time.perf_counter() - _start["t"]
    ok = elapsed < SUITE_BUDGET_SECONDS
    terminalreporter.write_line(
        f"[criterion 12] {'PASS' if ok else 'FAIL'}: full suite runtime {elapsed:.1f} s "
        f"(budget {SUITE_BUDGET_SECONDS:.0f} s)"
    )


def pytest_sessionfinish(session, exitstatus):
    if "t" in _start and time.perf_counter() - _start["t"] >= SUITE_BUDGET_SECONDS and exitstatus == 0:
        session.exitstatus = 1
