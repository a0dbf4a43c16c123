import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "fixed",
    max_examples=100,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("fixed")

import time

import acceptance_log

SUITE_LIMIT = 60.0
_state = {"start": None, "property_tests": set()}


def pytest_sessionstart(session):
    _state["start"] = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    for item in items:
        if getattr(getattr(item, "obj", None), "is_hypothesis_test", False):
            _state["property_tests"].add(item.nodeid)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - _state["start"]
    props = _state["property_tests"]
    if props and acceptance_log.LINES:
        failed = [r.nodeid for r in terminalreporter.stats.get("failed", [])
                  if r.nodeid in props]
        profile = settings.get_profile("fixed")
        ok = not failed and profile.max_examples >= 100 and elapsed <= SUITE_LIMIT
        acceptance_log.LINES[8] = (
            f"ACCEPTANCE 8 {'PASS' if ok else 'FAIL'}: {len(props)} property tests at "
            f"{profile.max_examples} fixed-seed cases each, {len(failed)} failed, "
            f"session {elapsed:.1f} s (limit {SUITE_LIMIT:.0f} s)")
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[n])
