"""Shared fixtures and the per-criterion acceptance summary."""

from __future__ import annotations

from collections import OrderedDict

import pytest

CRITERIA = OrderedDict(
    [
        (1, "structure soundness"),
        (2, "gl(1|2) Whittaker vectors"),
        (3, "osp(1|2) series"),
        (4, "osp(2|2) Whittaker data"),
        (5, "p(n) bracket tables"),
        (6, "free-module conditions"),
        (7, "free-module conclusions and freeness"),
        (8, "p(2) example"),
        (9, "scaling automorphisms"),
        (10, "gl linkage"),
        (11, "CLI determinism"),
    ]
)

_outcomes: dict[int, list[bool]] = {k: [] for k in CRITERIA}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _outcomes[marker.args[0]].append(rep.outcome == "passed")


def pytest_terminal_summary(terminalreporter):
    if not any(_outcomes.values()):
        return
    terminalreporter.section("acceptance criteria")
    for k, title in CRITERIA.items():
        results = _outcomes[k]
        if not results:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {k:2d}: {title} ({sum(results)}/{len(results)} tests)")
