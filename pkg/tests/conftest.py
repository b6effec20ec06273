"""Acceptance verdict collection.

test_acceptance.py wraps each criterion in the ``criterion`` fixture; the
terminal summary then carries one PASS/FAIL/SKIP line per criterion even
when output capturing is on.
"""

import contextlib

import pytest

_LINES = []


@pytest.fixture
def criterion():
    @contextlib.contextmanager
    def _criterion(name):
        info = {"detail": ""}
        try:
            yield info
        except pytest.skip.Exception as exc:
            _LINES.append(f"SKIP  {name}: {exc}")
            raise
        except BaseException:
            _LINES.append(f"FAIL  {name}")
            raise
        else:
            detail = f" ({info['detail']})" if info["detail"] else ""
            _LINES.append(f"PASS  {name}{detail}")

    return _criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
