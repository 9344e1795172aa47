import pytest

# one line per acceptance criterion, filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d}: {detail}")


@pytest.fixture
def record_acceptance():
    def record(k, ok, detail):
        ACCEPTANCE[k] = (bool(ok), detail)
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}")
        return ok

    return record
