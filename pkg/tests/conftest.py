import pytest

# Filled by tests/test_acceptance.py: criterion label -> (passed, detail), in run order
ACCEPTANCE = {}


@pytest.fixture
def report(capsys):
    def emit(label, passed, detail):
        ACCEPTANCE[label] = (passed, detail)
        with capsys.disabled():
            print(f"\nCRITERION {label}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed
    return emit


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, (passed, detail) in ACCEPTANCE.items():
        terminalreporter.write_line(f"CRITERION {label}: {'PASS' if passed else 'FAIL'}  {detail}")
