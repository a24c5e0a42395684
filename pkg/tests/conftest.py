import pytest

from radlab.arith import build_spf_table
from radlab.bounds import BaseConstants, estimate_base_constants


@pytest.fixture(scope="session")
def table():
    return build_spf_table(20_000)


@pytest.fixture(scope="session")
def constants():
    return estimate_base_constants(10**5)


@pytest.fixture(scope="session")
def loose_constants():
    return BaseConstants()


# One line per acceptance criterion, printed in the terminal summary so it
# shows up without -s.
ACCEPTANCE_LINES: list[str] = []


class _Criterion:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is pytest.skip.Exception:
            status = "SKIP"
            self.detail = self.detail or str(exc)
        else:
            status = "PASS" if exc_type is None else "FAIL"
        line = f"[{status}] criterion {self.number:>2}: {self.title}"
        if self.detail:
            line += f" | {self.detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
