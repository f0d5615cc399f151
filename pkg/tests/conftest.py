import itertools

import pytest
from hypothesis import HealthCheck, settings

from patdist.matchers import Alphabet, Pattern

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

DNA = Alphabet("ACGT")
AC = Alphabet("AC")
AB = Alphabet("AB")


def pat(text: str, alphabet: Alphabet = DNA) -> Pattern:
    return Pattern.from_string(text, alphabet)


def strings(alphabet: Alphabet, max_len: int):
    for n in range(max_len + 1):
        yield from itertools.product(range(len(alphabet)), repeat=n)


@pytest.fixture
def dna():
    return DNA


# one line per acceptance criterion, echoed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
