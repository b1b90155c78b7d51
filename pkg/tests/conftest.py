import pytest

from dinicheck.funcspace import Interval, gallery, make_uniform_grid, sequence_from_expression

# criterion label -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split()[0][2:])):
        ok, detail = ACCEPTANCE_RESULTS[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")


@pytest.fixture
def acceptance():
    """Record one acceptance criterion, then assert it."""

    def record(label: str, ok: bool, detail: str) -> None:
        ACCEPTANCE_RESULTS[label] = (bool(ok), detail)
        assert ok, f"{label}: {detail}"

    return record


@pytest.fixture
def unit():
    return Interval(0.0, 1.0)


@pytest.fixture
def zero_seq(unit):
    return sequence_from_expression("0*x", unit, id="zero")


@pytest.fixture
def gallery_grid():
    def build(gid: str, m: int = 4097):
        seq, lim = gallery(gid)
        return seq, lim, make_uniform_grid(seq.domain, m)

    return build
