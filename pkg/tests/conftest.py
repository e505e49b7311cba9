import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion; printed at the end of the run."""

    def report(number: int, title: str, ok: bool, detail: str = ""):
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {title}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def verify_report():
    """One full catalogue run shared by the pipeline and acceptance tests."""
    from nilflex.pipeline import verify_all
    from nilflex.symplectic import DEFAULT_SEED

    return verify_all(seed=DEFAULT_SEED)
