
import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    """Run a test once per kernel path."""
    if request.param == "numpy":
        monkeypatch.setenv("TRAPOLY_DISABLE_NUMBA", "1")
    else:
        from trapoly._backend import HAVE_NUMBA

        if not HAVE_NUMBA:
            pytest.skip("numba not installed")
        monkeypatch.delenv("TRAPOLY_DISABLE_NUMBA", raising=False)
    return request.param


from hypothesis import settings  # noqa: E402

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


# acceptance verdicts, echoed in the terminal summary so they survive capture
_VERDICTS = {}


@pytest.fixture
def verdict():
    def record(number, ok, detail, extra=()):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _VERDICTS[number] = [line, *extra]
        print(line)
        for e in extra:
            print(e)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        for line in _VERDICTS[number]:
            terminalreporter.write_line(line)
