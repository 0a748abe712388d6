import pytest

_RESULTS_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record a named acceptance verdict; the body's success decides PASS/FAIL."""
    results = request.config.stash.setdefault(_RESULTS_KEY, [])

    class Recorder:
        def __init__(self):
            self.label = request.node.name

        def __call__(self, label):
            self.label = label
            return self

        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            line = f"{'PASS' if exc_type is None else 'FAIL'}  {self.label}"
            results.append(line)
            print(line)
            return False

    return Recorder()


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS_KEY, [])
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
