import pytest

from corpus import build_sweep, corpus_scene, write_scene_dir

_ACCEPTANCE_RESULTS = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _ACCEPTANCE_RESULTS[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        outcome = _ACCEPTANCE_RESULTS[name]
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}")


@pytest.fixture(scope="session")
def corpus10():
    """The ten deterministic corpus scenes as Images."""
    return [corpus_scene(i) for i in range(10)]


@pytest.fixture(scope="session")
def scenes_dir3(tmp_path_factory):
    """Directory holding the first three corpus scenes as PNG files."""
    directory = tmp_path_factory.mktemp("scenes3")
    write_scene_dir(directory, 3)
    return directory


@pytest.fixture(scope="session")
def jpeg_sweep10(tmp_path_factory):
    """Default-schedule JPEG datasets for the ten corpus scenes."""
    root = tmp_path_factory.mktemp("sweep_jpeg")
    return build_sweep(root, "jpeg", 10)


@pytest.fixture(scope="session")
def light_sweep10(tmp_path_factory):
    """Default-schedule brightness datasets for the ten corpus scenes."""
    root = tmp_path_factory.mktemp("sweep_light")
    return build_sweep(root, "light", 10)


@pytest.fixture
def texture_scene():
    """A corpus scene with structure every detector family responds to."""
    return corpus_scene(0)
