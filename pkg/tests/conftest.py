import pytest

from quadrep import kernels

_ACCEPTANCE = {}


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


@pytest.fixture(scope="session")
def primes_1e6():
    return [int(p) for p in kernels.sieve_primes(10**6)]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _, passed, duration = _ACCEPTANCE.get(number, (title, True, 0.0))
        _ACCEPTANCE[number] = (title, passed and report.outcome == "passed", duration + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, duration = _ACCEPTANCE[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number}: {title} ({duration:.1f}s)")
