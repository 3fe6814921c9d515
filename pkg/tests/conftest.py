import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from extremal_domains.geometry import AnalyticCurve, PlanarDomain

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def disk():
    return PlanarDomain.disk(1.0)


@pytest.fixture(scope="session")
def annulus():
    return PlanarDomain.annulus(1.0, 0.5)


@pytest.fixture(scope="session")
def ellipse():
    return PlanarDomain.ellipse(1.0, 0.6)


@pytest.fixture(scope="session")
def ellipse_ring():
    """Doubly-connected domain bounded by the (1, 0.6) ellipse and |z| = 0.3."""
    return PlanarDomain(AnalyticCurve.ellipse(1.0, 0.6), [AnalyticCurve.circle(0j, 0.3, "inner")])


def star_curve(amps, phases, radius=1.0):
    """r(t) = radius (1 + sum amps_k cos(k t + phase_k)), k = 2, 3, ..."""
    t = 2 * np.pi * np.arange(256) / 256
    r = radius * (1 + sum(a * np.cos((k + 2) * t + p) for k, (a, p) in enumerate(zip(amps, phases))))
    return AnalyticCurve.from_samples(r * np.exp(1j * t))


# ------------------------------------------------ acceptance summary lines

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        n, title = mark.args
        _CRITERIA[n] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}  {status}  {title}")
