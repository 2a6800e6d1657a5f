import pytest
from hypothesis import HealthCheck, settings

from icpsk import fixtures

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# fixture name -> code names with their lengths
CODES = {
    "example1": ["example1_L"],
    "example2": ["example2_L"],
    "example3": ["example3_L"],
    "example4": ["example4_L"],
    "example5": ["example5_L1", "example5_L2", "example5_L3"],
    "example6": ["example6_L1", "example6_L2", "example6_L3"],
}
PAIRS = [(ex, c) for ex, codes in CODES.items() for c in codes]


@pytest.fixture(params=PAIRS, ids=[c for _, c in PAIRS])
def fixture_pair(request):
    ex, c = request.param
    return fixtures.problem(ex), fixtures.matrix(c)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
