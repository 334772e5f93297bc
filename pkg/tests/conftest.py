import os

from hypothesis import HealthCheck, settings

# derandomized so that repeated runs of the suite explore the same examples
settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

# one pass/fail line per acceptance criterion, collected by tests/test_acceptance.py
CRITERION_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERION_LINES):
            terminalreporter.write_line(CRITERION_LINES[k])
