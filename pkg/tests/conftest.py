import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    module = sys.modules.get("test_acceptance") \
        or sys.modules.get("tests.test_acceptance")
    if module is None or not getattr(module, "RESULTS", None):
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
