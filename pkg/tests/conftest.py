import checks


def pytest_terminal_summary(terminalreporter):
    if checks.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in checks.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
