ACCEPTANCE_LINES: dict[int, str] = {}


def record(criterion: int, name: str, passed: bool, detail: str) -> str:
    line = f"criterion {criterion} [{name}]: {'PASS' if passed else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES[criterion] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
