import re

CRITERION_LINE = re.compile(r"^\[(PASS|FAIL)\] criterion \d+:.*$", re.MULTILINE)


def pytest_terminal_summary(terminalreporter):
    """Collect the acceptance criterion lines into one block at the end of the run."""
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when == "call" and "test_acceptance" in rep.nodeid:
                lines += [m.group(0) for m in CRITERION_LINE.finditer(rep.capstdout)]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
