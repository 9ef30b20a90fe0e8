from __future__ import annotations

CRITERIA_LINES: list[str] = []


def record(label: str, ok: bool, detail: str) -> None:
    line = f"CRITERION {label}: {'PASS' if ok else 'FAIL'} ({detail})"
    CRITERIA_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA_LINES:
            terminalreporter.write_line(line)
