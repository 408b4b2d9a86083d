import re

ACCEPTANCE = re.compile(r"test_acceptance\.py::test_c(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for outcome in ("passed", "failed", "error", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = ACCEPTANCE.search(getattr(rep, "nodeid", ""))
            if m and (rep.when == "call" or outcome != "passed"):
                status = "PASS" if outcome == "passed" else "FAIL"
                key = int(m.group(1))
                if rows.get(key, (None, "PASS"))[1] == "PASS":
                    rows[key] = (m.group(2).replace("_", " "), status)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(rows):
        name, status = rows[key]
        terminalreporter.write_line(f"criterion {key:2d} {status}  {name}")
