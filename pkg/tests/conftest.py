import time
from contextlib import contextmanager

ACCEPTANCE_RESULTS = []


@contextmanager
def criterion(label, budget_s):
    """Record pass/fail and wall time of one acceptance criterion; enforce its time budget."""
    start = time.perf_counter()
    entry = {"label": label, "ok": False, "elapsed": 0.0, "note": ""}
    ACCEPTANCE_RESULTS.append(entry)
    try:
        yield entry
        entry["elapsed"] = time.perf_counter() - start
        assert entry["elapsed"] < budget_s, f"{label}: {entry['elapsed']:.1f}s exceeds {budget_s}s"
        entry["ok"] = True
    finally:
        entry["elapsed"] = time.perf_counter() - start


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for e in ACCEPTANCE_RESULTS:
        status = "PASS" if e["ok"] else "FAIL"
        note = f"  {e['note']}" if e["note"] else ""
        terminalreporter.write_line(f"[{status}] {e['label']} ({e['elapsed']:.2f}s){note}")
