"""Per-criterion outcomes collected by test_acceptance and printed at session end."""

from collections import defaultdict

# criterion number -> list of (part, status, detail); status is pass, fail or skip
RESULTS = defaultdict(list)
TITLES = {}


def record(number, title, part, status, detail=""):
    TITLES[number] = title
    RESULTS[number].append((part, status, detail))


def summary_lines():
    lines = []
    for n in sorted(TITLES):
        parts = RESULTS[n]
        statuses = {s for _, s, _ in parts}
        verdict = "FAIL" if "fail" in statuses else "PASS" if "pass" in statuses else "SKIP"
        notes = [f"{part}: {detail}" for part, s, detail in parts if s != "pass"]
        suffix = f" ({'; '.join(notes)})" if notes else ""
        lines.append(f"criterion {n} {verdict}: {TITLES[n]}{suffix}")
    return lines
