"""Shared store for the one-line acceptance verdicts printed at the end of a run."""

RESULTS: list[str] = []


def record(number: int, ok: bool, detail: str) -> str:
    line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS.append(line)
    print(line)
    return line
