"""One line per acceptance criterion, filled in by test_acceptance."""
LINES: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES[n] = line
    print(line)
    return ok
