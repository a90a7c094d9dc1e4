"""Collects one result line per acceptance criterion for the terminal summary."""

LINES = []


def record(cid, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] {cid} {title}" + (f": {detail}" if detail else "")
    LINES.append(line)
    print(line)
    return ok
