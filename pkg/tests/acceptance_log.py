"""One result line per acceptance criterion, collected across the session."""

LINES = []


def record(label, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {label:<4} {detail}"
    LINES.append(line)
    print(line)
    return ok


def sort_key(line):
    label = line.split()[1]
    digits = "".join(ch for ch in label if ch.isdigit())
    return int(digits), label
