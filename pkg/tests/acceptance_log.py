"""Shared record of acceptance verdicts, printed in the pytest summary."""

LINES = {}


def record(number, passed, detail):
    line = f"ACCEPTANCE {number} {'PASS' if passed else 'FAIL'}: {detail}"
    LINES[number] = line
    print(line)
    return passed
