"""Pass/fail record for the acceptance criteria, printed in the pytest summary."""

RESULTS = {}


def record(key, ok, text):
    RESULTS[key] = (bool(ok), text)
    print(f"[{'PASS' if ok else 'FAIL'}] {key}: {text}")
