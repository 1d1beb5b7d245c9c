"""Deterministically flaky hook for exercising the harness's rerun filter.

The outcome alternates across invocations via a counter persisted in a state
file, so a test calling it fails on every second run without any real
randomness.
"""

import os


def alternating_outcome(state_file):
    """Raises on every second call recorded in ``state_file``."""
    if not isinstance(state_file, str):
        raise TypeError("state_file must be a path string")
    count = 0
    if os.path.exists(state_file):
        with open(state_file, encoding="utf-8") as fh:
            count = int(fh.read().strip() or "0")
    with open(state_file, "w", encoding="utf-8") as fh:
        fh.write(str(count + 1))
    if count % 2 == 1:
        raise RuntimeError("unstable hook flipped to failure")
    return count + 1
