"""Coverage feedback file format shared with the execution harness.

Line format, bit-exact:

    #total-branches:<N>            (optional header, at most once, first)
    <test_id>\t<branch,branch,...> (one line per test; empty set allowed)

Branch identifiers are opaque strings without tabs, commas, or newlines.
"""

from __future__ import annotations

from .model import ValidationError

TOTAL_PREFIX = "#total-branches:"


def read_feedback(path: str) -> tuple[int | None, dict[str, frozenset]]:
    """Parse a feedback file into (total branch count, test id -> branches)."""
    total: int | None = None
    rows: dict[str, frozenset] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith(TOTAL_PREFIX):
                if lineno != 1 or total is not None:
                    raise ValidationError(f"{path}:{lineno}: stray total-branches header")
                try:
                    total = int(line[len(TOTAL_PREFIX):])
                except ValueError as exc:
                    raise ValidationError(f"{path}:{lineno}: malformed total-branches header") from exc
                continue
            if "\t" not in line:
                raise ValidationError(f"{path}:{lineno}: malformed feedback line (no tab)")
            test_id, _, branch_text = line.partition("\t")
            if not test_id:
                raise ValidationError(f"{path}:{lineno}: empty test id")
            branches = frozenset(b for b in branch_text.split(",") if b)
            rows[test_id] = branches
    return total, rows


def write_feedback(
    rows: dict[str, frozenset], path: str, total_branches: int | None = None
) -> None:
    """Write rows sorted by test id; branch ids sorted within each line."""
    with open(path, "w", encoding="utf-8") as fh:
        if total_branches is not None:
            fh.write(f"{TOTAL_PREFIX}{total_branches}\n")
        for test_id in sorted(rows):
            fh.write(f"{test_id}\t{','.join(sorted(rows[test_id]))}\n")
