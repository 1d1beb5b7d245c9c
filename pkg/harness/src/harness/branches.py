"""Static enumeration of branch outcomes as line arcs.

Each if/elif contributes a true and a false outcome, each loop an iterate
and an exit outcome. An outcome is witnessed by one line arc (source line ->
destination line) that execution can only take when that outcome occurs:
the test line flows to the branch's first body line, to the else's first
line, to the statement after the branch, or back to the loop header. This
requires the fixture style it is used with: single-line conditions and no
branch statement as the last statement of a function body.

Branch ids are stable strings ``<relpath>:<line>:<T|F|ITER|EXIT>``.
"""

from __future__ import annotations

import ast
import importlib.util
import os
from dataclasses import dataclass

#: fixture files that are harness plumbing, not measured surface
DEFAULT_EXCLUDE = ("unstable.py",)


class BranchLayoutError(Exception):
    """Raised when fixture code violates the arc-evidence conventions."""


@dataclass(frozen=True)
class BranchOutcome:
    branch_id: str
    arc: tuple[int, int]  # (source line, destination line)


def package_dir(package: str) -> str:
    spec = importlib.util.find_spec(package)
    if spec is None or not spec.submodule_search_locations:
        raise ModuleNotFoundError(f"fixture package {package!r} not importable")
    return list(spec.submodule_search_locations)[0]


def _first_line(node: ast.stmt) -> int:
    return node.lineno


def _walk_block(stmts: list, successor: int | None, relpath: str, out: list) -> None:
    for i, stmt in enumerate(stmts):
        next_line = _first_line(stmts[i + 1]) if i + 1 < len(stmts) else successor
        _walk_statement(stmt, next_line, relpath, out)


def _walk_statement(stmt: ast.stmt, successor: int | None, relpath: str, out: list) -> None:
    if isinstance(stmt, ast.If):
        line = stmt.lineno
        true_target = _first_line(stmt.body[0])
        out.append(BranchOutcome(f"{relpath}:{line}:T", (line, true_target)))
        if stmt.orelse:
            false_target = _first_line(stmt.orelse[0])
        elif successor is not None:
            false_target = successor
        else:
            raise BranchLayoutError(
                f"{relpath}:{line}: else-less if at the end of a function body"
            )
        out.append(BranchOutcome(f"{relpath}:{line}:F", (line, false_target)))
        _walk_block(stmt.body, successor, relpath, out)
        if stmt.orelse:
            _walk_block(stmt.orelse, successor, relpath, out)
    elif isinstance(stmt, (ast.For, ast.While)):
        line = stmt.lineno
        body_target = _first_line(stmt.body[0])
        out.append(BranchOutcome(f"{relpath}:{line}:ITER", (line, body_target)))
        if stmt.orelse:
            exit_target = _first_line(stmt.orelse[0])
        elif successor is not None:
            exit_target = successor
        else:
            raise BranchLayoutError(
                f"{relpath}:{line}: loop at the end of a function body"
            )
        out.append(BranchOutcome(f"{relpath}:{line}:EXIT", (line, exit_target)))
        for node in ast.walk(stmt):
            if isinstance(node, ast.Break):
                raise BranchLayoutError(f"{relpath}:{line}: break inside a measured loop")
        # statements at the body tail fall through to the loop header
        _walk_block(stmt.body, line, relpath, out)
        if stmt.orelse:
            _walk_block(stmt.orelse, successor, relpath, out)
    elif isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef)):
        _walk_block(stmt.body, None, relpath, out)
    elif isinstance(stmt, ast.ClassDef):
        _walk_block(stmt.body, None, relpath, out)
    elif isinstance(stmt, ast.With):
        _walk_block(stmt.body, successor, relpath, out)
    elif isinstance(stmt, ast.Try):
        raise BranchLayoutError(f"{relpath}:{stmt.lineno}: try blocks are not measurable")


def enumerate_file(path: str, relpath: str) -> list[BranchOutcome]:
    with open(path, encoding="utf-8") as fh:
        tree = ast.parse(fh.read(), filename=path)
    out: list[BranchOutcome] = []
    _walk_block(tree.body, None, relpath, out)
    return out


def enumerate_package(package: str, exclude: tuple[str, ...] = DEFAULT_EXCLUDE) -> list[BranchOutcome]:
    """All branch outcomes of a fixture package, sorted by id."""
    root = package_dir(package)
    outcomes: list[BranchOutcome] = []
    for name in sorted(os.listdir(root)):
        if not name.endswith(".py") or name in exclude:
            continue
        relpath = f"{package}/{name}"
        outcomes.extend(enumerate_file(os.path.join(root, name), relpath))
    return sorted(outcomes, key=lambda o: o.branch_id)


def covered_outcomes(
    outcomes: list[BranchOutcome], arcs_by_file: dict[str, set]
) -> set[str]:
    """Branch ids whose witness arc appears in the traced arcs."""
    covered: set[str] = set()
    for outcome in outcomes:
        relpath = outcome.branch_id.rsplit(":", 2)[0]
        if outcome.arc in arcs_by_file.get(relpath, set()):
            covered.add(outcome.branch_id)
    return covered
