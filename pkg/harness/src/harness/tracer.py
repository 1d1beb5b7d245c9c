"""Single-test executor, run as a subprocess for isolation.

Usage: python -m harness.tracer TEST_FILE FIXTURE_PACKAGE OUT_JSON

Compiles and executes one emitted test file, calling every zero-argument
``test_*`` function it defines, while tracing line arcs inside the fixture
package's source files. Writes a JSON report: status (pass | fail |
syntax-error), the traced arcs per fixture file, and the error message if
any.
"""

from __future__ import annotations

import json
import os
import sys

from harness.branches import package_dir


def run_one(test_file: str, package: str) -> dict:
    with open(test_file, encoding="utf-8") as fh:
        source = fh.read()
    try:
        code = compile(source, test_file, "exec")
    except SyntaxError as exc:
        return {"status": "syntax-error", "arcs": {}, "error": str(exc)}

    root = os.path.abspath(package_dir(package)) + os.sep
    arcs: dict[str, set] = {}
    prev_lines: dict[int, int | None] = {}

    def tracer(frame, event, arg):
        filename = frame.f_code.co_filename
        if not filename.startswith(root):
            return None
        key = id(frame)
        if event == "call":
            prev_lines[key] = None
            return tracer
        if event == "line":
            prev = prev_lines.get(key)
            if prev is not None:
                relpath = package + "/" + os.path.relpath(filename, root)
                arcs.setdefault(relpath, set()).add((prev, frame.f_lineno))
            prev_lines[key] = frame.f_lineno
            return tracer
        if event == "return":
            prev_lines.pop(key, None)
        return tracer

    namespace: dict = {"__name__": "emitted_test", "__file__": test_file}
    status = "pass"
    error = ""
    sys.settrace(tracer)
    try:
        exec(code, namespace)
        tests = [
            fn
            for name, fn in sorted(namespace.items())
            if name.startswith("test") and callable(fn)
        ]
        for fn in tests:
            fn()
    except BaseException as exc:  # any runtime failure marks the test failed
        status = "fail"
        error = f"{type(exc).__name__}: {exc}"
    finally:
        sys.settrace(None)
    return {
        "status": status,
        "arcs": {path: sorted(list(pairs)) for path, pairs in sorted(arcs.items())},
        "error": error,
    }


def main(argv: list[str]) -> int:
    if len(argv) != 3:
        print("usage: python -m harness.tracer TEST_FILE FIXTURE_PACKAGE OUT_JSON", file=sys.stderr)
        return 2
    test_file, package, out_path = argv
    report = run_one(test_file, package)
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
