"""Execution harness: runs emitted test files against the fixture library,
measures branch coverage via line-arc tracing, filters syntax-error and
flaky tests, and writes the coverage feedback file."""

__version__ = "0.1.0"
