"""A miniature ML library used as the test-generation fixture.

Every public API validates its inputs eagerly and raises on constraint
violations, so invalid calls exercise shallow validation branches while
well-formed calls reach the numeric code paths. All behavior is
deterministic for given inputs (seeded randomness only).
"""

__version__ = "0.1.0"
