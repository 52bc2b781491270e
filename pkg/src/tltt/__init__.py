"""Two-level type theory reference implementation and combinatorics lab."""

__version__ = "0.1.0"
