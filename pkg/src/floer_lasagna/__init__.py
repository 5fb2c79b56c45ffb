"""Grid homology, unlink TQFT maps, cabled colimits and lasagna gradings over F2."""

__version__ = "0.1.0"
