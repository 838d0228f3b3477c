"""minitutor: feedback engine for beginner exercises in a small typed
functional language with holes."""

__version__ = "0.1.0"
