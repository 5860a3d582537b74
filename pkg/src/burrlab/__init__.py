"""Critical values of Burr's problem: constructions, closed forms and an exhaustive oracle."""

__version__ = "0.1.0"
