"""pwlab: password corpus cleaning, characterization, strength
classification, and a scoring service."""

__version__ = "0.1.0"
