"""Open relation extraction and typed entailment graphs for Chinese text."""

__version__ = "0.1.0"
