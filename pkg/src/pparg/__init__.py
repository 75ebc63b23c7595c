"""Verb-PP argumenthood: dataset construction, pair classifiers, and
gradient-judgment regression."""

__version__ = "0.1.0"
