"""2-class groups, units and Iwasawa-module verdicts for real quadratic fields."""

__version__ = "0.1.0"
