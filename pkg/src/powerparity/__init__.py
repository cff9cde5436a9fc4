"""Parity of the number of parts in partitions into k-th powers and related part sets."""

__version__ = "0.1.0"
