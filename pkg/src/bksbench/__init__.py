"""Exact tools for Kochen-Specker contextuality proofs in four dimensions."""

__version__ = "0.1.0"
