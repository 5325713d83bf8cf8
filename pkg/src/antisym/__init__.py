"""Antisymmetric colorings of rational sets and exact verifiers for them."""

__version__ = "0.1.0"
