"""Exact motivic classes of Hurwitz spaces of low-degree covers of P^1, with finite-field oracles."""

__version__ = "0.1.0"
