"""Exact computations with operads, their PROPs, and functor categories over them."""

__version__ = "0.1.0"
