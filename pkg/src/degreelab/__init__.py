"""Finite-model laboratory for Weihrauch-style degrees of multivalued problems."""

__version__ = "0.1.0"
