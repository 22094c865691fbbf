"""Executable machinery for asphericity experiments: free-group word
algebra, Peiffer moves on Y-sequences with searchable certificates, finite
monoid actions and dominions, relation-module bookkeeping, and crossed-module
constructions over computable groups."""

__version__ = "0.1.0"
