"""Homological Conley indices of multivalued cubical maps and the
connection homomorphism of attractor-repeller decompositions."""

__version__ = "0.1.0"
