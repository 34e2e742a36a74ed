"""Semantic-network design representations from text and a pre-trained knowledge base."""

__version__ = "0.1.0"
