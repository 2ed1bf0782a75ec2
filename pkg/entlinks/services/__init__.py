"""Computational services."""
