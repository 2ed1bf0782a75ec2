"""Entanglement-link quench toolkit for free-fermion chains."""
