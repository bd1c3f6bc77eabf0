"""Localization relations for Hamiltonian torus actions with isolated fixed points."""
