"""Exact spectral computations for the classical, half-liberated and free spheres."""
