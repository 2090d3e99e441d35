"""Multi-Hamiltonian structures of Toda-type lattices, verified by exact sampling."""
__version__ = "0.1.0"
