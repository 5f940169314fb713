"""
fluxlab: effective magnetic fields for cold atoms in optical lattices.

Numerical laboratory for the Peierls-phase lattice Hamiltonian, its
Hofstadter spectrum, density dynamics, Wannier calibration, Raman beam
geometry and the trapped Gutzwiller ground state.
"""

__version__ = "0.1.0"
