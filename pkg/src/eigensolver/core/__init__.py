"""Core modules for polynomials, lattice polytopes, dense linear algebra and Macaulay matrices."""
