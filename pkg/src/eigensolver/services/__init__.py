"""Service layer: admissible tuples, the eigenvalue solver, generators and benchmarks."""
