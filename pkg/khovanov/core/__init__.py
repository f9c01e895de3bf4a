"""Exact algebra: ring, diagrams, TQFT maps, cube, complex, homology."""
