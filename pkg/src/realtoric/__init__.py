"""Exact combinatorial invariants of real Lagrangians in toric symplectic manifolds."""
