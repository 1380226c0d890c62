"""Correlation measures and entanglement for pure bipartite qutrits."""
