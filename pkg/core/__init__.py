"""Core library for rank-2 hypergeometric motives."""
