"""Zigzag persistence descriptors of frame-wise 2D activity fields."""
