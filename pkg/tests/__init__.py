"""Test package for manifold-sampling."""
