"""Samplers and tests built on the shared geometry in ``core``."""
