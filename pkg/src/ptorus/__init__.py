"""Punctured-torus bundles: laminations, mapping classes, Teichmueller traces and hyperbolic structures."""

__version__ = "0.1.0"
