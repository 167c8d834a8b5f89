"""Quadratic twists, Tate-Shafarevich groups and moderate-deviation statistics."""

__version__ = "0.1.0"
