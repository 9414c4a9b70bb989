"""Exact computations with positive tropical points of Grassmannian cones and
flag configuration spaces."""

__version__ = "0.1.0"
