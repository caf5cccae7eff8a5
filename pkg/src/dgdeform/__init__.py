"""Exact desk-scale deformation theory of DG modules.

The package computes Maurer-Cartan groupoids of DG algebras over
artinian coefficient algebras, their obstruction classes, and the
deformations and co-deformations they classify, using exact arithmetic
over Q or a prime field.
"""
from .fields import Field, Q, F2, F3, F5
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["Field", "Q", "F2", "F3", "F5", "BACKEND"]
