"""Exact computations with Chevalley algebras, lifted p-power maps and
Artin-Hasse exponentials in positive characteristic."""

from .chevalley import AlgebraElement, ChevalleyAlgebra, algebra
from .exactnum import GF, QQ

__all__ = ["AlgebraElement", "ChevalleyAlgebra", "GF", "QQ", "algebra"]
__version__ = "0.1.0"
