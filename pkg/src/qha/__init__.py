"""qha: exact construction and verification of finite quasi-Hopf algebras
of Cartan type over abelian groups."""

from qha.cyclotomic import CycloNumber, zeta

__all__ = ["CycloNumber", "zeta"]
__version__ = "0.1.0"
