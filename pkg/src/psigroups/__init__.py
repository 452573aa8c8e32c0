"""Exact sum-of-element-orders computations over small finite groups."""

from psigroups.group import FiniteGroup, SubgroupSet
from psigroups.psi import psi, psi_cyclic, psi_prime

__all__ = ["FiniteGroup", "SubgroupSet", "psi", "psi_cyclic", "psi_prime"]
__version__ = "0.1.0"
