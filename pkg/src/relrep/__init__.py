"""Workbench for finite reducts of relation algebra.

Concrete relations, abstract finite structures, the demonic refinement
preorder, bounded representation games, the S_n counterexample family and
finite representation builders.
"""

from relrep.signature import Signature
from relrep.relcore import Rel

__all__ = ["Rel", "Signature"]
__version__ = "0.1.0"
