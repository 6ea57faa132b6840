"""Workbench for Hilbert C*-extensions of finite-dimensional block algebras.

Given a finite abelian group acting on a block algebra through outer
classes, the package constructs the twisted extension algebra spanned by
unitaries over the group, verifies the unitary-valued 2-cocycle calculus
behind the construction, classifies extensions by exact center-valued
cohomology, and realizes everything on a concrete Hilbert space where the
intrinsic C*-norm becomes an operator norm.
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraElement,
    Automorphism,
    BlockAlgebra,
    CentralUnitary,
    gauge_normalize,
    intertwiner_space,
    relative_commutant,
    solve_inner_cocycle,
)
from .groups import FiniteAbelianGroup

__all__ = [
    "AlgebraElement",
    "Automorphism",
    "BlockAlgebra",
    "CentralUnitary",
    "FiniteAbelianGroup",
    "gauge_normalize",
    "intertwiner_space",
    "relative_commutant",
    "solve_inner_cocycle",
    "__version__",
]
