"""Exact Macdonald polynomials, their normalized characters, and the
(q, t)-Gelfand-Tsetlin graph with its boundary functions.

Submodules:

* ``qkernel``    exact and certified q-series primitives
* ``gtcombin``   signatures, interlacing, boundary sequences
* ``macpoly``    Macdonald polynomials via the branching rule
* ``jactrudi``   the C-coefficient functions and the Jacobi-Trudi expansion
* ``qchar``      normalized characters, residue and multiplicative formulas
* ``qtboundary`` links, coherent measures, Phi^nu
"""

from .errors import ConsistencyError, DomainError, MacError, PoleError
from .gtcombin import NuSpec, parse_nu
from .laurent import LaurentPoly
from .qkernel import CertifiedReal, QParams

__version__ = "0.1.0"

__all__ = [
    "CertifiedReal", "ConsistencyError", "DomainError", "LaurentPoly", "MacError",
    "NuSpec", "PoleError", "QParams", "parse_nu", "__version__",
]
