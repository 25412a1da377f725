"""Linear gauge structures of stabilizer codes.

Modules
-------
f2linalg      bit-packed linear algebra over GF(2)
pauli         Pauli operators, lattices and the symplectic form
codes         toric, X-cube and Haah codes, changes of boundary
gauge         constraints, syndromes, logical operators and distance
polyform      Laurent-polynomial stabilizer maps
continuum     differential-operator gauge structures and Maxwell operators
newman_moore  [111]-constant Haah constraints as coupled Newman-Moore layers
estimator     scikit-learn style syndrome transformer
cli           command-line interface
"""

from .codes import (
    FAMILIES,
    ChangeOfBoundary,
    StabilizerCode,
    build_change_of_boundary,
    build_code,
    build_haah,
    build_toric,
    build_xcube,
)
from .f2linalg import BitVec, F2Matrix
from .gauge import F2GaugeStructure, analyze, constraint_space, is_syndrome, logical_space
from .pauli import Lattice, PauliOperator

__version__ = "0.1.0"

__all__ = [
    "FAMILIES",
    "BitVec",
    "F2Matrix",
    "Lattice",
    "PauliOperator",
    "StabilizerCode",
    "ChangeOfBoundary",
    "F2GaugeStructure",
    "build_code",
    "build_toric",
    "build_xcube",
    "build_haah",
    "build_change_of_boundary",
    "analyze",
    "constraint_space",
    "is_syndrome",
    "logical_space",
]
