"""Exact computer algebra for principal Whittaker data of classical Lie superalgebras."""

__version__ = "0.1.0"

from superw.algebra import (
    AlgebraError,
    LieSuperalgebra,
    bilinear_form,
    bracket,
    build_algebra,
    check_jacobi,
)
from superw.grading import (
    NilpotentData,
    WhittakerCharacter,
    build_m_and_zeta,
    dynkin_grading,
    is_nonsingular,
    principal_sl2,
)
from superw.pbw import Enveloping

__all__ = [
    "AlgebraError",
    "Enveloping",
    "LieSuperalgebra",
    "NilpotentData",
    "WhittakerCharacter",
    "bilinear_form",
    "bracket",
    "build_algebra",
    "build_m_and_zeta",
    "check_jacobi",
    "dynkin_grading",
    "is_nonsingular",
    "principal_sl2",
]
