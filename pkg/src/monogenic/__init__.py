"""Computational Clifford analysis.

Exact arithmetic in Cl_n (e_j^2 = -1), symbolic Dirac calculus, the
Cauchy-type kernel family, monogenic series and decompositions, Moebius
covariance, and quadrature realizations of the boundary integral formulas.
"""

from .algebra import (
    AlgebraContext,
    AlgebraError,
    Multivector,
    RATIONAL,
    FLOAT,
    COMPLEX,
    format_multivector,
    parse_multivector,
    quaternion_projectors,
    unital_isomorphism,
    wedge,
)
from .symcalc import (
    CliffordPolynomial,
    RadialExpr,
    VECTOR,
    UNITAL,
    angular,
    dirac_left,
    dirac_right,
    dirac_unital,
    dirac_unital_conj,
    euler,
    laplacian,
    reduce_mod_sphere,
    vector_power_polynomial,
)

__all__ = [
    "AlgebraContext",
    "AlgebraError",
    "Multivector",
    "RATIONAL",
    "FLOAT",
    "COMPLEX",
    "format_multivector",
    "parse_multivector",
    "quaternion_projectors",
    "unital_isomorphism",
    "wedge",
    "CliffordPolynomial",
    "RadialExpr",
    "VECTOR",
    "UNITAL",
    "angular",
    "dirac_left",
    "dirac_right",
    "dirac_unital",
    "dirac_unital_conj",
    "euler",
    "laplacian",
    "reduce_mod_sphere",
    "vector_power_polynomial",
]

__version__ = "0.1.0"
