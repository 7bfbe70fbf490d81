"""Pointed harmonic volumes of the hyperelliptic curves w^2 = z^(2g+2) - 1
at their branch points, computed three independent ways: exact cyclotomic
closed forms, a mod-2 counting formula on homology, and numeric Chen
iterated integrals.
"""

from .analytic import (
    CurveParams,
    QmodZ,
    harmonic_volume,
    lambda_nu,
    period_a,
    period_b,
    t,
)
from .combinat import HalfInt, kappa, kappa_prime, psi
from .exactfield import CycloNum, OrderMismatchError, cyclotomic_polynomial
from .homology import (
    HTensor,
    HVector,
    NotInKError,
    expand_in_k_basis,
    intersection_pairing,
    is_in_K,
    k_basis,
    third_factors,
)
from .quadrature import (
    ChenIntegrator,
    FormSpec,
    PathWord,
    QuadratureError,
    a_word,
    b_word,
)

__all__ = [
    "ChenIntegrator",
    "CurveParams",
    "CycloNum",
    "FormSpec",
    "HTensor",
    "HVector",
    "HalfInt",
    "NotInKError",
    "OrderMismatchError",
    "PathWord",
    "QmodZ",
    "QuadratureError",
    "a_word",
    "b_word",
    "cyclotomic_polynomial",
    "expand_in_k_basis",
    "harmonic_volume",
    "intersection_pairing",
    "is_in_K",
    "k_basis",
    "kappa",
    "kappa_prime",
    "lambda_nu",
    "period_a",
    "period_b",
    "psi",
    "t",
    "third_factors",
]

__version__ = "0.1.0"
