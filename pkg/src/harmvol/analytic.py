"""Closed-form engine on the curve w^2 = z^(2g+2) - 1.

Everything here is exact: power sums t_u, period matrix entries, the
depth-2 iterated integrals over the a/b loops, line integrals along the
base-point path, the base-point correction, and the assembled pointed
harmonic volume by two independent exact routes (value table vs composed
from the base-point table plus correction).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactfield import CycloNum
from .homology import (
    HTensor,
    KBasisElement,
    check_in_K_otimes_H,
    expand_in_k_basis,
    k_basis,
    pairing_of_symbols,
)


@dataclass(frozen=True)
class QmodZ:
    """Exact rational residue in [0, 1)."""

    value: Fraction

    def __init__(self, value):
        object.__setattr__(self, "value", Fraction(value) % 1)

    def __add__(self, other):
        if isinstance(other, QmodZ):
            other = other.value
        return QmodZ(self.value + other)

    def __neg__(self):
        return QmodZ(-self.value)

    def __sub__(self, other):
        if isinstance(other, QmodZ):
            other = other.value
        return QmodZ(self.value - other)

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class CurveParams:
    """Genus and derived constants of the curve w^2 = z^(2g+2) - 1."""

    g: int
    N: int = field(init=False)
    mu: Fraction = field(init=False)

    def __post_init__(self):
        if self.g < 2:
            raise ValueError("genus must be >= 2")
        object.__setattr__(self, "N", 2 * self.g + 2)
        object.__setattr__(self, "mu", Fraction(1, self.N))

    @property
    def zeta(self) -> CycloNum:
        return CycloNum.zeta(self.N)

    def zeta_pow(self, u: int) -> CycloNum:
        return CycloNum.zeta(self.N, u)


@lru_cache(maxsize=None)
def _t_cached(g: int, u_mod: int) -> CycloNum:
    params = CurveParams(g)
    N = params.N
    if u_mod % N == 0:
        value = CycloNum.from_rational(N, g)
    elif u_mod % 2 == 0:
        value = CycloNum.from_rational(N, -1)
    else:
        zu = params.zeta_pow(u_mod)
        value = (1 + zu) / (1 - zu)
    # the case table must agree with the defining power sum
    power_sum = CycloNum.from_rational(N, 0)
    for p in range(1, g + 1):
        power_sum = power_sum + params.zeta_pow(u_mod * p)
    assert value == power_sum, "t_u case table disagrees with its power sum"
    return value


def t(u: int, params: CurveParams) -> CycloNum:
    """Power sum of zeta^u over the first g powers, by its case table."""
    return _t_cached(params.g, u % params.N)


def period_a(i: int, j: int, params: CurveParams) -> CycloNum:
    """Entry (i, j) of the a-loop period matrix of the normalized forms."""
    _check_form_index(i, params)
    _check_form_index(j, params)
    return params.zeta_pow(i * (2 * j - 1)) * (1 - params.zeta_pow(i))


def period_b(i: int, j: int, params: CurveParams) -> CycloNum:
    """Entry (i, j) of the b-loop period matrix of the normalized forms."""
    _check_form_index(i, params)
    _check_form_index(j, params)
    return (params.zeta_pow(2 * i * j) - 1) / (params.zeta_pow(i) + 1)


def _check_form_index(i: int, params: CurveParams):
    if not 1 <= i <= params.g:
        raise ValueError(f"form index {i} out of range for genus {params.g}")


def period_matrix(which: str, params: CurveParams) -> list:
    fn = period_a if which == "a" else period_b
    g = params.g
    return [[fn(i, j, params) for j in range(1, g + 1)] for i in range(1, g + 1)]


def matrix_inverse(m: list, params: CurveParams) -> list:
    """Exact inverse over Q(zeta) by Gauss-Jordan elimination."""
    g = len(m)
    one = CycloNum.from_rational(params.N, 1)
    zero = CycloNum.from_rational(params.N, 0)
    aug = [
        list(row) + [one if i == j else zero for j in range(g)]
        for i, row in enumerate(m)
    ]
    for col in range(g):
        pivot = next(r for r in range(col, g) if not aug[r][col].is_zero())
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(g):
            if r != col and not aug[r][col].is_zero():
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [row[g:] for row in aug]


def matrix_determinant(m: list, params: CurveParams) -> CycloNum:
    g = len(m)
    rows = [list(r) for r in m]
    det = CycloNum.from_rational(params.N, 1)
    for col in range(g):
        pivot = next(
            (r for r in range(col, g) if not rows[r][col].is_zero()), None
        )
        if pivot is None:
            return CycloNum.from_rational(params.N, 0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det = det * rows[col][col]
        inv = rows[col][col].inverse()
        for r in range(col + 1, g):
            factor = rows[r][col] * inv
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def iter_ab_closed(i: int, j: int, k: int, loop: str, params: CurveParams) -> CycloNum:
    """Exact depth-2 integral of alpha_i then beta_j over loop a_k or b_k."""
    for idx in (i, j, k):
        _check_form_index(idx, params)
    g = params.g
    scale = Fraction(-1, 2 * (g + 1) ** 2)
    if loop == "a":
        value = t(2 * k - 2 * i, params) * (
            t(2 * k - 2 * j, params) - t(2 * k, params)
        )
    elif loop == "b":
        value = CycloNum.from_rational(params.N, 0)
        for u in range(1, k + 1):
            inner = CycloNum.from_rational(params.N, 0)
            for v in range(1, j + 1):
                inner = inner + t(2 * v + 2 * u - 2 * j - 2, params)
            value = value + (
                t(2 * u - 2 * i - 2, params) - t(2 * u - 2 * i, params)
            ) * inner
    else:
        raise ValueError("loop must be 'a' or 'b'")
    result = value * scale
    assert result.real_part() == result, "iterated integral must be real"
    return result


def ell_integral(kind: str, i: int, nu: int, params: CurveParams) -> Fraction:
    """Exact line integral of alpha_i or beta_i along the base-point path."""
    _check_form_index(i, params)
    if not 0 <= nu <= 2 * params.g + 1:
        raise ValueError("nu out of range")
    g = params.g
    if kind == "alpha":
        total = t(nu - 2 * i, params) + t(nu - 2 * i + 1, params)
        scale = Fraction(1, 2 * (g + 1))
    elif kind == "beta":
        total = CycloNum.from_rational(params.N, 0)
        for u in range(nu - 2 * i + 1, nu + 1):
            total = total + t(u, params)
        scale = Fraction(-1, 2 * (g + 1))
    else:
        raise ValueError("kind must be 'alpha' or 'beta'")
    rational = total.real_part().try_rational()
    assert rational is not None, "real part of an even t-sum must be rational"
    return rational * scale


def _ell_of_symbol(sym, nu: int, params: CurveParams) -> Fraction:
    kind, i = sym
    return ell_integral("alpha" if kind == "x" else "beta", i, nu, params)


def lambda_nu(A: HTensor, nu: int, params: CurveParams) -> QmodZ:
    """Base-point correction, trilinearly extended over the terms of A."""
    check_in_K_otimes_H(A)
    total = Fraction(0)
    for (h1, h2, h3), coeff in A.terms.items():
        total += coeff * (
            pairing_of_symbols(h1, h3) * _ell_of_symbol(h2, nu, params)
            - pairing_of_symbols(h2, h3) * _ell_of_symbol(h1, nu, params)
        )
    return QmodZ(total)


def i_q0_table(elem: KBasisElement, third, params: CurveParams) -> QmodZ:
    """Base-point volume of a canonical basis element, from the value table.

    Case-1 rows are tabulated with the third factor sharing the FIRST
    index; a third factor sharing the second index is reduced to a listed
    row through the antisymmetry of the first two slots.
    """
    g, mu = params.g, params.mu
    t3, k = third
    if elem.case == 1:
        return QmodZ(_i_q0_case1(elem.types, elem.i, elem.j, t3, k, g, mu))
    if elem.case == 2:
        # evaluated from the exact closed forms for iterated integrals of
        # alpha_m beta_m over a_k / b_k: int over b_k of alpha_i beta_i
        # contributes 1/2 whenever k > i, which yields 1/2 at y_k, 1 < k < i
        i = elem.i
        loop = "a" if t3 == "x" else "b"
        diff = iter_ab_closed(i, i, k, loop, params) - iter_ab_closed(
            1, 1, k, loop, params
        )
        rational = diff.try_rational()
        assert rational is not None
        return QmodZ(rational)
    if elem.case == 3:
        return QmodZ(0)
    if elem.case == 4:
        t1, _ = elem.types
        if k == elem.i and {t1, t3} == {"x", "y"}:
            return QmodZ(Fraction(1, 2))
        return QmodZ(0)
    raise ValueError("non-canonical basis element")


def _i_q0_case1(types, a, b, t3, k, g, mu) -> Fraction:
    t1, t2 = types
    if k == a:
        if t3 == t1:
            return Fraction(0)
        key = (t1, t2)
        if key == ("x", "x"):
            return mu
        if key == ("x", "y"):
            return (g - b + 1) * mu if a < b else (2 * g - b + 2) * mu
        if key == ("y", "x"):
            return (2 * g + 1) * mu
        return (g + b + 1) * mu if a < b else b * mu
    if k == b:
        # antisymmetry in the first two slots
        return -_i_q0_case1((t2, t1), b, a, t3, k, g, mu)
    return Fraction(0)


def case_table_value(
    elem: KBasisElement, third, nu: int, params: CurveParams
) -> QmodZ:
    """Pointed harmonic volume of a basis element, from the main value table."""
    g = params.g
    t3, k = third
    half = QmodZ(Fraction(1, 2))
    zero = QmodZ(0)
    if elem.case == 1:
        (t1, a), (t2, b) = (elem.types[0], elem.i), (elem.types[1], elem.j)
        if k == a and t3 != t1:
            other_type, m = t2, b
        elif k == b and t3 != t2:
            other_type, m = t1, a
        else:
            return zero
        if other_type == "x":
            return half if nu in (2 * m - 1, 2 * m) else zero
        hit = (k < m and nu > 2 * m - 1) or (k > m and nu <= 2 * m - 1)
        return half if hit else zero
    if elem.case == 2:
        i = elem.i
        if (t3, k) == ("x", i):
            return half if nu not in (2 * i - 1, 2 * i) else zero
        if (t3, k) == ("y", i):
            return half if nu <= 2 * i - 1 else zero
        if (t3, k) == ("x", 1):
            return half if nu not in (1, 2) else zero
        if (t3, k) == ("y", 1):
            return half if nu > 1 else zero
        if t3 == "y" and 1 < k < i:
            # nu-independent 1/2 from the closed forms: over b_k the
            # alpha_i beta_i part vanishes (k < i) while the subtracted
            # alpha_1 beta_1 part contributes 1/2 (k > 1)
            return half
        return zero
    if elem.case == 3:
        return zero
    if elem.case == 4:
        t1, _ = elem.types
        if k == elem.i and {t1, t3} == {"x", "y"}:
            return half
        return zero
    raise ValueError("non-canonical basis element")


def composed_value(
    elem: KBasisElement, third, nu: int, params: CurveParams
) -> QmodZ:
    """I_Q0 table value plus the exact base-point correction."""
    return i_q0_table(elem, third, params) + lambda_nu(
        elem.tensor.tensor(third), nu, params
    )


@lru_cache(maxsize=None)
def basis_values(g: int, nu: int, engine: str) -> dict:
    """Engine value on every (basis element, third factor), as Fractions."""
    params = CurveParams(g)
    fn = composed_value if engine == "composed" else case_table_value
    from .homology import third_factors

    out = {}
    for idx, elem in enumerate(k_basis(g)):
        for third in third_factors(g):
            value = fn(elem, third, nu, params)
            assert value.value in (
                Fraction(0),
                Fraction(1, 2),
            ), f"engine {engine} left {{0, 1/2}} at {elem.label} (x) {third}"
            out[(idx, third)] = value.value
    return out


def harmonic_volume(
    A: HTensor, nu: int, params: CurveParams, engine: str = "composed"
) -> QmodZ:
    """Pointed harmonic volume of A at base index nu by an exact engine."""
    if engine not in ("composed", "table"):
        raise ValueError("engine must be 'composed' or 'table'")
    if not 0 <= nu <= 2 * params.g + 1:
        raise ValueError("nu out of range")
    coeffs = expand_in_k_basis(A)
    values = basis_values(params.g, nu, engine)
    total = sum((c * values[key] for key, c in coeffs.items()), Fraction(0))
    result = QmodZ(total)
    assert result.value in (Fraction(0), Fraction(1, 2))
    return result
