"""Exact arithmetic in the cyclotomic field Q(zeta_N).

Elements are polynomials in zeta with rational coefficients, kept fully
reduced modulo the N-th cyclotomic polynomial, so equality is structural.
Division works through the extended Euclidean algorithm over Q[z].
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath


class OrderMismatchError(ValueError):
    """Two cyclotomic numbers from fields of different order were combined."""


def euler_phi(n: int) -> int:
    result = n
    p, m = 2, n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly_trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _poly_trim(
        [
            (a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0)
            for k in range(n)
        ]
    )


def _poly_divmod(num, den):
    """Exact division of polynomials with Fraction-safe coefficients."""
    num = list(num)
    den = _poly_trim(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [0] * max(0, len(num) - len(den) + 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        if c == 0:
            continue
        q = Fraction(c, 1) / den[-1] if not isinstance(c, Fraction) else c / den[-1]
        quot[k] = q
        for j, dj in enumerate(den):
            num[k + j] -= q * dj
    return quot, _poly_trim(num)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients of Phi_n (ascending order, monic, integer)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return (-1, 1)
    # divide z^n - 1 by Phi_d for every proper divisor d | n
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            quot, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not rem, "cyclotomic division must be exact"
            num = quot
    coeffs = tuple(int(c) for c in num)
    assert all(Fraction(c).denominator == 1 for c in num)
    return coeffs


class CycloNum:
    """An element of Q(zeta_N), N even, stored reduced mod Phi_N."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        phi = euler_phi(order)
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > phi:
            coeffs = _reduce_mod_phi(order, coeffs)
        coeffs += [Fraction(0)] * (phi - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    # --- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, order: int, value) -> "CycloNum":
        return cls(order, [Fraction(value)])

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CycloNum":
        """zeta^power, any integer power (reduced mod order first)."""
        power %= order
        return cls(order, [0] * power + [1])

    # --- ring/field arithmetic ----------------------------------------

    def _check(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.order != self.order:
                raise OrderMismatchError(
                    f"order mismatch: {self.order} vs {other.order}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum.from_rational(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloNum(
            self.order, [a + b for a, b in zip(self.coeffs, other.coeffs)]
        )

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloNum(
            self.order, _poly_mul(list(self.coeffs), list(other.coeffs))
        )

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta)")
        # extended Euclid over Q[z]: s*a + t*Phi = gcd = const
        a = _poly_trim(self.coeffs)
        b = [Fraction(c) for c in cyclotomic_polynomial(self.order)]
        s0, s1 = [Fraction(1)], []
        r0, r1 = a, b
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        assert len(r0) == 1, "Phi_N is irreducible, gcd must be a unit"
        inv_gcd = 1 / r0[0]
        return CycloNum(self.order, [c * inv_gcd for c in s0])

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        acc = CycloNum.from_rational(self.order, 1)
        base = self
        while exponent:
            if exponent & 1:
                acc = acc * base
            base = base * base
            exponent >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloNum.from_rational(self.order, other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # --- structure maps -------------------------------------------------

    def conj(self) -> "CycloNum":
        """Complex conjugation, zeta -> zeta^(N-1)."""
        out = CycloNum.from_rational(self.order, 0)
        for k, c in enumerate(self.coeffs):
            if c:
                out = out + CycloNum.zeta(self.order, -k) * c
        return out

    def real_part(self) -> "CycloNum":
        return (self + self.conj()) * Fraction(1, 2)

    def try_rational(self):
        """The element as a Fraction if it is rational, else None."""
        if any(c != 0 for c in self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def embed(self, precision: int = 128) -> mpmath.mpc:
        """Evaluate at zeta = exp(2*pi*i/N) with the given bit precision."""
        if precision < 53:
            raise ValueError("precision must be at least 53 bits")
        with mpmath.workprec(precision + 16):
            zeta = mpmath.expjpi(mpmath.mpf(2) / self.order)
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * zeta + mpmath.mpf(c.numerator) / c.denominator
        return +acc

    def __repr__(self):
        return f"CycloNum(order={self.order}, coeffs={list(self.coeffs)})"


def _reduce_mod_phi(order, coeffs):
    _, rem = _poly_divmod(coeffs, list(cyclotomic_polynomial(order)))
    return rem


def field_arith(a: CycloNum, b: CycloNum, op: str) -> CycloNum:
    """Dispatch wrapper over the exact field operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")
