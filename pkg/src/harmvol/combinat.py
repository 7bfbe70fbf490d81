"""Mod-2 counting formulas for the pointed harmonic volume.

kappa counts, over the f-basis expansion of a tensor, the ordered index
triples with exactly two distinct entries; kappa_prime does the same over
the branch-point basis while excluding the base index.  Both land in the
two-element group {0, 1/2} of rationals mod 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .homology import (
    HTensor,
    check_in_K_otimes_H,
    f_to_branch_basis,
    to_f_basis,
)


@dataclass(frozen=True)
class HalfInt:
    """Element of (1/2)Z / Z, i.e. 0 or 1/2 with addition mod 1."""

    half_units: int  # 0 or 1

    def __post_init__(self):
        if self.half_units not in (0, 1):
            raise ValueError("HalfInt holds only 0 or 1/2")

    def __add__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt((self.half_units + other.half_units) % 2)

    def as_fraction(self) -> Fraction:
        return Fraction(self.half_units, 2)

    def __str__(self):
        return "1/2" if self.half_units else "0"


ZERO = HalfInt(0)
HALF = HalfInt(1)


def psi(i: int, j: int, k: int, nu: int) -> int:
    """The invariant functional on f-basis triples: 1 iff #{i,j,k} = 2."""
    if nu in (i, j, k):
        raise ValueError("psi is undefined on triples containing nu")
    return 1 if len({i, j, k}) == 2 else 0


def _count_two_distinct(triples) -> int:
    return sum(1 for t in triples if len(set(t)) == 2)


def kappa(A: HTensor, nu: int) -> HalfInt:
    """Counting formula over the f-basis with index nu deleted."""
    check_in_K_otimes_H(A)
    T = to_f_basis(A, nu)
    return HalfInt(_count_two_distinct(T.terms) % 2)


def kappa_prime(A: HTensor, nu: int) -> HalfInt:
    """Counting formula over the branch basis, triples avoiding nu."""
    check_in_K_otimes_H(A)
    T = f_to_branch_basis(to_f_basis(A, nu))
    count = sum(
        1 for t in T.terms if len(set(t)) == 2 and nu not in t
    )
    return HalfInt(count % 2)
