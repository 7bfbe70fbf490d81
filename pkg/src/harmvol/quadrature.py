"""Numeric oracle: line and depth-2 Chen iterated integrals on the curve
w^2 = z^(2g+2) - 1 along the explicit branch-point paths.

Each path segment admits the analytic parametrization

    z(tau) = (1 - tau^2) * zeta^j,   w(tau) = -i * tau * sqrt(psi(tau)),

tau in [-1, 1], where psi(tau) = (1 - (1 - tau^2)^N) / tau^2 is a
polynomial.  This carries the segment through its branch point with
analytic pullbacks, so plain Gauss-Legendre panels converge fast and no
singular weights are needed.  Iterated integrals over words follow Chen's
composition rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .analytic import CurveParams, matrix_inverse, period_matrix
from .homology import HTensor, check_in_K_otimes_H


class QuadratureError(ArithmeticError):
    """Refinement stopped before reaching the requested tolerance."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved error estimate {achieved})")
        self.achieved = achieved


def beta_function(u, v, precision: int = 128):
    """Euler beta via the Gamma identity at the given bit precision."""
    with mpmath.workprec(precision):
        u, v = mpmath.mpmathify(Fraction(u)), mpmath.mpmathify(Fraction(v))
        if u <= 0 or v <= 0:
            raise ValueError("beta function arguments must be positive")
        return mpmath.gamma(u) * mpmath.gamma(v) / mpmath.gamma(u + v)


@dataclass(frozen=True)
class FormSpec:
    """A 1-form on the curve: normalized holomorphic or real harmonic."""

    kind: str  # "omega" | "alpha" | "beta"
    index: int

    def __post_init__(self):
        if self.kind not in ("omega", "alpha", "beta"):
            raise ValueError(f"unknown form kind {self.kind!r}")


def dual_form(sym) -> FormSpec:
    """Poincare dual of a homology basis symbol."""
    kind, i = sym
    return FormSpec("alpha" if kind == "x" else "beta", i)


Letter = tuple  # (generator j, iota flag, inverse flag)


def _letter_start(letter: Letter) -> int:
    _, iota, inv = letter
    return 0 if iota == inv else 1  # 0 = Q0, 1 = Q1


def _letter_end(letter: Letter) -> int:
    return 1 - _letter_start(letter)


@dataclass(frozen=True)
class PathWord:
    """Word in the segments e_j, their involution images, and inverses."""

    letters: tuple

    def __init__(self, letters):
        letters = tuple((int(j), bool(io), bool(inv)) for j, io, inv in letters)
        for prev, cur in zip(letters, letters[1:]):
            if _letter_end(prev) != _letter_start(cur):
                raise ValueError(
                    f"ill-formed word: {prev} ends where {cur} does not start"
                )
        object.__setattr__(self, "letters", letters)

    def inverse(self) -> "PathWord":
        return PathWord([(j, io, not inv) for j, io, inv in reversed(self.letters)])

    def is_loop_at_q0(self) -> bool:
        return (
            not self.letters
            or (_letter_start(self.letters[0]) == 0 and _letter_end(self.letters[-1]) == 0)
        )


def a_word(k: int) -> PathWord:
    """Loop a_k = e_{2k-1} . iota(e_{2k})."""
    return PathWord([(2 * k - 1, False, False), (2 * k, True, False)])


def b_word(k: int) -> PathWord:
    """Loop b_k = e_{2k-1} . iota(e_{2k-2}) ... e_1 . iota(e_0)."""
    letters = []
    for u in range(k, 0, -1):
        letters.append((2 * u - 1, False, False))
        letters.append((2 * u - 2, True, False))
    return PathWord(letters)


def loop_word(sym) -> PathWord:
    kind, k = sym
    return a_word(k) if kind == "x" else b_word(k)


@lru_cache(maxsize=None)
def gauss_legendre_rule(n: int, precision: int):
    """Nodes and weights on [-1, 1] by Newton iteration on P_n."""
    with mpmath.workprec(precision + 32):
        nodes, weights = [], []
        for k in range(1, n + 1):
            x = mpmath.mpf(math.cos(math.pi * (k - 0.25) / (n + 0.5)))
            for _ in range(60):
                p0, p1 = mpmath.mpf(1), x
                for m in range(2, n + 1):
                    p0, p1 = p1, ((2 * m - 1) * x * p1 - (m - 1) * p0) / m
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < mpmath.mpf(2) ** (-(precision + 16)):
                    break
            p0, p1 = mpmath.mpf(1), x
            for m in range(2, n + 1):
                p0, p1 = p1, ((2 * m - 1) * x * p1 - (m - 1) * p0) / m
            dp = n * (x * p1 - p0) / (x * x - 1)
            nodes.append(+x)
            weights.append(2 / ((1 - x * x) * dp * dp))
        return tuple(nodes), tuple(weights)


class ChenIntegrator:
    """Quadrature engine for one curve at one working precision."""

    def __init__(
        self,
        params: CurveParams,
        precision: int = 128,
        line_nodes: int = 16,
        line_max_panels: int = 16,
        iter_nodes: int = 12,
        iter_max_panels: int = 8,
    ):
        self.params = params
        self.precision = precision
        self.line_nodes = line_nodes
        self.line_max_panels = line_max_panels
        self.iter_nodes = iter_nodes
        self.iter_max_panels = iter_max_panels
        self._pull_cache = {}
        self._line_cache = {}
        self._iter_cache = {}
        g, N = params.g, params.N
        with mpmath.workprec(precision):
            self.zeta = mpmath.expjpi(mpmath.mpf(2) / N)
            # psi(tau) = (1 - (1 - tau^2)^N) / tau^2, expanded as a polynomial
            # in tau^2 (ascending)
            self.psi_coeffs = [
                mpmath.mpf((-1) ** (k + 1) * math.comb(N, k))
                for k in range(1, N + 1)
            ]
            self.norm = [
                N * mpmath.mpc(0, 1) / (2 * beta_function(Fraction(l, N), Fraction(1, 2), precision))
                for l in range(1, g + 1)
            ]
            self.omega_a_inv = self._embed_matrix(
                matrix_inverse(period_matrix("a", params), params)
            )
            self.omega_b_inv = self._embed_matrix(
                matrix_inverse(period_matrix("b", params), params)
            )

    def _embed_matrix(self, m):
        return [[x.embed(self.precision) for x in row] for row in m]

    # --- pullbacks -----------------------------------------------------

    def _psi(self, tau):
        t2 = tau * tau
        acc = mpmath.mpf(0)
        for c in reversed(self.psi_coeffs):
            acc = acc * t2 + c
        return acc

    def _omega_vector(self, letter: Letter, tau):
        """Pullbacks of all normalized holomorphic forms at parameter tau."""
        key = (letter, tau)
        cached = self._pull_cache.get(key)
        if cached is not None:
            return cached
        j, iota, inv = letter
        t = -tau if inv else tau
        sign = (-1 if iota else 1) * (-1 if inv else 1)
        g = self.params.g
        base = sign * mpmath.mpc(0, -2) / mpmath.sqrt(self._psi(t))
        one_minus = 1 - t * t
        zj = self.zeta ** j
        out = []
        zpow = mpmath.mpc(1)
        poly = mpmath.mpf(1)
        for l in range(1, g + 1):
            zpow *= zj  # zeta^(l*j)
            if l > 1:
                poly *= one_minus  # (1 - t^2)^(l-1)
            out.append(self.norm[l - 1] * base * zpow * poly)
        out = tuple(out)
        self._pull_cache[key] = out
        return out

    def pullback(self, letter: Letter, form: FormSpec):
        """The pullback of a form along a segment, as a function of tau."""
        i = form.index
        if not 1 <= i <= self.params.g:
            raise ValueError("form index out of range")
        if form.kind == "omega":
            return lambda tau: self._omega_vector(letter, tau)[i - 1]
        row = (
            self.omega_b_inv[i - 1]
            if form.kind == "alpha"
            else self.omega_a_inv[i - 1]
        )
        sign = 1 if form.kind == "alpha" else -1

        def real_form(tau):
            vec = self._omega_vector(letter, tau)
            return sign * mpmath.re(
                mpmath.fsum(c * v for c, v in zip(row, vec))
            )

        return real_form

    # --- quadrature cores ----------------------------------------------

    def _gl(self, f, a, b, n):
        nodes, weights = gauss_legendre_rule(n, self.precision)
        half = (b - a) / 2
        mid = (a + b) / 2
        return half * mpmath.fsum(
            w * f(mid + half * x) for x, w in zip(nodes, weights)
        )

    def _panels_integral(self, f, a, b, panels, n):
        width = (b - a) / panels
        return mpmath.fsum(
            self._gl(f, a + k * width, a + (k + 1) * width, n)
            for k in range(panels)
        )

    def _adaptive(self, f, a, b, tol, n, max_panels, what):
        prev = self._gl(f, a, b, n)
        panels = 2
        while panels <= max_panels:
            cur = self._panels_integral(f, a, b, panels, n)
            delta = abs(cur - prev)
            if delta < tol:
                return cur, delta
            prev = cur
            panels *= 2
        raise QuadratureError(
            f"{what} did not converge to {tol}", mpmath.nstr(delta, 5)
        )

    # --- public operations ----------------------------------------------

    def segment_line_integral(self, letter: Letter, form: FormSpec, tol=None):
        tol = mpmath.mpf(tol if tol is not None else "1e-10")
        key = (letter, form, str(tol))
        if key not in self._line_cache:
            with mpmath.workprec(self.precision):
                f = self.pullback(letter, form)
                value, _ = self._adaptive(
                    f, mpmath.mpf(-1), mpmath.mpf(1), tol,
                    self.line_nodes, self.line_max_panels, "line integral",
                )
            self._line_cache[key] = value
        return self._line_cache[key]

    def word_line_integral(self, word: PathWord, form: FormSpec, tol=None):
        with mpmath.workprec(self.precision):
            return mpmath.fsum(
                self.segment_line_integral(letter, form, tol)
                for letter in word.letters
            ) if word.letters else mpmath.mpf(0)

    def segment_iterated_integral(
        self, letter: Letter, form1: FormSpec, form2: FormSpec, tol=None
    ):
        """Depth-2 integral over one segment: inner form1, then form2."""
        tol = mpmath.mpf(tol if tol is not None else "1e-8")
        key = (letter, form1, form2, str(tol))
        if key not in self._iter_cache:
            with mpmath.workprec(self.precision):
                f1 = self.pullback(letter, form1)
                f2 = self.pullback(letter, form2)
                prev = self._iterated_fixed(f1, f2, 1)
                panels, delta = 2, None
                value = None
                while panels <= self.iter_max_panels:
                    cur = self._iterated_fixed(f1, f2, panels)
                    delta = abs(cur - prev)
                    if delta < tol:
                        value = cur
                        break
                    prev = cur
                    panels *= 2
                if value is None:
                    raise QuadratureError(
                        f"iterated integral did not converge to {tol}",
                        mpmath.nstr(delta, 5),
                    )
            self._iter_cache[key] = value
        return self._iter_cache[key]

    def _iterated_fixed(self, f1, f2, panels):
        """One pass of int f2(t2) * (int_{-1}^{t2} f1) dt2 on GL panels."""
        n = self.iter_nodes
        nodes, weights = gauss_legendre_rule(n, self.precision)
        total = mpmath.mpf(0)
        running = mpmath.mpf(0)  # integral of f1 from -1 to panel start
        width = mpmath.mpf(2) / panels
        for k in range(panels):
            a = -1 + k * width
            half = width / 2
            mid = a + half
            for x, w in zip(nodes, weights):
                t2 = mid + half * x
                inner = running + self._gl(f1, a, t2, n)
                total += half * w * f2(t2) * inner
            running += self._gl(f1, a, a + width, n)
        return total

    def word_iterated_integral(
        self, word: PathWord, form1: FormSpec, form2: FormSpec, tol=None
    ):
        """Chen composition over a word.

        int_{xy} ab = int_x ab + int_y ab + int_x a int_y b, extended to
        arbitrary words; inverses are handled at segment level.
        """
        with mpmath.workprec(self.precision):
            total = mpmath.mpf(0)
            for pos, letter in enumerate(word.letters):
                total += self.segment_iterated_integral(letter, form1, form2, tol)
                line1 = self.segment_line_integral(letter, form1)
                for later in word.letters[pos + 1 :]:
                    total += line1 * self.segment_line_integral(later, form2)
            return total

    def ell_line_integral(self, nu: int, form: FormSpec, tol=None):
        """Line integral along the base-point path to P_nu.

        The path is the first half of e_nu: tau in [-1, 0] of the same
        parametrization.
        """
        tol = mpmath.mpf(tol if tol is not None else "1e-10")
        with mpmath.workprec(self.precision):
            f = self.pullback((nu, False, False), form)
            value, _ = self._adaptive(
                f, mpmath.mpf(-1), mpmath.mpf(0), tol,
                self.line_nodes, self.line_max_panels, "line integral",
            )
            return value

    def numeric_harmonic_volume_q0(self, A: HTensor, tol=None):
        """Iterated-integral part of the base-point volume of A, mod Z.

        Returns (value mod 1, distance to the nearest multiple of mu,
        nearest lattice index).  A must lie in K tensor H; third-slot
        symbols choose the loop words.
        """
        check_in_K_otimes_H(A)
        with mpmath.workprec(self.precision):
            total = mpmath.mpf(0)
            for (a, b, c), coeff in sorted(A.terms.items()):
                word = loop_word(c)
                val = self.word_iterated_integral(
                    word, dual_form(a), dual_form(b), tol
                )
                total += coeff * mpmath.re(val)
            value = total - mpmath.floor(total)
            scaled = value * self.params.N
            nearest = int(mpmath.nint(scaled))
            distance = abs(scaled - nearest) / self.params.N
            return value, distance, nearest % self.params.N

    def numeric_harmonic_volume(self, A: HTensor, nu: int, tol=None):
        """Pointed volume at base index nu: numeric base-point part plus
        the exact base-change correction, reduced mod 1.

        Returns (value mod 1, distance of the raw part to the 1/N lattice).
        """
        from .analytic import lambda_nu

        base, distance, _ = self.numeric_harmonic_volume_q0(A, tol)
        with mpmath.workprec(self.precision):
            lam = lambda_nu(A, nu, self.params).value
            total = base + mpmath.mpf(lam.numerator) / lam.denominator
            return total - mpmath.floor(total), distance
