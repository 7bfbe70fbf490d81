"""Homology of a genus-g hyperelliptic surface: symplectic basis, the
kernel K of the intersection pairing, and mod-2 coordinates over branch
points.

Basis symbols are pairs ("x", i) or ("y", i) with 1 <= i <= g.  Degree-2
and degree-3 tensors are sparse integer maps keyed by symbol tuples.
Mod-2 tensors over branch-point indices are plain sets of index triples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

Sym = tuple  # ("x"|"y", index)


class GenusMismatchError(ValueError):
    pass


class NotInKError(ValueError):
    """A tensor expected in K (or K tensor H) has a nonzero pairing."""


def _check_sym(g: int, sym) -> Sym:
    kind, idx = sym
    if kind not in ("x", "y") or not 1 <= idx <= g:
        raise ValueError(f"bad basis symbol {sym!r} for genus {g}")
    return (kind, idx)


def pairing_of_symbols(a: Sym, b: Sym) -> int:
    """(x_i, y_j) = delta_ij, antisymmetric, x/x and y/y isotropic."""
    (ka, ia), (kb, ib) = a, b
    if ia != ib:
        return 0
    if ka == "x" and kb == "y":
        return 1
    if ka == "y" and kb == "x":
        return -1
    return 0


class HVector:
    """Integer homology class in coordinates (x_1..x_g, y_1..y_g)."""

    __slots__ = ("genus", "coords")

    def __init__(self, genus: int, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != 2 * genus:
            raise ValueError("coordinate vector must have length 2g")
        self.genus = genus
        self.coords = coords

    @classmethod
    def basis(cls, genus: int, sym: Sym) -> "HVector":
        kind, i = _check_sym(genus, sym)
        coords = [0] * (2 * genus)
        coords[(i - 1) if kind == "x" else (genus + i - 1)] = 1
        return cls(genus, coords)

    def __eq__(self, other):
        return (
            isinstance(other, HVector)
            and self.genus == other.genus
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.genus, self.coords))

    def __repr__(self):
        return f"HVector(g={self.genus}, {list(self.coords)})"


def intersection_pairing(u: HVector, v: HVector) -> int:
    if u.genus != v.genus:
        raise GenusMismatchError("genus mismatch")
    g = u.genus
    return sum(
        u.coords[i] * v.coords[g + i] - u.coords[g + i] * v.coords[i]
        for i in range(g)
    )


class HTensor:
    """Sparse integer tensor of degree 2 or 3 over the symplectic basis."""

    __slots__ = ("genus", "degree", "terms")

    def __init__(self, genus: int, degree: int, terms=None):
        if degree not in (2, 3):
            raise ValueError("degree must be 2 or 3")
        clean = {}
        for key, coeff in (terms or {}).items():
            key = tuple(_check_sym(genus, s) for s in key)
            if len(key) != degree:
                raise ValueError("term arity does not match degree")
            coeff = int(coeff)
            if coeff:
                clean[key] = clean.get(key, 0) + coeff
                if clean[key] == 0:
                    del clean[key]
        self.genus = genus
        self.degree = degree
        self.terms = clean

    @classmethod
    def from_factors(cls, genus: int, factors, coeff: int = 1) -> "HTensor":
        factors = tuple(tuple(f) for f in factors)
        return cls(genus, len(factors), {factors: coeff})

    def __add__(self, other):
        if (
            not isinstance(other, HTensor)
            or other.genus != self.genus
            or other.degree != self.degree
        ):
            return NotImplemented
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, 0) + c
        return HTensor(self.genus, self.degree, terms)

    def __neg__(self):
        return HTensor(
            self.genus, self.degree, {k: -c for k, c in self.terms.items()}
        )

    def __sub__(self, other):
        neg = -other
        return self + neg

    def scale(self, n: int) -> "HTensor":
        return HTensor(
            self.genus, self.degree, {k: n * c for k, c in self.terms.items()}
        )

    def tensor(self, sym: Sym) -> "HTensor":
        """Append one symbol slot (degree 2 -> degree 3)."""
        sym = _check_sym(self.genus, sym)
        return HTensor(
            self.genus,
            self.degree + 1,
            {key + (sym,): c for key, c in self.terms.items()},
        )

    def swap12(self) -> "HTensor":
        """Swap the first two slots of every term."""
        return HTensor(
            self.genus,
            self.degree,
            {(k[1], k[0]) + k[2:]: c for k, c in self.terms.items()},
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, HTensor)
            and self.genus == other.genus
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(
            (self.genus, self.degree, frozenset(self.terms.items()))
        )

    def __repr__(self):
        def fmt(key):
            return "(x)".join(f"{k}{i}" for k, i in key)

        body = " + ".join(
            f"{c}*{fmt(k)}" for k, c in sorted(self.terms.items())
        )
        return f"HTensor(g={self.genus}, {body or '0'})"

    # --- JSON wire format (shared with the CLI) -----------------------

    def to_json(self) -> str:
        terms = [
            {"coeff": c, "factors": [[k, i] for k, i in key]}
            for key, c in sorted(self.terms.items())
        ]
        return json.dumps({"g": self.genus, "terms": terms})

    @classmethod
    def from_json_obj(cls, obj, degree: int = 3) -> "HTensor":
        g = int(obj["g"])
        terms = {}
        raw = obj.get("terms", [])
        if raw:
            degree = len(raw[0]["factors"])
        for t in raw:
            key = tuple((f[0], int(f[1])) for f in t["factors"])
            if len(key) != degree:
                raise ValueError("mixed-degree term list")
            terms[key] = terms.get(key, 0) + int(t["coeff"])
        return cls(g, degree, terms)

    @classmethod
    def from_json(cls, text: str, degree: int = 3) -> "HTensor":
        return cls.from_json_obj(json.loads(text), degree)


def is_in_K(t: HTensor) -> bool:
    """Whether a degree-2 tensor pairs to zero under the intersection form."""
    if t.degree != 2:
        raise ValueError("is_in_K expects a degree-2 tensor")
    return pairing_contraction(t) == 0


def pairing_contraction(t: HTensor) -> int:
    return sum(c * pairing_of_symbols(k[0], k[1]) for k, c in t.terms.items())


def check_in_K_otimes_H(A: HTensor) -> None:
    """Raise NotInKError unless every third-slot slice of A lies in K."""
    if A.degree != 3:
        raise ValueError("expected a degree-3 tensor")
    sums = {}
    for (a, b, c), coeff in A.terms.items():
        sums[c] = sums.get(c, 0) + coeff * pairing_of_symbols(a, b)
    for sym, val in sorted(sums.items()):
        if val != 0:
            raise NotInKError(
                f"pairing contraction = {val} != 0 on third factor {sym[0]}{sym[1]}"
            )


@dataclass(frozen=True)
class KBasisElement:
    """One element of the deterministic basis of K.

    case 1: z_i (x) z'_j with i != j, types (t1, t2) in order xx, xy, yx, yy
    case 2: x_i (x) y_i - x_1 (x) y_1, i >= 2
    case 3: x_i (x) y_i + y_i (x) x_i
    case 4: z_i (x) z_i, type x then y
    """

    case: int
    i: int
    j: int
    types: tuple
    tensor: HTensor

    @property
    def label(self) -> str:
        t1, t2 = self.types
        if self.case == 1:
            return f"{t1}{self.i}(x){t2}{self.j}"
        if self.case == 2:
            return f"x{self.i}(x)y{self.i}-x1(x)y1"
        if self.case == 3:
            return f"x{self.i}(x)y{self.i}+y{self.i}(x)x{self.i}"
        return f"{t1}{self.i}(x){t1}{self.i}"


def k_basis(g: int) -> list:
    """The 4g^2-1 basis elements of K, in a fixed enumeration order."""
    if g < 2:
        raise ValueError("genus must be >= 2")
    out = []
    for i in range(1, g + 1):
        for j in range(1, g + 1):
            if i == j:
                continue
            for t1 in ("x", "y"):
                for t2 in ("x", "y"):
                    tensor = HTensor.from_factors(g, [(t1, i), (t2, j)])
                    out.append(KBasisElement(1, i, j, (t1, t2), tensor))
    for i in range(2, g + 1):
        tensor = HTensor.from_factors(g, [("x", i), ("y", i)]) - HTensor.from_factors(
            g, [("x", 1), ("y", 1)]
        )
        out.append(KBasisElement(2, i, 0, ("x", "y"), tensor))
    for i in range(1, g + 1):
        tensor = HTensor.from_factors(g, [("x", i), ("y", i)]) + HTensor.from_factors(
            g, [("y", i), ("x", i)]
        )
        out.append(KBasisElement(3, i, 0, ("x", "y"), tensor))
    for i in range(1, g + 1):
        for t in ("x", "y"):
            tensor = HTensor.from_factors(g, [(t, i), (t, i)])
            out.append(KBasisElement(4, i, 0, (t, t), tensor))
    assert len(out) == 4 * g * g - 1
    for elem in out:
        assert is_in_K(elem.tensor)
    return out


def third_factors(g: int) -> list:
    return [("x", i) for i in range(1, g + 1)] + [("y", i) for i in range(1, g + 1)]


def expand_in_k_basis(A: HTensor) -> dict:
    """Integer coefficients of A over k_basis x {x_k, y_k}.

    Returns {(basis_index, third_symbol): coefficient}.  The basis is
    triangular over the unit tensors, so the solve is direct; the K
    membership check is exactly the solvability condition.
    """
    check_in_K_otimes_H(A)
    g = A.genus
    basis = k_basis(g)
    index = {
        (elem.case, elem.i, elem.j, elem.types): n for n, elem in enumerate(basis)
    }
    coeffs = {}

    def put(case, i, j, types, third, value):
        if value:
            coeffs[(index[(case, i, j, types)], third)] = value

    # group by third factor and solve each degree-2 slice
    slices = {}
    for (a, b, c), coeff in A.terms.items():
        slices.setdefault(c, {})[(a, b)] = coeff
    for third, B in sorted(slices.items()):
        for i in range(1, g + 1):
            for j in range(1, g + 1):
                if i == j:
                    continue
                for t1 in ("x", "y"):
                    for t2 in ("x", "y"):
                        put(1, i, j, (t1, t2), third, B.get(((t1, i), (t2, j)), 0))
        for i in range(1, g + 1):
            for t in ("x", "y"):
                put(4, i, 0, (t, t), third, B.get(((t, i), (t, i)), 0))
        u = [B.get((("x", i), ("y", i)), 0) for i in range(1, g + 1)]
        v = [B.get((("y", i), ("x", i)), 0) for i in range(1, g + 1)]
        if sum(u) != sum(v):
            raise NotInKError("diagonal slice not in K")
        for i in range(1, g + 1):
            put(3, i, 0, ("x", "y"), third, v[i - 1])
        for i in range(2, g + 1):
            put(2, i, 0, ("x", "y"), third, u[i - 1] - v[i - 1])
    return coeffs


def reconstruct_from_k_basis(g: int, coeffs: dict) -> HTensor:
    basis = k_basis(g)
    out = HTensor(g, 3)
    for (idx, third), c in coeffs.items():
        out = out + basis[idx].tensor.tensor(third).scale(c)
    return out


def random_k_tensor(g: int, rng, max_terms: int = 4, max_coeff: int = 3) -> HTensor:
    """A seeded random integral tensor in K (x) H, built from the basis."""
    basis = k_basis(g)
    thirds = third_factors(g)
    out = HTensor(g, 3)
    for _ in range(rng.randint(1, max_terms)):
        elem = rng.choice(basis)
        third = rng.choice(thirds)
        coeff = rng.randint(-max_coeff, max_coeff)
        out = out + elem.tensor.tensor(third).scale(coeff)
    return out


@dataclass(frozen=True)
class F2Tensor:
    """Degree-3 tensor over Z/2 in the f-basis (nu excluded) or branch basis."""

    genus: int
    basis_tag: str  # "f" or "branch"
    nu: int
    terms: frozenset  # of (p, q, r) triples

    def __post_init__(self):
        top = 2 * self.genus + 1
        for triple in self.terms:
            for idx in triple:
                if not 0 <= idx <= top:
                    raise ValueError(f"branch index {idx} out of range")
                if self.basis_tag == "f" and idx == self.nu:
                    raise ValueError("f-basis term contains the excluded index")

    def __add__(self, other):
        if (
            other.genus != self.genus
            or other.basis_tag != self.basis_tag
            or other.nu != self.nu
        ):
            raise ValueError("incompatible mod-2 tensors")
        return F2Tensor(
            self.genus,
            self.basis_tag,
            self.nu,
            self.terms ^ other.terms,
        )


def f_coordinates(sym: Sym, nu: int) -> frozenset:
    """Mod-2 branch coordinates of x_i or y_i with f_nu deleted."""
    kind, i = sym
    if kind == "x":
        idxs = {2 * i - 1, 2 * i}
    else:
        idxs = set(range(0, 2 * i))
    idxs.discard(nu)
    return frozenset(idxs)


def to_f_basis(A: HTensor, nu: int) -> F2Tensor:
    """Expand a degree-3 tensor over the f-basis mod 2, deleting index nu."""
    if A.degree != 3:
        raise ValueError("expected a degree-3 tensor")
    g = A.genus
    if not 0 <= nu <= 2 * g + 1:
        raise ValueError("nu out of range")
    terms = set()
    for (a, b, c), coeff in A.terms.items():
        if coeff % 2 == 0:
            continue
        for p in f_coordinates(a, nu):
            for q in f_coordinates(b, nu):
                for r in f_coordinates(c, nu):
                    terms ^= {(p, q, r)}
    return F2Tensor(g, "f", nu, frozenset(terms))


def f_to_branch_basis(T: F2Tensor) -> F2Tensor:
    """Substitute f_i = e'_nu + e'_i slotwise and expand over Z/2."""
    if T.basis_tag != "f":
        raise ValueError("expected an f-basis tensor")
    nu = T.nu
    terms = set()
    for (p, q, r) in T.terms:
        for a in (p, nu):
            for b in (q, nu):
                for c in (r, nu):
                    terms ^= {(a, b, c)}
    return F2Tensor(T.genus, "branch", nu, frozenset(terms))


def branch_to_f_basis(T: F2Tensor) -> F2Tensor:
    """Back substitution e'_i = f_i + e'_nu (e'_nu itself is fixed).

    Inverts f_to_branch_basis on its image: terms still carrying the nu
    index cancel there, leaving a pure f-basis tensor.
    """
    if T.basis_tag != "branch":
        raise ValueError("expected a branch-basis tensor")
    nu = T.nu
    terms = set()
    for triple in T.terms:
        choices = [(p,) if p == nu else (p, nu) for p in triple]
        for a in choices[0]:
            for b in choices[1]:
                for c in choices[2]:
                    terms ^= {(a, b, c)}
    if any(nu in t for t in terms):
        raise ValueError("tensor is not in the image of the f-basis expansion")
    return F2Tensor(T.genus, "f", nu, frozenset(terms))


def v_map(h: HVector) -> tuple:
    """Image in H_1(CP^1 - branch locus; Z/2) over the basis e'_0..e'_2g."""
    g = h.genus
    out = [0] * (2 * g + 1)

    def add_eprime(idx):
        if idx <= 2 * g:
            out[idx] ^= 1
        else:  # e'_{2g+1} = sum of the others
            for k in range(2 * g + 1):
                out[k] ^= 1

    for i in range(1, g + 1):
        if h.coords[i - 1] % 2:  # x_i
            add_eprime(2 * i - 1)
            add_eprime(2 * i)
        if h.coords[g + i - 1] % 2:  # y_i
            for k in range(0, 2 * i):
                add_eprime(k)
    return tuple(out)
