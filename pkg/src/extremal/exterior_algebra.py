"""Integer/rational exterior algebra on R^{n+1} with indices 0..n.

Multivectors are sparse maps from sorted index tuples to exact rationals.
The distinguished coordinate 0 plays the role of the expanding direction
everywhere downstream, which is why several helpers (expansion vectors,
splits) treat it specially.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

IndexSet = tuple[int, ...]  # strictly increasing tuple of indices in [0, ambient_n]


def validate_index_set(I: Sequence[int], ambient_n: int) -> IndexSet:
    t = tuple(I)
    if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
        raise ValueError(f"index set must be strictly increasing, got {t}")
    if t and (t[0] < 0 or t[-1] > ambient_n):
        raise ValueError(f"index {t} out of range for ambient 0..{ambient_n}")
    return t


def shuffle_count(I: Sequence[int], i: int) -> int:
    """Number of members of I strictly between 0 and i."""
    return sum(1 for m in I if 0 < m < i)


class MultiVector:
    """Homogeneous element of the exterior algebra over Q^{ambient_n + 1}."""

    __slots__ = ("ambient_n", "grade", "coeffs")

    def __init__(self, ambient_n: int, grade: int, coeffs: dict | None = None):
        if not 0 <= grade <= ambient_n + 1:
            raise ValueError(f"grade {grade} out of range for ambient 0..{ambient_n}")
        self.ambient_n = ambient_n
        self.grade = grade
        clean: dict[IndexSet, Fraction] = {}
        for I, c in (coeffs or {}).items():
            I = validate_index_set(I, ambient_n)
            if len(I) != grade:
                raise ValueError(f"index set {I} has wrong size for grade {grade}")
            c = Fraction(c)
            if c:
                clean[I] = c
        self.coeffs = clean

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, ambient_n: int, grade: int) -> "MultiVector":
        return cls(ambient_n, grade, {})

    @classmethod
    def from_vector(cls, coords: Sequence) -> "MultiVector":
        n = len(coords) - 1
        return cls(n, 1, {(i,): Fraction(c) for i, c in enumerate(coords)})

    # -- ring-ish operations ------------------------------------------
    def __add__(self, other: "MultiVector") -> "MultiVector":
        self._check_compatible(other)
        c = dict(self.coeffs)
        for I, v in other.coeffs.items():
            c[I] = c.get(I, Fraction(0)) + v
        return MultiVector(self.ambient_n, self.grade, c)

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + other.scaled(-1)

    def scaled(self, c) -> "MultiVector":
        c = Fraction(c)
        return MultiVector(self.ambient_n, self.grade, {I: v * c for I, v in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, MultiVector)
            and self.ambient_n == other.ambient_n
            and self.grade == other.grade
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.ambient_n, self.grade, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_compatible(self, other: "MultiVector"):
        if self.ambient_n != other.ambient_n or self.grade != other.grade:
            raise ValueError("incompatible multivectors")

    # -- inspection ----------------------------------------------------
    def key(self) -> tuple:
        """Hashable canonical content (for dedup sets)."""
        return tuple(sorted(self.coeffs.items()))

    def __repr__(self):
        return f"MultiVector({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for I, c in sorted(self.coeffs.items()):
            idx = "e{" + ",".join(map(str, I)) + "}"
            if c < 0:
                parts.append(f"- {-c}*{idx}" if parts else f"-{c * -1}*{idx}")
            else:
                parts.append(f"+ {c}*{idx}" if parts else f"{c}*{idx}")
        return " ".join(parts)


def _merge_sign(I: IndexSet, J: IndexSet) -> int:
    """Permutation sign for merging two disjoint sorted index tuples."""
    inversions = 0
    for a in I:
        for b in J:
            if a > b:
                inversions += 1
    return -1 if inversions % 2 else 1


def wedge(u: MultiVector, v: MultiVector) -> MultiVector:
    """Exterior product; antisymmetric, associative, exact."""
    if u.ambient_n != v.ambient_n:
        raise ValueError("ambient mismatch")
    n = u.ambient_n
    grade = u.grade + v.grade
    if grade > n + 1:
        raise ValueError(f"grade {grade} exceeds ambient dimension {n + 1}")
    out: dict[IndexSet, Fraction] = {}
    for I, a in u.coeffs.items():
        si = set(I)
        for J, b in v.coeffs.items():
            if si & set(J):
                continue
            K = tuple(sorted(I + J))
            term = a * b * _merge_sign(I, J)
            out[K] = out.get(K, Fraction(0)) + term
    return MultiVector(n, grade, out)


def wedge_all(vectors: Iterable[Sequence]) -> MultiVector:
    vs = [MultiVector.from_vector(v) for v in vectors]
    if not vs:
        raise ValueError("empty wedge")
    acc = vs[0]
    for v in vs[1:]:
        acc = wedge(acc, v)
    return acc


def sup_norm(w: MultiVector) -> Fraction:
    """Max absolute coefficient; 0 for the zero multivector."""
    return max((abs(c) for c in w.coeffs.values()), default=Fraction(0))


def canonical_sign(w: MultiVector) -> tuple[MultiVector, int]:
    """Flip sign so the lexicographically first index set has positive coefficient."""
    if not w.coeffs:
        return w, 1
    first = min(w.coeffs)
    if w.coeffs[first] < 0:
        return w.scaled(-1), -1
    return w, 1


def content(w: MultiVector) -> Fraction:
    """gcd of integer coefficients (0 for the zero multivector)."""
    g = 0
    for c in w.coeffs.values():
        if c.denominator != 1:
            raise ValueError("content is defined for integer multivectors")
        g = gcd(g, abs(c.numerator))
    return Fraction(g)


def primitive_part(w: MultiVector) -> tuple[MultiVector, Fraction]:
    """Divide out the content; returns (primitive multivector, content)."""
    g = content(w)
    if g == 0:
        return w, Fraction(0)
    return w.scaled(Fraction(1, g.numerator)), g


@dataclass(frozen=True)
class SubgroupRep:
    """Rank-j subgroup of Z^{ambient_n+1} carried as its wedge representative."""

    multivector: MultiVector
    rank: int
    source_basis: tuple[tuple[int, ...], ...] | None = None

    @property
    def norm(self) -> Fraction:
        return sup_norm(self.multivector)


def represent_subgroup(basis: Sequence[Sequence[int]]) -> SubgroupRep:
    """Wedge a basis into a sign-canonical representative.

    Rejects an empty basis, dependent vectors, and full-rank input (lattices
    of full rank are ambient rescalings, not proper subgroups here).
    """
    if not basis:
        raise ValueError("empty basis")
    k = len(basis[0])
    j = len(basis)
    if any(len(v) != k for v in basis):
        raise ValueError("ragged basis")
    if j >= k:
        raise ValueError(f"rank {j} not allowed in ambient dimension {k}: need 1 <= rank <= {k - 1}")
    for v in basis:
        if any(Fraction(c).denominator != 1 for c in v):
            raise ValueError("basis entries must be integers")
    w = wedge_all(basis)
    if w.is_zero():
        raise ValueError("dependent basis")
    w, _ = canonical_sign(w)
    return SubgroupRep(w, j, tuple(tuple(int(c) for c in v) for v in basis))


def c_vector(I: Sequence[int], w: MultiVector) -> list[Fraction]:
    """Expansion-direction coefficient vector of w at an index set containing 0.

    Coordinate 0 carries w_I; coordinate i (i not in I) carries
    (-1)^{shuffle_count(I, i)} * w_{I + {i} - {0}}; coordinates in I - {0}
    vanish.
    """
    I = validate_index_set(I, w.ambient_n)
    if not I or I[0] != 0:
        raise ValueError("index set must contain 0")
    if len(I) != w.grade:
        raise ValueError("index set size must equal the grade")
    n = w.ambient_n
    out = [Fraction(0)] * (n + 1)
    out[0] = w.coeffs.get(I, Fraction(0))
    members = set(I)
    for i in range(1, n + 1):
        if i in members:
            continue
        J = tuple(sorted([m for m in I if m != 0] + [i]))
        sign = -1 if shuffle_count(I, i) % 2 else 1
        out[i] = sign * w.coeffs.get(J, Fraction(0))
    return out


def split_c(c: Sequence[Fraction], s: int) -> tuple[list[Fraction], list[Fraction]]:
    """Split an (n+1)-vector into the first s+1 and the last n-s coordinates."""
    if not 0 <= s <= len(c) - 1:
        raise ValueError("split point out of range")
    return list(c[: s + 1]), list(c[s + 1 :])
