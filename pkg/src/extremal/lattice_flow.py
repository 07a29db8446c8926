"""Lattices, diagonal flows, and the unipotent embedding of a row vector.

The central object is the lattice {(y.q + p, q) : p in Z, q in Z^n} acted on
by diag(e^t, e^{-t_1}, ..., e^{-t_n}).  Exponentials are carried as exact
rational scale factors R_i = e^{t_i} wherever a verdict depends on them, so
every norm comparison stays in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .exact import convergents, flog, nearest_int, sup_norm_vec
from .exterior_algebra import MultiVector, SubgroupRep, c_vector, sup_norm, validate_index_set


class CertificationError(RuntimeError):
    """Raised when an exact search region exceeds the allowed budget."""


# ---------------------------------------------------------------------------
# bases and exact linear algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeBasis:
    """Ordered list of exact row vectors; the lattice is their integer span."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.rows:
            raise ValueError("empty basis")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("ragged basis")
        object.__setattr__(
            self, "rows", tuple(tuple(Fraction(x) for x in r) for r in self.rows)
        )

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def ambient_dim(self) -> int:
        return len(self.rows[0])

    def scaled(self, c: Fraction) -> "LatticeBasis":
        c = Fraction(c)
        return LatticeBasis(tuple(tuple(c * x for x in r) for r in self.rows))

    def determinant(self) -> Fraction:
        if self.rank != self.ambient_dim:
            raise ValueError("determinant needs a square basis")
        return _det([list(r) for r in self.rows])


def _det(m: list[list[Fraction]]) -> Fraction:
    """Fraction determinant by elimination (destructive on its copy)."""
    k = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(k):
        pivot = next((r for r in range(col, k) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, k):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def matrix_inverse(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    k = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(rows)]
    for col in range(k):
        pivot = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [a * inv for a in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[k:] for row in aug]


def unipotent_embed(y: Sequence[Fraction]) -> LatticeBasis:
    """Basis of the lattice {(y.q + p, q)}: generators (1, 0) and (y_i, e_i)."""
    y = [Fraction(v) for v in y]
    n = len(y)
    rows = [tuple([Fraction(1)] + [Fraction(0)] * n)]
    for i, yi in enumerate(y):
        row = [Fraction(0)] * (n + 1)
        row[0] = yi
        row[i + 1] = Fraction(1)
        rows.append(tuple(row))
    return LatticeBasis(tuple(rows))


# ---------------------------------------------------------------------------
# diagonal flows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlowSpec:
    """diag(e^t, e^{-t_1}, ..., e^{-t_n}) carried by exact scale factors.

    scales[i] = e^{t_i} as a positive rational; the expanding factor is their
    product, so the flow is unimodular by construction.
    """

    n: int
    scales: tuple[Fraction, ...]
    mode: str = "multi-parameter"

    def __post_init__(self):
        if len(self.scales) != self.n:
            raise ValueError("need one scale per contracting coordinate")
        object.__setattr__(self, "scales", tuple(Fraction(s) for s in self.scales))
        if any(s <= 0 for s in self.scales):
            raise ValueError("scale factors must be positive")
        if self.mode == "one-parameter" and len(set(self.scales)) > 1:
            raise ValueError("one-parameter flow needs equal scales")

    @classmethod
    def one_parameter(cls, n: int, coordinate_scale: Fraction) -> "FlowSpec":
        """Flow at time t with e^{t/n} = coordinate_scale."""
        return cls(n, (Fraction(coordinate_scale),) * n, "one-parameter")

    @property
    def expansion(self) -> Fraction:
        out = Fraction(1)
        for s in self.scales:
            out *= s
        return out

    def t_float(self) -> float:
        return sum(flog(s) for s in self.scales)

    def scale_factor(self, I: Sequence[int]) -> Fraction:
        """Exact e^{exponent(I)} for a coefficient supported on index set I."""
        I = validate_index_set(I, self.n)
        if I and I[0] == 0:
            out = self.expansion
            for i in I[1:]:
                out /= self.scales[i - 1]
            return out
        out = Fraction(1)
        for i in I:
            out /= self.scales[i - 1]
        return out


def flow_scale_exponent(t_values: Sequence[Fraction], I: Sequence[int]) -> Fraction:
    """Exponent t - t_I (0 in I) or -t_I (else) as exact rational arithmetic.

    t_values are the contracting exponents t_1..t_n; t = sum(t_values).
    """
    t_values = [Fraction(v) for v in t_values]
    I = validate_index_set(I, len(t_values))
    t_I = sum((t_values[i - 1] for i in I if i >= 1), Fraction(0))
    if I and I[0] == 0:
        return sum(t_values, Fraction(0)) - t_I
    return -t_I


def act_flow_unipotent(spec: FlowSpec, y: Sequence[Fraction], w: MultiVector) -> MultiVector:
    """Push a multivector through u_y then the flow, exactly.

    Index sets containing 0 pick up the expansion-direction mixing (the dot of
    (1, y) with the expansion vector at I); the rest are plain rescalings.
    """
    n = w.ambient_n
    if n != spec.n:
        raise ValueError("ambient mismatch between flow and multivector")
    y = [Fraction(v) for v in y]
    if len(y) != n:
        raise ValueError("y must have one entry per contracting coordinate")
    out = {}
    for I in combinations(range(n + 1), w.grade):
        if I and I[0] == 0:
            c = c_vector(I, w)
            val = c[0] + sum(y[i - 1] * c[i] for i in range(1, n + 1))
        else:
            val = w.coeffs.get(I, Fraction(0))
        if val:
            out[I] = val * spec.scale_factor(I)
    return MultiVector(n, w.grade, out)


# ---------------------------------------------------------------------------
# exact shortest vectors
# ---------------------------------------------------------------------------


def _coefficient_bounds(rows: Sequence[Sequence[Fraction]], box: Sequence[Fraction]) -> list[int]:
    """Certified per-coefficient bounds: any m with |(mB)_j| <= box_j satisfies them.

    Uses m = v B^T (B B^T)^{-1}; for square B this is v B^{-1}.
    """
    j = len(rows)
    gram = [[sum(a * b for a, b in zip(r1, r2)) for r2 in rows] for r1 in rows]
    ginv = matrix_inverse(gram)  # raises on dependent rows
    # P = B^T gram^{-1}, ambient x j
    width = len(rows[0])
    bounds = []
    for i in range(j):
        # column i of P: P[c][i] = sum_t B[t][c] * ginv[t][i]
        total = Fraction(0)
        for c in range(width):
            total += Fraction(box[c]) * abs(sum(rows[t][c] * ginv[t][i] for t in range(j)))
        bounds.append(int(total))  # floor
    return bounds


def shortest_vector(
    basis: LatticeBasis, search_bound: int = 4_000_000
) -> tuple[Fraction, tuple[int, ...], tuple[Fraction, ...]]:
    """Exact sup-norm shortest nonzero vector with a certified search region.

    The rows are LLL-reduced first so the incumbent (best reduced row) is near
    optimal; the coefficient box derived from it contains every lattice vector
    at least as short, so one full scan is conclusive.  Raises
    CertificationError when that box exceeds search_bound points.  Works for
    any independent rows (full-rank sublattices of the row span).
    """
    red, U = lll_reduce(basis.rows)
    rows = tuple(tuple(Fraction(x) for x in r) for r in red)
    j = len(rows)
    width = len(rows[0])
    idx = min(range(j), key=lambda r: sup_norm_vec(rows[r]))
    best = sup_norm_vec(rows[idx])
    if best == 0:
        raise ValueError("degenerate basis row")
    best_m = tuple(U[idx])
    best_v = rows[idx]
    bounds = _coefficient_bounds(rows, [best] * width)
    total = 1
    for b in bounds:
        total *= 2 * b + 1
        if total > search_bound:
            raise CertificationError(
                f"certified region of {total}+ points exceeds budget {search_bound}"
            )
    for m in product(*[range(-b, b + 1) for b in bounds]):
        first = next((x for x in m if x != 0), 0)
        if first <= 0:  # skip zero and one of each +-m pair
            continue
        v = [Fraction(0)] * width
        for mi, row in zip(m, rows):
            if mi:
                for c, x in enumerate(row):
                    v[c] += mi * x
        norm = sup_norm_vec(v)
        if norm < best:
            best = norm
            best_m = tuple(sum(mi * U[i][r] for i, mi in enumerate(m)) for r in range(j))
            best_v = tuple(v)
    return best, tuple(best_m), tuple(best_v)


def shortest_vector_norm(basis: LatticeBasis, search_bound: int = 4_000_000) -> Fraction:
    return shortest_vector(basis, search_bound)[0]


@dataclass(frozen=True)
class MinkowskiReport:
    delta: Fraction
    rep_norm: Fraction
    norm_root: float
    ratio: float


def minkowski_check(rep: SubgroupRep, basis: LatticeBasis) -> MinkowskiReport:
    """delta of the subgroup against ||rep||^{1/rank} (empirical constant)."""
    delta = shortest_vector_norm(basis)
    norm = sup_norm(rep.multivector)
    root = math.exp(flog(norm) / rep.rank)
    return MinkowskiReport(delta, norm, root, float(delta) / root)


def scaled_embed(y: Sequence[Fraction], spec: FlowSpec) -> LatticeBasis:
    """Exact basis of the flowed embedded lattice g_t u_y Z^{n+1}."""
    base = unipotent_embed(y)
    exp = spec.expansion
    rows = []
    for r in base.rows:
        row = [r[0] * exp]
        for c in range(1, len(r)):
            row.append(r[c] / spec.scales[c - 1])
        rows.append(tuple(row))
    return LatticeBasis(tuple(rows))


# ---------------------------------------------------------------------------
# growth exponent series
# ---------------------------------------------------------------------------


@dataclass
class GrowthEstimate:
    gamma_hat: float
    achieving_times: list[int]
    series: list[tuple[int, float]]  # (t, log delta)
    window: tuple[int, int]


def _log_delta_candidates_dim1(y: Fraction) -> list[tuple[float, float | None]]:
    """(log z, log x) per convergent pair; log x is None for exact hits."""
    cands = []
    for p, q in convergents(y):
        x = abs(q * y - p)
        cands.append((math.log(q), flog(x) if x != 0 else None))
    return cands


def log_delta_embedded(y: Sequence[Fraction], t: float, q_cap: int = 20000) -> float:
    """log of the shortest flowed-lattice vector at time t (float evaluation).

    One linear form: candidates for the minimizing q are exactly the
    convergent denominators, plus the q = 0 vector.  For n >= 2 the search
    enumerates a certified q-box and refuses when it exceeds q_cap points.
    """
    y = [Fraction(v) for v in y]
    n = len(y)
    if n == 1:
        best = t  # q = 0, p = 1
        for log_z, log_x in _log_delta_candidates_dim1(y[0]):
            a = -t / n + log_z
            val = a if log_x is None else max(t + log_x, a)
            best = min(best, val)
        return best
    # small-dimension exhaustive path
    best = t
    # initial upper bound from unit vectors
    for i in range(n):
        q = [0] * n
        q[i] = 1
        x = abs(y[i] - nearest_int(y[i]))
        a = -t / n
        best = min(best, a if x == 0 else max(t + flog(x), a))
    cap = math.exp(t / n + best)
    Q = int(cap) + 1
    if (2 * Q + 1) ** n > q_cap:
        raise CertificationError(f"q-box {(2 * Q + 1) ** n} exceeds cap {q_cap}; shrink t")
    for q in product(range(-Q, Q + 1), repeat=n):
        first = next((x for x in q if x != 0), 0)
        if first <= 0:
            continue
        dot = sum(yi * qi for yi, qi in zip(y, q))
        x = abs(dot - nearest_int(dot))
        zlog = math.log(max(abs(c) for c in q))
        a = -t / n + zlog
        val = a if x == 0 else max(t + flog(x), a)
        best = min(best, val)
    return best


def growth_exponent_estimate(
    y: Sequence[Fraction] | Fraction,
    t_max: int,
    t_min: int | None = None,
    q_cap: int = 20000,
) -> GrowthEstimate:
    """Max of (-log delta)/t over integer times in [t_min, t_max], clamped at 0.

    The head of the orbit is noise for the growth exponent (a limsup), so the
    default window starts at t_max // 2.
    """
    if isinstance(y, (Fraction, int)):
        y = [Fraction(y)]
    y = [Fraction(v) for v in y]
    if t_min is None:
        t_min = max(1, t_max // 2)
    if not 1 <= t_min <= t_max:
        raise ValueError("need 1 <= t_min <= t_max")
    series = []
    gamma = 0.0
    achieving: list[int] = []
    for t in range(1, t_max + 1):
        ld = log_delta_embedded(y, float(t), q_cap=q_cap)
        series.append((t, ld))
        if t >= t_min:
            ratio = -ld / t
            if ratio > gamma + 1e-12:
                gamma = max(ratio, 0.0)
                achieving = [t]
            elif abs(ratio - gamma) <= 1e-12 and gamma > 0:
                achieving.append(t)
    return GrowthEstimate(gamma, achieving, series, (t_min, t_max))


# ---------------------------------------------------------------------------
# basis reduction (used by the sampling paths; exact arithmetic throughout)
# ---------------------------------------------------------------------------


def _lll_integer(b: list[list[int]]) -> list[list[int]]:
    """All-integer LLL (delta = 3/4) on independent integer rows, in place.

    Carries the Gram-Schmidt data as integers: d[i+1] = det Gram(b_0..b_i),
    lam[i][j] = d[j+1] * mu_ij.  Every division below is exact.  Returns U.
    """
    m = len(b)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    gram = [[sum(a * c for a, c in zip(b[i], b[j])) for j in range(m)] for i in range(m)]
    d = [1] * (m + 1)
    lam = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1):
            u = gram[i][j]
            for l in range(j):
                u = (d[l + 1] * u - lam[i][l] * lam[j][l]) // d[l]
            if j < i:
                lam[i][j] = u
            else:
                d[i + 1] = u
    if any(x <= 0 for x in d[1:]):
        raise ValueError("dependent rows")

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) <= d[l + 1]:
            return
        q = nearest_int(Fraction(lam[k][l], d[l + 1]))
        b[k] = [a - q * c for a, c in zip(b[k], b[l])]
        U[k] = [a - q * c for a, c in zip(U[k], U[l])]
        lam[k][l] -= q * d[l + 1]
        for j in range(l):
            lam[k][j] -= q * lam[l][j]

    k = 1
    while k < m:
        red(k, k - 1)
        if 4 * d[k + 1] * d[k - 1] >= 3 * d[k] ** 2 - 4 * lam[k][k - 1] ** 2:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            for j in range(k - 1):
                lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
            bar = lam[k][k - 1]
            newd = (d[k - 1] * d[k + 1] + bar * bar) // d[k]
            for i in range(k + 1, m):
                t = lam[i][k]
                lam[i][k] = (d[k + 1] * lam[i][k - 1] - bar * t) // d[k]
                lam[i][k - 1] = (newd * t + bar * lam[i][k]) // d[k + 1]
            d[k] = newd
            k = max(k - 1, 1)
    return U


def lll_reduce(rows: Sequence[Sequence]) -> tuple[list[list], list[list[int]]]:
    """LLL reduction (delta = 3/4) in exact arithmetic.

    Rows must be independent; int rows stay int, Fraction rows stay Fraction.
    Returns (reduced rows, integer transform U) with U @ input == reduced.
    Rational rows are cleared to a common denominator first (a uniform
    rescaling, so the reduction is identical) and run through the all-integer
    path.
    """
    fracs = [[Fraction(x) for x in r] for r in rows]
    scale = 1
    for r in fracs:
        for x in r:
            scale = scale * x.denominator // math.gcd(scale, x.denominator)
    b = [[int(x * scale) for x in r] for r in fracs]
    U = _lll_integer(b)
    plain_int = all(isinstance(x, int) and not isinstance(x, bool) for r in rows for x in r)
    if plain_int:
        return b, U
    return [[Fraction(x, scale) for x in r] for r in b], U


def lattice_points_in_box(
    rows: Sequence[Sequence[int]], box: Sequence[Fraction], cap: int = 100_000
) -> Iterable[tuple[tuple[int, ...], list[int]]]:
    """Yield every (m, m@rows) with |(m@rows)_j| <= box_j, certified complete.

    rows must be independent; LLL-reduce them first to keep the region small.
    """
    bounds = _coefficient_bounds([[Fraction(x) for x in r] for r in rows], box)
    total = 1
    for bd in bounds:
        total *= 2 * bd + 1
        if total > cap:
            raise CertificationError(f"box enumeration of {total}+ points exceeds cap {cap}")
    width = len(rows[0])
    for m in product(*[range(-bd, bd + 1) for bd in bounds]):
        v = [0] * width
        for mi, row in zip(m, rows):
            if mi:
                for c in range(width):
                    v[c] += mi * row[c]
        if all(abs(v[c]) <= box[c] for c in range(width)):
            yield m, v
