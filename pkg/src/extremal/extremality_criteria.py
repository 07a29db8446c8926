"""Mechanical checkers for extremality and strong-extremality criteria.

Each checker scans a finite family (subgroup representatives buildable from a
coefficient box, integer vectors in a ball, rational time grids) for exact
violations of an inequality.  Verdicts are "holds-at-scale" relative to the
explicit cutoffs; a "violated" verdict always carries exact certificates that
can be re-checked independently.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .diophantine import (
    ApproxWitness,
    ExponentEstimate,
    _row_int_form,
    _witness_at,
    exponent_estimate,
    plus_product,
    shell_minima,
)
from .exact import LogAffine, LogValue, flog, fraction_str, iroot, power_le, sup_norm_vec
from .exterior_algebra import (
    MultiVector,
    SubgroupRep,
    c_vector,
    canonical_sign,
    primitive_part,
    shuffle_count,
    split_c,
    wedge_all,
)
from .lattice_flow import lattice_points_in_box, lll_reduce

INT64_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubspaceSpec:
    """Affine subspace of R^n given by x -> (x, (1,x) @ A), A an (s+1)x(n-s) matrix.

    Row 0 of A is the offset row a_0; rows 1..s are the linear part.
    """

    n: int
    s: int
    A: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not 0 < self.s < self.n:
            raise ValueError("need 0 < s < n")
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.A)
        if len(rows) != self.s + 1 or any(len(r) != self.n - self.s for r in rows):
            raise ValueError(f"matrix must be {self.s + 1}x{self.n - self.s}")
        object.__setattr__(self, "A", rows)

    @property
    def a0(self) -> tuple[Fraction, ...]:
        return self.A[0]

    @property
    def linear_rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.A[1:]

    @classmethod
    def hyperplane(cls, a: Sequence[Fraction]) -> "SubspaceSpec":
        """Codimension-one graph x -> (x, a_0 + a_1 x_1 + ... + a_{n-1} x_{n-1})."""
        a = [Fraction(x) for x in a]
        n = len(a)
        if n < 2:
            raise ValueError("need at least two coefficients")
        return cls(n, n - 1, tuple((x,) for x in a))

    @classmethod
    def line_through_origin(cls, b: Sequence[Fraction]) -> "SubspaceSpec":
        """Line x -> (x, b_1 x, ..., b_{n-1} x)."""
        b = tuple(Fraction(x) for x in b)
        if not b:
            raise ValueError("need at least one slope")
        zeros = tuple(Fraction(0) for _ in b)
        return cls(len(b) + 1, 1, (zeros, b))

    def max_abs_entry(self) -> Fraction:
        return max(abs(x) for row in self.A for x in row)


@dataclass(frozen=True)
class CriterionParams:
    """Search parameters: exponent v at rank j, cutoff N, coefficient box bound."""

    v: Fraction
    j: int
    N: Fraction = Fraction(1)
    coeff_bound: int = 2
    gamma: Fraction | None = None
    beta: Fraction | None = None
    T: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "v", Fraction(self.v))
        object.__setattr__(self, "N", Fraction(self.N))
        if self.coeff_bound < 1:
            raise ValueError("coeff_bound must be >= 1")


@dataclass
class Violation:
    """Exact certificate: lhs <= rhs_base**(-v) (or the grid inequality at t)."""

    w_coeffs: tuple
    I: tuple
    lhs: Fraction
    rhs_base: Fraction
    t: tuple | None = None
    injected: bool = False
    note: str = ""

    def to_json_dict(self) -> dict:
        out = {
            "w_coeffs": [fraction_str(Fraction(c)) for c in self.w_coeffs],
            "I": list(self.I),
            "lhs_num": self.lhs.numerator,
            "lhs_den": self.lhs.denominator,
            "rhs_num": self.rhs_base.numerator,
            "rhs_den": self.rhs_base.denominator,
        }
        if self.t is not None:
            out["t"] = [fraction_str(Fraction(x)) for x in self.t]
        if self.injected:
            out["injected"] = True
        if self.note:
            out["note"] = self.note
        return out


def _jsonable(x):
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if isinstance(x, ApproxWitness):
        return {
            "q": list(x.q),
            "p": list(x.p),
            "quality": fraction_str(x.quality),
            "size": fraction_str(x.size),
            "mode": x.mode,
            "shell": x.shell,
            "injected": x.injected,
        }
    if isinstance(x, Violation):
        return x.to_json_dict()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


@dataclass
class CriterionReport:
    """Finite-scale verdict plus exact violation certificates."""

    criterion: str
    params: dict
    cutoffs: dict
    verdict: str
    violations: list[Violation]
    search_space: str
    seed: int | None = None
    extras: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "params": _jsonable(self.params),
            "cutoffs": _jsonable(self.cutoffs),
            "verdict": self.verdict,
            "violations": [v.to_json_dict() for v in self.violations],
            "seed": self.seed,
            "search_space": self.search_space,
            "detail": _jsonable(self.extras),
        }


# ---------------------------------------------------------------------------
# subgroup representative enumeration
# ---------------------------------------------------------------------------


def _box_vectors(k: int, bound: int) -> Iterable[tuple[int, ...]]:
    """Half-box: one of each +-v pair (first nonzero coordinate positive)."""
    for v in product(range(-bound, bound + 1), repeat=k):
        first = next((x for x in v if x != 0), 0)
        if first > 0:
            yield v


def _normalize(w: MultiVector, primitive: bool) -> MultiVector | None:
    if w.is_zero():
        return None
    if primitive:
        w, _ = primitive_part(w)
    w, _ = canonical_sign(w)
    return w


def enumerate_reps(
    n_plus_1: int,
    j: int,
    coeff_bound: int,
    primitive: bool = True,
    exhaust_cap: int = 2_000_000,
) -> Iterable[SubgroupRep]:
    """Stream representatives of all rank-j subgroups generated by j integer
    vectors with entries in [-coeff_bound, coeff_bound].

    With primitive=True (default) representatives are deduplicated by rational
    row space (content divided out), matching a Hermite-form oracle;
    primitive=False keeps distinct wedge contents, deduplicated by canonical
    sign only.  When the number of candidate bases exceeds exhaust_cap the
    call is refused in favor of sample_wedge_reps.
    """
    k = n_plus_1
    if not 1 <= j <= k - 1:
        raise ValueError(f"rank must satisfy 1 <= j <= {k - 1}")
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    seen: set = set()
    if j == 1:
        for coeffs in _box_vectors(k, coeff_bound):
            w = _normalize(MultiVector.from_vector(coeffs), primitive)
            if w is None or w.key() in seen:
                continue
            seen.add(w.key())
            yield SubgroupRep(w, 1, None)
        return
    if primitive:
        # generators may be replaced by their primitive parts: the row space
        # is scale-invariant, so the deduplicated output is unchanged
        sources: list[tuple[int, ...]] = []
        skeys: set = set()
        for v in _box_vectors(k, coeff_bound):
            w = _normalize(MultiVector.from_vector(v), True)
            if w.key() in skeys:
                continue
            skeys.add(w.key())
            sources.append(tuple(int(w.coeffs.get((i,), 0)) for i in range(k)))
    else:
        sources = list(_box_vectors(k, coeff_bound))
    total = comb(len(sources), j)
    if total > exhaust_cap:
        raise ValueError(
            f"{total} candidate bases exceed the exhaustive cap {exhaust_cap}; "
            "use sample_wedge_reps or a smaller coeff_bound"
        )
    for basis in combinations(sources, j):
        w = _normalize(wedge_all(basis), primitive)
        if w is None or w.key() in seen:
            continue
        seen.add(w.key())
        yield SubgroupRep(w, j, tuple(basis))


def sample_wedge_reps(
    n_plus_1: int, j: int, coeff_bound: int, samples: int, seed: int = 0
) -> Iterable[SubgroupRep]:
    """Seeded random rank-j representatives from the coefficient box."""
    k = n_plus_1
    if not 1 <= j <= k - 1:
        raise ValueError(f"rank must satisfy 1 <= j <= {k - 1}")
    rng = random.Random(seed)
    seen: set = set()
    attempts = 0
    emitted = 0
    while emitted < samples and attempts < 20 * samples:
        attempts += 1
        basis = [
            tuple(rng.randint(-coeff_bound, coeff_bound) for _ in range(k)) for _ in range(j)
        ]
        w = _normalize(wedge_all(basis), True)
        if w is None or w.key() in seen:
            continue
        seen.add(w.key())
        emitted += 1
        yield SubgroupRep(w, j, tuple(basis))


# ---------------------------------------------------------------------------
# the rank-j criterion
# ---------------------------------------------------------------------------


def criterion_values(spec: SubspaceSpec, w: MultiVector) -> tuple[Fraction, Fraction]:
    """(lhs, base): max_{0 in I} ||c+ + A c-|| and max_{0 not in I} |w_I|.

    The criterion at exponent v compares lhs against base**(-v).
    """
    n = spec.n
    j = w.grade
    if w.ambient_n != n:
        raise ValueError("multivector ambient dimension must match the subspace")
    base = Fraction(0)
    for I in combinations(range(1, n + 1), j):
        base = max(base, abs(w.coeffs.get(I, Fraction(0))))
    lhs = Fraction(0)
    for rest in combinations(range(1, n + 1), j - 1):
        I = (0,) + rest
        c = c_vector(I, w)
        cp, cm = split_c(c, spec.s)
        vec = [
            cp[r] + sum(spec.A[r][col] * cm[col] for col in range(n - spec.s))
            for r in range(spec.s + 1)
        ]
        lhs = max(lhs, sup_norm_vec(vec))
    return lhs, base


def _common_denominator(spec: SubspaceSpec) -> tuple[int, list[list[int]]]:
    DA = 1
    for row in spec.A:
        for x in row:
            DA = DA * x.denominator // math.gcd(DA, x.denominator)
    return DA, [[int(x * DA) for x in row] for row in spec.A]


def _coefficient_grid(n_coeffs: int, bound: int) -> np.ndarray:
    axes = [np.arange(-bound, bound + 1, dtype=np.int64)] * n_coeffs
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n_coeffs)


def _box_lhs_base_scaled(spec: SubspaceSpec, j: int, grid: np.ndarray):
    """(lhs*DA, base, DA) columns for every grade-j coefficient row of grid.

    Exact integer arithmetic at the common denominator DA of A; switches to
    arbitrary-precision objects when int64 could overflow.  Grid columns
    follow the lexicographic order of the index sets.
    """
    n, s = spec.n, spec.s
    k = n + 1
    keys = list(combinations(range(k), j))
    if grid.shape[1] != len(keys):
        raise ValueError("grid width must match the number of index sets")
    DA, Anum = _common_denominator(spec)
    col_of = {K: pos for pos, K in enumerate(keys)}
    bound = int(np.abs(grid).max()) if grid.size else 0
    max_anum = max((abs(x) for row in Anum for x in row), default=0)
    peak = bound * (DA + (n - s) * max_anum)
    if 4 * peak >= INT64_SAFE:
        grid = grid.astype(object)
    lhs = np.zeros(len(grid), dtype=grid.dtype)
    for rest in combinations(range(1, n + 1), j - 1):
        I = (0,) + rest

        def c_col(m: int):
            if m == 0:
                return grid[:, col_of[I]]
            if m in rest:
                return None
            K = tuple(sorted(rest + (m,)))
            sign = -1 if shuffle_count(I, m) % 2 else 1
            return sign * grid[:, col_of[K]]

        minus = [c_col(s + 1 + col) for col in range(n - s)]
        for r in range(s + 1):
            head = c_col(r)
            val = head * DA if head is not None else None
            for col in range(n - s):
                if minus[col] is None or Anum[r][col] == 0:
                    continue
                term = Anum[r][col] * minus[col]
                val = term if val is None else val + term
            if val is not None:
                lhs = np.maximum(lhs, np.abs(val))
    tail_cols = [col_of[K] for K in keys if 0 not in K]
    base = np.abs(grid[:, tail_cols]).max(axis=1)
    return lhs, base, DA


def coefficient_box_min_lhs(
    spec: SubspaceSpec, j: int, coeff_bound: int
) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Exact minimum of max_{0 in I} ||c+ + A c-|| over ALL nonzero integer
    coefficient vectors in the box (a superset of the rank-j representatives).

    Useful for theorem-shaped tests of the form "the norm never drops below
    1": a bound established on the superset holds a fortiori on the
    representatives.  Returns (minimum, argmin coefficient vector).
    """
    n = spec.n
    if not 1 <= j <= n:
        raise ValueError("rank out of range")
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    keys = list(combinations(range(n + 1), j))
    grid = _coefficient_grid(len(keys), coeff_bound)
    grid = grid[np.any(grid != 0, axis=1)]
    lhs, _, DA = _box_lhs_base_scaled(spec, j, grid)
    idx = int(np.argmin(lhs))
    best = Fraction(int(lhs[idx]), DA)
    return best, tuple(Fraction(int(x)) for x in grid[idx])


def _codim_one_scan(spec: SubspaceSpec, params: CriterionParams):
    """Vectorized rank-n scan over all nonzero coefficient vectors in the box.

    At grade n every integer coefficient vector is the representative of a
    rank-n subgroup (up to content), so the box is exactly the family of
    representatives with coefficients up to the bound, plus their multiples.
    """
    n, b = spec.n, params.coeff_bound
    k = n + 1
    keys = list(combinations(range(k), n))
    grid = _coefficient_grid(k, b)
    base0 = np.abs(grid[:, len(keys) - 1])  # the only 0-free index set is the last
    nmask = base0 * params.N.denominator > params.N.numerator
    if not bool(nmask.any()):
        return 0, []
    grid = grid[nmask]
    lhs, base, DA = _box_lhs_base_scaled(spec, n, grid)
    scanned = len(grid)
    violations = []
    suspect = np.nonzero(lhs <= DA)[0]  # lhs > DA means lhs/DA > 1 >= base**-v
    nv, dv = params.v.numerator, params.v.denominator
    for idx in suspect:
        L = int(lhs[idx])
        B = int(base[idx])
        if L == 0 or L**dv * B**nv <= DA**dv:
            vec = tuple(int(x) for x in grid[idx])
            w = MultiVector(n, n, dict(zip(keys, map(Fraction, vec))))
            wl, wb = criterion_values(spec, w)
            violations.append(
                Violation(tuple(w.coeffs.get(key, Fraction(0)) for key in keys), (), wl, wb)
            )
    return scanned, violations


def scan_extremality_criterion(
    spec: SubspaceSpec,
    params: CriterionParams,
    reps: Iterable[SubgroupRep] | None = None,
    extra_candidates: Sequence[SubgroupRep | MultiVector] = (),
) -> CriterionReport:
    """Scan rank-j representatives for lhs <= base**(-v) violations, exactly.

    Only representatives with base > N are tested; the verdict is relative to
    the coefficient box (or the given reps stream).  extra_candidates are
    checked unconditionally of the box and flagged as injected.
    """
    n = spec.n
    j = params.j
    if not 1 <= j <= n:
        raise ValueError("rank out of range")
    threshold = Fraction(n + 1 - j, j)
    if params.v <= threshold:
        raise ValueError(f"need v > {threshold} at rank {j}")
    violations: list[Violation] = []
    scanned = 0
    fast = j == n and reps is None
    if fast:
        scanned, violations = _codim_one_scan(spec, params)
        space = f"all nonzero coefficient vectors in [-{params.coeff_bound},{params.coeff_bound}]^{n + 1}"
    else:
        stream = reps if reps is not None else enumerate_reps(n + 1, j, params.coeff_bound)
        space = f"rank-{j} representatives from the [-{params.coeff_bound},{params.coeff_bound}] box"
        for rep in stream:
            w = rep.multivector if isinstance(rep, SubgroupRep) else rep
            lhs, base = criterion_values(spec, w)
            if base <= params.N:
                continue
            scanned += 1
            if lhs == 0 or power_le(lhs, base, -params.v):
                keys = list(combinations(range(n + 1), w.grade))
                violations.append(
                    Violation(
                        tuple(w.coeffs.get(key, Fraction(0)) for key in keys), (), lhs, base
                    )
                )
    for cand in extra_candidates:
        w = cand.multivector if isinstance(cand, SubgroupRep) else cand
        lhs, base = criterion_values(spec, w)
        if base <= params.N:
            continue
        scanned += 1
        if lhs == 0 or power_le(lhs, base, -params.v):
            keys = list(combinations(range(n + 1), w.grade))
            violations.append(
                Violation(
                    tuple(w.coeffs.get(key, Fraction(0)) for key in keys),
                    (),
                    lhs,
                    base,
                    injected=True,
                )
            )
    return CriterionReport(
        criterion="rank-j-form",
        params={"v": params.v, "j": j, "N": params.N},
        cutoffs={"coeff_bound": params.coeff_bound},
        verdict="violated" if violations else "holds-at-scale",
        violations=violations,
        search_space=space,
        extras={"scanned": scanned},
    )


# ---------------------------------------------------------------------------
# rank-one reduction and its cross-check
# ---------------------------------------------------------------------------


def _is_size_witness(w: ApproxWitness, v: Fraction) -> bool:
    """Exact witness test quality <= size^-v, ignoring the vacuous unit shell.

    Every system satisfies quality <= 1 = 1^-v at shell 1, so nonzero
    qualities only count from shell 2 on; exact zeros count at any shell
    (their multiples already give infinitely many witnesses).
    """
    if w.quality == 0:
        return True
    return w.shell >= 2 and power_le(w.quality, w.size, -v)


def rank_one_cross_check(spec: SubspaceSpec, v: Fraction, Q: int) -> CriterionReport:
    """Exhaustive ||p + Aq|| <= ||q||^-v search with the p-bound transfer.

    Every witness of the simple inequality is transferred to the rank-one
    criterion form at the slacked exponent v - delta, delta = v*log(C)/log||q||,
    via the exact premises quality <= size^-v and max(||p'||, size) <= C*size.
    The transfer is certified by an exact power check at a rational exponent
    below the slacked one.
    """
    v = Fraction(v)
    if v <= spec.n:
        raise ValueError("need v > n")
    maxA = spec.max_abs_entry()
    c_spec = 1 + (spec.s + 1) * maxA
    c_req = 1 + (spec.n - spec.s) * maxA
    C = max(c_spec, c_req)
    witnesses = []
    transfers = []
    rational_dependence = False
    for w in shell_minima(spec.A, Q):
        if not _is_size_witness(w, v):
            continue
        if w.quality == 0:
            rational_dependence = True
        pprime = w.p[1:]
        base43 = max(sup_norm_vec(pprime), w.size)
        p_bound_ok = base43 <= C * w.size
        if w.shell >= 2:
            delta = float(v) * flog(C) / flog(Fraction(w.shell))
            v_trans = Fraction(max(0, math.floor((float(v) - delta) * 10**6) - 1), 10**6)
        else:
            delta = math.inf
            v_trans = Fraction(0)
        form_ok = w.quality == 0 or power_le(w.quality, base43, -v_trans)
        same_v_form = w.quality == 0 or power_le(w.quality, base43, -v)
        back_ok = (not same_v_form) or w.quality == 0 or power_le(w.quality, w.size, -v)
        witnesses.append(w)
        transfers.append(
            {
                "q": w.q,
                "base": base43,
                "p_bound_ok": p_bound_ok,
                "v_transfer": v_trans,
                "delta": delta,
                "transfer_ok": form_ok,
                "same_v_back_ok": back_ok,
            }
        )
    violations = [
        Violation(tuple(w.p) + tuple(w.q), (0,), w.quality, w.size) for w in witnesses
    ]
    return CriterionReport(
        criterion="rank-one-reduction",
        params={"v": v, "C": C},
        cutoffs={"Q": Q},
        verdict="violated" if witnesses else "holds-at-scale",
        violations=violations,
        search_space=f"q in Z^{spec.n - spec.s}, ||q|| <= {Q}, optimal p",
        extras={
            "witnesses": witnesses,
            "transfers": transfers,
            "rational_dependence": rational_dependence,
        },
    )


# ---------------------------------------------------------------------------
# hyperplane and line evidence
# ---------------------------------------------------------------------------


def _adapt_injected(rows: list[list[Fraction]], injected) -> list[ApproxWitness]:
    """Re-derive exact witnesses for this system from injected q values."""
    int_rows = [_row_int_form(r) for r in rows]
    out = []
    for item in injected:
        if isinstance(item, ApproxWitness):
            q = item.q
        elif isinstance(item, int):
            q = (item,)
        else:
            q = tuple(int(x) for x in item)
        w = _witness_at(rows, int_rows, q, "standard", injected=True)
        out.append(w)
    return out


def _evidence_report(
    name: str, rows: list[list[Fraction]], Q: int, v: Fraction, injected
) -> CriterionReport:
    injected = list(injected)
    wits = [w for w in shell_minima(rows, Q) if _is_size_witness(w, v)]
    inj = [w for w in _adapt_injected(rows, injected) if _is_size_witness(w, v)]
    found = wits + inj
    violations = [
        Violation(tuple(w.p) + tuple(w.q), (0,), w.quality, w.size, injected=w.injected)
        for w in found
    ]
    return CriterionReport(
        criterion=name,
        params={"v": v},
        cutoffs={"Q": Q},
        verdict="violated" if found else "holds-at-scale",
        violations=violations,
        search_space=f"shell minima to Q={Q} plus {len(injected)} injected candidates",
        extras={
            "witnesses": found,
            "rational_dependence": any(w.quality == 0 for w in found),
            "max_slope": max((w.slope() for w in found), default=0.0),
        },
    )


def hyperplane_extremal_evidence(
    a: Sequence[Fraction], Q: int, v: Fraction, injected: Sequence = ()
) -> CriterionReport:
    """Witness search for the hyperplane x -> (x, a_0 + a_1 x_1 + ...).

    The system is the column matrix a: witnesses are integers q with
    ||p + a q|| <= |q|^-v for the optimal p.  A violated verdict is evidence
    against extremality; quality 0 certifies a rational hyperplane.
    """
    a = [Fraction(x) for x in a]
    n = len(a)
    v = Fraction(v)
    if v <= n:
        raise ValueError("need v > n")
    rows = [[x] for x in a]
    return _evidence_report("hyperplane-evidence", rows, Q, v, injected)


def line_origin_extremal_evidence(
    b: Sequence[Fraction], Q: int, v: Fraction, injected: Sequence = ()
) -> CriterionReport:
    """Witness search for the line x -> (x, b_1 x, ..., b_{n-1} x).

    The system is the single row b: witnesses are vectors q in Z^{n-1} with
    |p + b.q| <= ||q||^-v for the nearest integer p.
    """
    b = [Fraction(x) for x in b]
    n = len(b) + 1
    v = Fraction(v)
    if v <= n:
        raise ValueError("need v > n")
    rows = [list(b)]
    return _evidence_report("line-evidence", rows, Q, v, injected)


# ---------------------------------------------------------------------------
# Monte-Carlo measure of the bad set
# ---------------------------------------------------------------------------


@dataclass
class MeasureEstimate:
    """Monte-Carlo estimate of |{x in [0,1): some (p,q) in the Q-shell approximates}|."""

    measure_hat: float
    halfwidth: float
    members: int
    samples: int
    Q: int
    v: Fraction
    seed: int
    shard_counts: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "measure_hat": self.measure_hat,
            "halfwidth": self.halfwidth,
            "members": self.members,
            "samples": self.samples,
            "Q": self.Q,
            "v": fraction_str(self.v),
            "seed": self.seed,
            "shard_counts": list(self.shard_counts),
        }


def _strict_power_floor(D: int, Q: int, v: Fraction) -> int:
    """Largest integer T with T < D * Q^-v (so |num| <= T iff |num|/D < Q^-v).

    Seeded by an exact integer root (a float seed can land 2^40+ unit steps
    away when D is a many-hundred-bit denominator), then nudged to strictness.
    """
    nv, dv = v.numerator, v.denominator
    target, qpow = D**dv, Q**nv
    t = iroot(target // qpow, dv)
    while (t + 1) ** dv * qpow < target:
        t += 1
    while t > 0 and not (t**dv * qpow < target):
        t -= 1
    return t


def _membership(
    b_nums: list[int], Db: int, x: Fraction, Q: int, v: Fraction, cap: int
) -> bool:
    """Exact membership: does some (p, q), Q <= ||q|| < 2Q, give |p + (bq)x| < Q^-v?

    Builds the integer lattice of (scaled form value, q) vectors, reduces it,
    and enumerates a certified box.  b_nums are the numerators of (1, b) at
    the common denominator Db.  The two stretch factors make the box nearly
    cubic (the raw axes differ by many orders of magnitude), which keeps the
    certified enumeration tight; both are exact integer rescalings.
    """
    n = len(b_nums)
    Nx, Dx = x.numerator, x.denominator
    D = Db * Dx
    T = _strict_power_floor(D, Q, v)
    lam = max(1, (2 * Q - 1) // max(T, 1))  # stretch the value axis when T is tiny
    S = max(1, T // (2 * Q - 1))  # stretch the q axes when T is huge
    rows = [[lam * D] + [0] * n]
    for i, c in enumerate(b_nums):
        rows.append([lam * c * Nx] + [S if r == i else 0 for r in range(n)])
    red, _ = lll_reduce(rows)
    box = [Fraction(lam * T)] + [Fraction(S * (2 * Q - 1))] * n
    for _, vec in lattice_points_in_box(red, box, cap=cap):
        shell = max(abs(c) for c in vec[1:]) // S
        if Q <= shell <= 2 * Q - 1:
            return True
    return False


def _measure_shard(args) -> int:
    b, v, Q, count, seed, cap = args
    rng = random.Random(seed)
    b_fr = [Fraction(x) for x in b]
    Db = 1
    for x in b_fr:
        Db = Db * x.denominator // math.gcd(Db, x.denominator)
    b_nums = [Db] + [int(x * Db) for x in b_fr]  # coefficients of (1, b)
    members = 0
    for _ in range(count):
        x = Fraction(rng.random())  # exact dyadic rational in [0, 1)
        if _membership(b_nums, Db, x, Q, Fraction(v), cap):
            members += 1
    return members


def bad_set_measure(
    b: Sequence[Fraction],
    v: Fraction,
    Q: int,
    sample_count: int,
    seed: int,
    workers: int = 1,
    shards: int = 16,
    cap: int = 400_000,
) -> MeasureEstimate:
    """Seeded Monte-Carlo estimate of the measure of the Q-shell bad set.

    x ~ Uniform[0,1); membership is decided exactly per sample by certified
    lattice-box enumeration over Q <= ||q|| < 2Q.  The sample stream is split
    into fixed shards seeded seed+i, so results are independent of workers.
    The set is well-defined for any positive v; the Q^((n-v)/2) decay regime
    is v > n (at v = n the predicted exponent is zero).
    """
    v = Fraction(v)
    if v <= 0:
        raise ValueError("need v > 0")
    if Q < 2:
        raise ValueError("need Q >= 2")
    if sample_count < 1:
        raise ValueError("need at least one sample")
    base_count = sample_count // shards
    jobs = []
    for i in range(shards):
        cnt = base_count + (1 if i < sample_count % shards else 0)
        if cnt:
            jobs.append((tuple(Fraction(x) for x in b), v, Q, cnt, seed + i, cap))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_measure_shard, jobs))
    else:
        counts = [_measure_shard(job) for job in jobs]
    members = sum(counts)
    phat = members / sample_count
    halfwidth = 1.96 * math.sqrt(max(phat * (1 - phat), 1e-12) / sample_count)
    return MeasureEstimate(
        phat, halfwidth, members, sample_count, Q, v, seed, tuple(counts)
    )


# ---------------------------------------------------------------------------
# multiplicative criteria
# ---------------------------------------------------------------------------


def multiplicative_hyperplane_scan(
    a: Sequence[Fraction],
    Q: int,
    v: Fraction,
    N: Fraction = Fraction(1),
    injected: Sequence = (),
) -> CriterionReport:
    """Exact scan for ||p + a q|| <= plus_product(p', q)^(-v/n) violations.

    Complete over 1 <= |q| <= Q with base max(||p'||, |q|) > N: a violation
    forces every |p_i + a_i q| < 1, so only the two bracketing integers per
    coordinate can participate.  Each violation also carries the standard-form
    transfer at exponent v/n (the product never falls below the sup norm).
    """
    a = [Fraction(x) for x in a]
    n = len(a)
    v = Fraction(v)
    if v <= n:
        raise ValueError("need v > n")
    N = Fraction(N)
    if N < 1:
        raise ValueError("need N >= 1 (base 1 candidates are excluded exactly)")
    vn = v / n
    violations = []
    scanned = 0
    for q in range(1, Q + 1):
        cand_sets = []
        for ai in a:
            val = ai * q
            if val.denominator == 1:
                cand_sets.append((-int(val),))
            else:
                fl = math.floor(-val)
                cand_sets.append((fl, fl + 1))
        for p in product(*cand_sets):
            pprime = p[1:]
            base = max(max((abs(x) for x in pprime), default=0), q)
            if base <= N:
                continue
            scanned += 1
            lhs = max(abs(pi + ai * q) for pi, ai in zip(p, a))
            pi_plus = Fraction(plus_product(pprime + (q,)))
            if lhs == 0 or power_le(lhs, pi_plus, -vn):
                std_ok = lhs == 0 or power_le(lhs, Fraction(base), -vn)
                violations.append(
                    Violation(
                        tuple(p) + (q,),
                        (0,),
                        lhs,
                        pi_plus,
                        note=f"standard transfer at v/n {'holds' if std_ok else 'fails'}",
                    )
                )
    rows = [[x] for x in a]
    for w in _adapt_injected(rows, injected):
        pprime = w.p[1:]
        base = max(sup_norm_vec(pprime), w.size)
        if base <= N:
            continue
        pi_plus = Fraction(plus_product(tuple(pprime) + tuple(w.q)))
        if w.quality == 0 or power_le(w.quality, pi_plus, -vn):
            violations.append(
                Violation(tuple(w.p) + tuple(w.q), (0,), w.quality, pi_plus, injected=True)
            )
    return CriterionReport(
        criterion="multiplicative-hyperplane",
        params={"v": v, "N": N},
        cutoffs={"Q": Q},
        verdict="violated" if violations else "holds-at-scale",
        violations=violations,
        search_space=f"1 <= q <= {Q}, bracketing p (complete for base > N)",
        extras={"scanned": scanned},
    )


@dataclass
class StrongVerdict:
    """Strong-extremality verdict for a hyperplane via the support count."""

    k: int
    threshold: int
    omega_hat: float
    omega_hat_all: float
    verdict: str
    estimate: ExponentEstimate
    extremality_threshold: int
    margin: float

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "threshold": self.threshold,
            "omega_hat": self.omega_hat,
            "omega_hat_all": self.omega_hat_all,
            "verdict": self.verdict,
            "extremality_threshold": self.extremality_threshold,
            "margin": self.margin,
            "rational_dependence": self.estimate.rational_dependence,
        }


def strong_hyperplane_verdict(
    a: Sequence[Fraction],
    Q_schedule: Sequence[int] = (32, 100, 316, 1000),
    injected: Sequence = (),
    margin: float | None = None,
) -> StrongVerdict:
    """Compare the measured approximation exponent of a against k+1.

    k counts the nonzero slope coefficients a_1..a_{n-1}; strong extremality
    of the hyperplane graph fails exactly when the column system a admits
    exponent beyond k+1, while plain extremality needs exponent beyond n.

    Finite trails overshoot the true exponent by O(1/log Q) (the constant in
    front of the power shows up in the slope), so the comparison allows a
    margin of that shape; rational dependence short-circuits to violated.
    """
    a = [Fraction(x) for x in a]
    n = len(a)
    k = sum(1 for x in a[1:] if x != 0)
    rows = [[x] for x in a]
    est = exponent_estimate(rows, Q_schedule, injected=tuple(_adapt_injected(rows, injected)))
    threshold = k + 1
    if margin is None:
        margin = 2.0 / math.log(max(est.cutoff_Q, 3))
    beyond = est.rational_dependence or est.omega_hat > threshold + margin
    return StrongVerdict(
        k=k,
        threshold=threshold,
        omega_hat=est.omega_hat,
        omega_hat_all=est.omega_hat_all,
        verdict="violated" if beyond else "holds-at-scale",
        estimate=est,
        extremality_threshold=n,
        margin=margin,
    )


# ---------------------------------------------------------------------------
# the multiplicative grid criterion
# ---------------------------------------------------------------------------


def one_parameter_grid(n: int, totals: Sequence[Fraction]) -> list[tuple[Fraction, ...]]:
    """Equal-weight time vectors (t/n, ..., t/n) for each total t."""
    return [tuple(Fraction(t) / n for _ in range(n)) for t in totals]


def _grid_terms(
    spec: SubspaceSpec, w: MultiVector, t_vec: Sequence[Fraction]
) -> list[tuple[tuple, LogAffine]]:
    """All log-space terms of the grid inequality at w and t."""
    n = spec.n
    j = w.grade
    terms = []
    t_total = sum(t_vec)
    for rest in combinations(range(1, n + 1), j - 1):
        I = (0,) + rest
        t_I = sum(t_vec[i - 1] for i in rest)
        c = c_vector(I, w)
        cp, cm = split_c(c, spec.s)
        vec = [
            cp[r] + sum(spec.A[r][col] * cm[col] for col in range(n - spec.s))
            for r in range(spec.s + 1)
        ]
        norm = sup_norm_vec(vec)
        if norm > 0:
            terms.append((I, LogAffine(t_total - t_I, LogValue.of(norm))))
    for I in combinations(range(1, n + 1), j):
        t_I = sum(t_vec[i - 1] for i in I)
        val = abs(w.coeffs.get(I, Fraction(0)))
        if val > 0:
            terms.append((I, LogAffine(-t_I, LogValue.of(val))))
    return terms


def grid_inequality_holds(
    spec: SubspaceSpec, w: MultiVector, t_vec: Sequence[Fraction], beta: Fraction
) -> tuple[bool, tuple | None]:
    """Exact check of max(scaled norms) >= e^(-beta t) at one grid point.

    Returns (holds, witness index set of a term certifying it / None).
    """
    t_vec = [Fraction(x) for x in t_vec]
    if any(t < 0 for t in t_vec):
        raise ValueError("time vector must be nonnegative")
    beta = Fraction(beta)
    rhs = LogAffine.of_const(-beta * sum(t_vec))
    terms = _grid_terms(spec, w, t_vec)
    if not terms:
        return False, None  # the zero-side max is 0 < e^{-beta t}
    order = sorted(terms, key=lambda iv: iv[1].to_float(), reverse=True)
    for I, term in order:
        if (term - rhs).sign() >= 0:
            return True, I
    return False, None


def multiplicative_criterion_scan(
    spec: SubspaceSpec,
    grid: Sequence[Sequence[Fraction]],
    params: CriterionParams,
    reps: Iterable[SubgroupRep] | None = None,
    extra_candidates: Sequence[SubgroupRep | MultiVector] = (),
) -> CriterionReport:
    """Exact scan of the time-grid inequality over representatives and times.

    For every representative and every rational time vector t (componentwise
    >= 0, total >= T when given), checks in exact log arithmetic that some
    expanded coordinate survives: max(e^{t-t_I}||c+ + A c-||, e^{-t_I}|w_I|)
    >= e^{-beta t}.  Violations are certified exactly.
    """
    if params.beta is None:
        raise ValueError("params.beta is required")
    beta = Fraction(params.beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    n = spec.n
    if reps is None:
        stream: list[SubgroupRep | MultiVector] = []
        for j in range(1, n + 1):
            stream.extend(enumerate_reps(n + 1, j, params.coeff_bound))
    else:
        stream = list(reps)
    stream.extend(extra_candidates)
    grid = [tuple(Fraction(x) for x in t_vec) for t_vec in grid]
    for t_vec in grid:
        if len(t_vec) != n:
            raise ValueError("time vectors must have n components")
    violations = []
    checked = 0
    for rep in stream:
        w = rep.multivector if isinstance(rep, SubgroupRep) else rep
        for t_vec in grid:
            total = sum(t_vec)
            if params.T is not None and total < params.T:
                continue
            checked += 1
            holds, _ = grid_inequality_holds(spec, w, t_vec, beta)
            if not holds:
                keys = list(combinations(range(n + 1), w.grade))
                violations.append(
                    Violation(
                        tuple(w.coeffs.get(key, Fraction(0)) for key in keys),
                        (),
                        Fraction(0),
                        Fraction(1),
                        t=t_vec,
                        note="all terms below e^{-beta t}",
                    )
                )
    return CriterionReport(
        criterion="multiplicative-grid",
        params={"beta": beta, "T": params.T, "coeff_bound": params.coeff_bound},
        cutoffs={"grid_points": len(grid)},
        verdict="violated" if violations else "holds-at-scale",
        violations=violations,
        search_space=f"{len(stream)} representatives x {len(grid)} time vectors",
        extras={"checked": checked},
    )


def rational_zero_violation_family(
    spec: SubspaceSpec, beta: Fraction, repeats: int = 3, t_floor: Fraction | None = None
) -> tuple[SubgroupRep, list[tuple[Fraction, ...]]]:
    """Certified grid violations built from an exact integer point of the subspace.

    A rational matrix always admits q with Aq integral; the vector (-Aq, q)
    kills the expanded side exactly, so concentrating time on its support
    coordinates defeats e^{-beta t} whenever beta < 1/support_size.  Every
    returned time vector is verified exactly before returning.
    """
    beta = Fraction(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    n, s = spec.n, spec.s
    best = None
    for col in range(n - s):
        L = 1
        for r in range(s + 1):
            d = spec.A[r][col].denominator
            L = L * d // math.gcd(L, d)
        q = [0] * (n - s)
        q[col] = L
        p = [-sum(spec.A[r][c] * q[c] for c in range(n - s)) for r in range(s + 1)]
        vec = [Fraction(x) for x in p] + [Fraction(x) for x in q]
        supp = [i for i in range(1, n + 1) if vec[i] != 0]
        if best is None or len(supp) < len(best[1]):
            best = (vec, supp)
    vec, supp = best
    m = len(supp)
    if beta * m >= 1:
        raise ValueError(
            f"support size {m} cannot defeat beta={beta}; need beta < 1/{m}"
        )
    max_ln = max(flog(abs(vec[i])) for i in supp)
    H = Fraction(max(1, math.ceil(max_ln / float(1 - beta * m))) + 1)
    start = 1
    if t_floor is not None:
        start = max(1, math.ceil(float(t_floor) / float(H * m)))
    w = MultiVector.from_vector(vec)
    w, _ = canonical_sign(w)
    rep = SubgroupRep(w, 1, None)
    grid = []
    for mult in range(start, start + repeats):
        t_vec = tuple(H * mult if i in supp else Fraction(0) for i in range(1, n + 1))
        holds, _ = grid_inequality_holds(spec, w, t_vec, beta)
        if holds:
            raise AssertionError("constructed time vector fails to violate")
        grid.append(t_vec)
    return rep, grid
