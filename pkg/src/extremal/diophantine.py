"""Brute-force linear-form approximation and its dynamical translation.

Finds best integer approximations to linear forms exhaustively, estimates
Diophantine exponents from witness trails, converts approximation witnesses
into contraction times for the diagonal flow (exactly, in log arithmetic),
and builds standard test numbers with certified truncation bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .exact import (
    ExpScalar,
    LogAffine,
    compare_power_product,
    convergents,
    flog,
    round_half_even_div,
)

INT64_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ApproxWitness:
    """Integer pair (p, q) with the exact achieved norm of the form at q.

    size is the sup-norm of q in standard mode and the product of coordinate
    magnitudes clamped below at 1 in multiplicative mode; shell is always the
    sup-norm, so trails can be truncated to an enumeration ball afterwards.
    """

    q: tuple[int, ...]
    p: tuple[int, ...]
    quality: Fraction
    size: Fraction
    mode: str = "standard"
    shell: int = 0
    injected: bool = False

    def slope(self) -> float:
        """log(1/quality)/log(size); the exponent this witness certifies."""
        if self.quality == 0:
            return math.inf
        if self.size < 2:
            return 0.0
        return -flog(self.quality) / flog(self.size)


def plus_product(q: Sequence[int]) -> int:
    """Product of max(|q_i|, 1) over the coordinates."""
    out = 1
    for c in q:
        out *= max(abs(c), 1)
    return out


# ---------------------------------------------------------------------------
# exhaustive best approximation
# ---------------------------------------------------------------------------


def _row_int_form(row: Sequence[Fraction]) -> tuple[list[int], int]:
    """Common-denominator integer form (numerators, D) of a rational row."""
    den = 1
    fr = [Fraction(x) for x in row]
    for x in fr:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in fr], den


def _half_ball_lex(n: int, Q: int) -> np.ndarray:
    """All q with 0 < ||q|| <= Q, first nonzero positive, lex order, int64."""
    axes = [np.arange(-Q, Q + 1, dtype=np.int64)] * n
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    nonzero = grid != 0
    any_nz = nonzero.any(axis=1)
    first = nonzero.argmax(axis=1)
    lead = grid[np.arange(len(grid)), first]
    return grid[any_nz & (lead > 0)]


@lru_cache(maxsize=8)
def _ball_by_shell(n: int, Q: int):
    """Half ball sorted by shell (lex within), with per-shell start indices."""
    qs = _half_ball_lex(n, Q)
    shells = np.abs(qs).max(axis=1)
    order = np.argsort(shells, kind="stable")
    qs, shells = qs[order], shells[order]
    starts = np.searchsorted(shells, np.arange(1, Q + 1))
    return qs, shells, starts


@lru_cache(maxsize=8)
def _ball_by_plus_product(n: int, Q: int):
    """Half ball sorted by plus_product (lex within), with the sorted sizes."""
    qs = _half_ball_lex(n, Q)
    sizes = np.prod(np.maximum(np.abs(qs), 1), axis=1)
    order = np.argsort(sizes, kind="stable")
    return qs[order], sizes[order]


def _errors_for_rows(qs: np.ndarray, int_rows: list[tuple[list[int], int]]):
    """Numerators of the per-q form distance at denominator lcm, p optimal.

    The distance of (sum_i N_i q_i)/lcm to the nearest integer is
    min(e, lcm-e)/lcm with e the nonnegative residue; rows combine by max.
    Falls back to exact big-int arrays when int64 could overflow.
    """
    lcm = 1
    for _, d in int_rows:
        lcm = lcm * d // math.gcd(lcm, d)
    q_max = int(np.abs(qs).max(initial=1))
    best = None
    for nums, d in int_rows:
        m = lcm // d
        scaled = [c * m for c in nums]
        if lcm < INT64_SAFE and sum(abs(c) for c in scaled) * q_max < INT64_SAFE:
            dots = qs.dot(np.array(scaled, dtype=np.int64))
        else:
            dots = qs.astype(object).dot(np.array(scaled, dtype=object))
        e = dots % lcm
        err = np.minimum(e, lcm - e)
        best = err if best is None else np.maximum(best, err)
    return best, lcm


def _nearest_p(row_nums: list[int], den: int, q: Sequence[int]) -> int:
    dot = sum(c * int(x) for c, x in zip(row_nums, q))
    return -round_half_even_div(dot, den)


def _witness_at(A_rows, int_rows, q, mode: str, injected=False) -> ApproxWitness:
    q = tuple(int(x) for x in q)
    ps = []
    worst = Fraction(0)
    for row, (nums, d) in zip(A_rows, int_rows):
        p = _nearest_p(nums, d, q)
        ps.append(p)
        val = abs(sum(a * x for a, x in zip(row, q)) + p)
        worst = max(worst, val)
    shell = max(abs(x) for x in q)
    size = Fraction(shell) if mode == "standard" else Fraction(plus_product(q))
    return ApproxWitness(q, tuple(ps), worst, size, mode, shell, injected)


def best_approx(A: Sequence[Sequence[Fraction]], Q: int) -> list[ApproxWitness]:
    """Pareto frontier of (||q||, ||Aq+p||) over the ball ||q|| <= Q.

    Exhaustive over one representative of each +-q pair; p is the
    coordinate-wise nearest integer (ties to even).  A quality of 0 flags an
    exact rational dependence and ends the frontier.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    A_rows = [[Fraction(x) for x in row] for row in A]
    n = len(A_rows[0])
    if any(len(r) != n for r in A_rows):
        raise ValueError("ragged matrix")
    int_rows = [_row_int_form(r) for r in A_rows]
    if len(A_rows) == 1 and n == 1:
        return _frontier_one_var(A_rows, int_rows, Q)
    qs, shells, starts = _ball_by_shell(n, Q)
    err, _ = _errors_for_rows(qs, int_rows)
    ends = np.append(starts[1:], len(shells))
    out: list[ApproxWitness] = []
    best_so_far = None
    for s in range(1, Q + 1):
        lo, hi = starts[s - 1], ends[s - 1]
        if lo == hi:
            continue
        block = err[lo:hi]
        m = block.min()
        if best_so_far is not None and m >= best_so_far:
            continue
        best_so_far = m
        idx = lo + int(np.argmax(block == m))
        out.append(_witness_at(A_rows, int_rows, qs[idx], "standard"))
        if m == 0:
            break
    return out


def shell_minima(A: Sequence[Sequence[Fraction]], Q: int) -> list[ApproxWitness]:
    """Best witness at every exact shell ||q|| = S, S = 1..Q.

    Like best_approx without the strict-improvement filter: one witness per
    shell, minimal quality within it (lex-first q).  Existence questions per
    shell reduce to these minima, so a scan over them is exhaustive over the
    whole ball.
    """
    if Q < 1:
        raise ValueError("Q must be >= 1")
    A_rows = [[Fraction(x) for x in row] for row in A]
    n = len(A_rows[0])
    if any(len(r) != n for r in A_rows):
        raise ValueError("ragged matrix")
    int_rows = [_row_int_form(r) for r in A_rows]
    if n == 1:
        # the only shell-S points are +-S; the half-ball representative wins
        return [_witness_at(A_rows, int_rows, (s,), "standard") for s in range(1, Q + 1)]
    qs, shells, starts = _ball_by_shell(n, Q)
    err, _ = _errors_for_rows(qs, int_rows)
    ends = np.append(starts[1:], len(shells))
    out: list[ApproxWitness] = []
    for s in range(1, Q + 1):
        lo, hi = starts[s - 1], ends[s - 1]
        if lo == hi:
            continue
        block = err[lo:hi]
        m = block.min()
        idx = lo + int(np.argmax(block == m))
        out.append(_witness_at(A_rows, int_rows, qs[idx], "standard"))
    return out


def _frontier_one_var(A_rows, int_rows, Q: int) -> list[ApproxWitness]:
    """m = n = 1 exact fast path: frontier entries are the convergents.

    Successive convergents are the best approximations of the second kind, so
    the strict-improvement frontier over shells is exactly the convergent
    list clipped to the ball.
    """
    y = A_rows[0][0]
    out = []
    prev_quality = None
    for p, q in convergents(y):
        if q > Q:
            break
        if q < 1:
            continue
        w = _witness_at(A_rows, int_rows, (q,), "standard")
        if prev_quality is not None and w.quality >= prev_quality:
            continue
        prev_quality = w.quality
        out.append(w)
        if w.quality == 0:
            break
    return out


def multiplicative_best(y: Sequence[Fraction], Q: int) -> list[ApproxWitness]:
    """Pareto frontier of (plus_product(q), |yq+p|) over the ball ||q|| <= Q."""
    if Q < 1:
        raise ValueError("Q must be >= 1")
    A_rows = [[Fraction(x) for x in y]]
    n = len(A_rows[0])
    int_rows = [_row_int_form(r) for r in A_rows]
    qs, sizes = _ball_by_plus_product(n, Q)
    err, _ = _errors_for_rows(qs, int_rows)
    out: list[ApproxWitness] = []
    best_so_far = None
    pos = 0
    while pos < len(sizes):
        hi = int(np.searchsorted(sizes, sizes[pos], side="right"))
        block = err[pos:hi]
        m = block.min()
        if best_so_far is None or m < best_so_far:
            best_so_far = m
            idx = pos + int(np.argmax(block == m))
            out.append(_witness_at(A_rows, int_rows, qs[idx], "multiplicative"))
            if m == 0:
                break
        pos = hi
    return out


# ---------------------------------------------------------------------------
# exponent estimation
# ---------------------------------------------------------------------------


@dataclass
class ExponentEstimate:
    """Max-slope exponent statistic over a witness trail.

    omega_hat restricts the slope to the tail of the trail (sizes at least
    cutoff^0.9, relaxed to the largest size present so the window is never
    empty); the head of the trail systematically overshoots the exponent at
    small sizes.  omega_hat_all is the plain max over the whole trail and is
    nondecreasing in the cutoff by construction.
    """

    omega_hat: float
    omega_hat_all: float
    witness_trail: list[ApproxWitness]
    cutoff_Q: int
    per_Q: list[tuple[int, float, float]]
    rational_dependence: bool
    mode: str = "standard"


def _tail_slope(trail: list[ApproxWitness], q_eff: Fraction) -> float:
    if any(w.quality == 0 for w in trail):
        return math.inf
    entries = [w for w in trail if w.size >= 2]
    if not entries:
        return 0.0
    floor = float(q_eff) ** 0.9
    floor = min(floor, float(max(w.size for w in entries)))
    return max(w.slope() for w in entries if float(w.size) >= floor - 1e-9)


def _all_slope(trail: list[ApproxWitness]) -> float:
    if any(w.quality == 0 for w in trail):
        return math.inf
    slopes = [w.slope() for w in trail if w.size >= 2]
    return max(slopes, default=0.0)


def exponent_estimate(
    A: Sequence[Sequence[Fraction]],
    Q_schedule: Sequence[int],
    mode: str = "standard",
    injected: Sequence[ApproxWitness] = (),
) -> ExponentEstimate:
    """Runs the exhaustive search at every cutoff of the schedule.

    Injected witnesses (known in closed form beyond any feasible enumeration)
    join the final trail; the tail window then extends to their sizes.
    """
    schedule = sorted(set(int(Q) for Q in Q_schedule))
    if not schedule:
        raise ValueError("empty cutoff schedule")
    if mode not in ("standard", "multiplicative"):
        raise ValueError(f"unknown mode {mode!r}")
    per_Q = []
    trail: list[ApproxWitness] = []
    for Q in schedule:
        if mode == "standard":
            trail = best_approx(A, Q)
        else:
            trail = multiplicative_best(A[0], Q)
        per_Q.append((Q, _tail_slope(trail, Fraction(Q)), _all_slope(trail)))
    cutoff = schedule[-1]
    full = sorted(trail + list(injected), key=lambda w: (w.size, w.shell))
    q_eff = max(Fraction(cutoff), max((w.size for w in injected), default=Fraction(0)))
    return ExponentEstimate(
        omega_hat=_tail_slope(full, q_eff),
        omega_hat_all=_all_slope(full),
        witness_trail=full,
        cutoff_Q=cutoff,
        per_Q=per_Q,
        rational_dependence=any(w.quality == 0 for w in full),
        mode=mode,
    )


# ---------------------------------------------------------------------------
# discrete homogeneous sets and witness -> contraction-time conversion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomogeneousSet:
    """Enumerable set of pairs (x, z) closed under positive integer scaling."""

    description: str
    pairs: Callable[[int], list[tuple[Fraction, tuple[Fraction, ...]]]]

    @classmethod
    def from_linear_form(cls, y: Sequence[Fraction]) -> "HomogeneousSet":
        """E = {(y.q + p, q)}: the embedded-lattice point set, z = q."""
        y = tuple(Fraction(v) for v in y)

        def gen(bound: int):
            out = []
            for q in product(range(-bound, bound + 1), repeat=len(y)):
                if all(c == 0 for c in q):
                    for p in (-1, 1):
                        out.append((Fraction(p), tuple(map(Fraction, q))))
                    continue
                dot = sum(v * c for v, c in zip(y, q))
                base = -round_half_even_div(dot.numerator, dot.denominator)
                for p in (base - 1, base, base + 1):
                    x = dot + p
                    if abs(x) <= 1:
                        out.append((x, tuple(map(Fraction, q))))
            return out

        return cls(f"lattice point set of the form at y={tuple(map(str, y))}", gen)


@dataclass
class HomogeneityReport:
    discrete_ok: bool
    homogeneous_ok: bool
    min_gap: Fraction
    pairs_checked: int
    scalings_checked: int


def check_discrete_homogeneous(
    E: HomogeneousSet, bound: int, multipliers: Sequence[int] = (2, 3)
) -> HomogeneityReport:
    """Prefix check of both defining properties on the enumerated region."""
    pts = E.pairs(bound)
    seen = set(pts)
    min_gap = None
    ordered = sorted(pts)
    for a, b in zip(ordered, ordered[1:]):
        gap = max(abs(a[0] - b[0]), max((abs(u - v) for u, v in zip(a[1], b[1])), default=Fraction(0)))
        if min_gap is None or gap < min_gap:
            min_gap = gap
    scalings = 0
    homog = True
    for x, z in pts:
        for k in multipliers:
            kx, kz = k * x, tuple(k * c for c in z)
            if abs(kx) <= 1 and all(abs(c) <= bound for c in kz):
                scalings += 1
                if (kx, kz) not in seen:
                    homog = False
    return HomogeneityReport(
        discrete_ok=min_gap is None or min_gap > 0,
        homogeneous_ok=homog,
        min_gap=min_gap if min_gap is not None else Fraction(0),
        pairs_checked=len(pts),
        scalings_checked=scalings,
    )


@dataclass
class ContractionCertificate:
    """Result of converting one approximation witness into a flow time.

    t is exact (a rational combination of logs of rationals plus a rational);
    margins give the float log-scale slack of each contraction inequality.
    """

    gamma: Fraction
    t: LogAffine
    ok: bool
    margins: tuple[float, ...]
    degenerate: bool
    v: Fraction


def witness_to_flow_time(
    a: Fraction, b: Fraction, v: Fraction, x, z, E: HomogeneousSet | None = None
) -> ContractionCertificate:
    """Forward half of the two-weight correspondence, checked exactly.

    Given |x| <= |z|^{-v} builds gamma = (bv-a)/(v+1) and the time t with
    e^{-bt}|z| = e^{-gamma t}, then verifies
    max(e^{at}|x|, e^{-bt}|z|) <= e^{-gamma t} in exact log arithmetic.
    """
    a, b, v = Fraction(a), Fraction(b), Fraction(v)
    if a <= 0 or b <= 0:
        raise ValueError("weights must be positive")
    if v < a / b:
        raise ValueError("need v >= a/b")
    x, z = ExpScalar.of(x), ExpScalar.of(z)
    if z.is_zero():
        raise ValueError("z must be nonzero")
    gamma = (b * v - a) / (v + 1)
    if gamma >= b:
        raise ValueError("contraction rate must stay below b")
    lz = abs(z).log_abs()
    if not x.is_zero():
        lx = abs(x).log_abs()
        if (lx + lz.scaled(v)).sign() > 0:
            raise ValueError("witness does not satisfy |x| <= |z|^{-v}")
    t = lz.scaled(1 / (b - gamma))
    degenerate = t.sign() <= 0
    # e^{-bt}|z| = e^{-gamma t} holds by construction; re-check exactly
    side_z = lz - t.scaled(b - gamma)
    if x.is_zero():
        margin_x = math.inf
        ok_x = True
    else:
        expr_x = lx + t.scaled(a + gamma)
        ok_x = expr_x.sign() <= 0
        margin_x = -expr_x.to_float()
    ok = ok_x and side_z.is_zero()
    return ContractionCertificate(gamma, t, ok, (margin_x, -side_z.to_float()), degenerate, v)


@dataclass
class MultiContractionCertificate:
    gamma: Fraction
    t: LogAffine
    t_vector: tuple[LogAffine, ...]
    ok: bool
    sum_exact: bool
    margins: tuple[float, ...]
    degenerate: bool
    v: Fraction


def witness_to_flow_times(
    v: Fraction, x, z: Sequence, E: HomogeneousSet | None = None
) -> MultiContractionCertificate:
    """Multiplicative version: build the time vector from one witness.

    Given |x| <= plus_product(z)^{-v/n} sets e^{(1-n*gamma)t} = plus_product(z)
    and e^{t_i} = e^{gamma t}|z_i|_+, verifies sum t_i = t exactly and the
    contraction of every coordinate.
    """
    v = Fraction(v)
    zs = [ExpScalar.of(c) for c in z]
    n = len(zs)
    if v <= n:
        raise ValueError("need v > n")
    x = ExpScalar.of(x)
    gamma = (v - n) / (n * (v + 1))
    one = ExpScalar(1)
    log_plus = []
    for c in zs:
        if not c.is_zero() and c.abs_compare(one) > 0:
            log_plus.append(abs(c).log_abs())
        else:
            log_plus.append(LogAffine.zero())
    l_pi = LogAffine.zero()
    for l in log_plus:
        l_pi = l_pi + l
    degenerate = l_pi.is_zero()
    if not x.is_zero():
        lx = abs(x).log_abs()
        if (lx.scaled(n) + l_pi.scaled(v)).sign() > 0:
            raise ValueError("witness does not satisfy |x| <= plus_product(z)^{-v/n}")
    t = l_pi.scaled(Fraction(1) / (1 - n * gamma))
    t_vec = tuple(t.scaled(gamma) + l for l in log_plus)
    total = LogAffine.zero()
    for ti in t_vec:
        total = total + ti
    sum_exact = (total - t).is_zero()
    margins = []
    ok = sum_exact
    if x.is_zero():
        margins.append(math.inf)
    else:
        expr_x = abs(x).log_abs() + t.scaled(1 + gamma)
        ok = ok and expr_x.sign() <= 0
        margins.append(-expr_x.to_float())
    for c, ti in zip(zs, t_vec):
        if c.is_zero():
            margins.append(math.inf)
            continue
        expr_i = abs(c).log_abs() - ti + t.scaled(gamma)
        ok = ok and expr_i.sign() <= 0
        margins.append(-expr_i.to_float())
    return MultiContractionCertificate(
        gamma, t, t_vec, ok, sum_exact, tuple(margins), degenerate, v
    )


def certificate_exponent(a: Fraction, b: Fraction, gamma: Fraction) -> Fraction:
    """The approximation exponent recovered from a contraction rate."""
    a, b, gamma = Fraction(a), Fraction(b), Fraction(gamma)
    if gamma >= b:
        raise ValueError("contraction rate must stay below b")
    return (a + gamma) / (b - gamma)


def certificate_to_witness(
    a: Fraction, b: Fraction, gamma: Fraction, t: LogAffine, x, z
) -> tuple[Fraction, bool]:
    """Converse direction: a time-t contraction pair certifies exponent v'.

    Checks max(e^{at}|x|, e^{-bt}|z|) <= e^{-gamma t} exactly, then verifies
    |x| <= |z|^{-v'} with v' = (a+gamma)/(b-gamma); both follow algebraically
    and are re-derived here with zero slack.
    """
    a, b, gamma = Fraction(a), Fraction(b), Fraction(gamma)
    v_prime = certificate_exponent(a, b, gamma)
    x, z = ExpScalar.of(x), ExpScalar.of(z)
    if z.is_zero():
        raise ValueError("z must be nonzero")
    lz = abs(z).log_abs()
    if (lz - t.scaled(b - gamma)).sign() > 0:
        return v_prime, False
    if x.is_zero():
        return v_prime, True
    lx = abs(x).log_abs()
    if (lx + t.scaled(a + gamma)).sign() > 0:
        return v_prime, False
    return v_prime, (lx + lz.scaled(v_prime)).sign() <= 0


# ---------------------------------------------------------------------------
# standard test numbers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestNumber:
    """Exact rational stand-in for a target number, with a certified error.

    Results of searches up to the ball Q at exponents up to v_max are
    unaffected by the truncation whenever error_bound < Q^-(v_max+1)/2.
    """

    value: Fraction
    kind: str
    error_bound: Fraction
    detail: str
    injected_witnesses: tuple[ApproxWitness, ...] = ()

    def sufficient_for(self, Q: int, v_max: Fraction) -> bool:
        """Exact test of error_bound < Q^-(v_max+1)/2, rational v_max allowed."""
        if self.error_bound == 0:
            return True
        return (
            compare_power_product(
                [(Fraction(Q), Fraction(v_max) + 1)], rhs=Fraction(1, 2) / self.error_bound
            )
            < 0
        )

    def require(self, Q: int, v_max: Fraction) -> "TestNumber":
        if not self.sufficient_for(Q, v_max):
            needed = 0.5 * float(Q) ** -(float(v_max) + 1)
            raise ValueError(
                f"truncation error {float(self.error_bound):.3e} too large for "
                f"Q={Q}, v_max={v_max}; need error below {needed:.3e}"
            )
        return self


def _cf_value(terms_head: int, repeat: int, count: int) -> tuple[Fraction, Fraction]:
    """Convergent of [head; repeat, repeat, ...] after `count` terms + error."""
    p_prev, q_prev = 1, 0
    p, q = terms_head, 1
    for _ in range(count):
        p, q, p_prev, q_prev = repeat * p + p_prev, repeat * q + q_prev, p, q
    return Fraction(p, q), Fraction(1, q * (q + q_prev))


def make_test_number(kind: str, **params) -> TestNumber:
    """Standard targets: golden | sqrt2 | liouville | rational | random.

    golden/sqrt2 take precision (rational error bound); liouville takes base
    and depth (exact, with its witness trail in closed form); rational takes
    value; random takes seed and digits.
    """
    if kind == "golden":
        precision = Fraction(params.get("precision", Fraction(1, 10**40)))
        count = 2
        while True:
            val, err = _cf_value(0, 1, count)
            if err <= precision:
                return TestNumber(val, kind, err, f"{count + 1} continued-fraction terms")
            count += 1
    if kind == "sqrt2":
        precision = Fraction(params.get("precision", Fraction(1, 10**40)))
        count = 2
        while True:
            val, err = _cf_value(1, 2, count)
            if err <= precision:
                return TestNumber(val, kind, err, f"{count + 1} continued-fraction terms")
            count += 1
    if kind == "liouville":
        base = int(params.get("base", 10))
        depth = int(params.get("depth", 4))
        if base < 2 or depth < 1:
            raise ValueError("need base >= 2 and depth >= 1")
        value = sum(Fraction(1, base ** math.factorial(k)) for k in range(1, depth + 1))
        witnesses = []
        for k in range(1, depth):
            q = base ** math.factorial(k)
            p = -sum(base ** (math.factorial(k) - math.factorial(j)) for j in range(1, k + 1))
            quality = sum(
                Fraction(base ** math.factorial(k), base ** math.factorial(j))
                for j in range(k + 1, depth + 1)
            )
            witnesses.append(
                ApproxWitness((q,), (p,), quality, Fraction(q), "standard", q, True)
            )
        return TestNumber(
            value, kind, Fraction(0), f"base {base}, depth {depth}", tuple(witnesses)
        )
    if kind == "rational":
        value = Fraction(params["value"])
        return TestNumber(value, kind, Fraction(0), "exact rational")
    if kind == "random":
        import random as _random

        seed = int(params.get("seed", 0))
        digits = int(params.get("digits", 12))
        rng = _random.Random(seed)
        den = 10**digits
        value = Fraction(rng.randrange(den), den)
        return TestNumber(value, kind, Fraction(0), f"seed {seed}, {digits} digits")
    raise ValueError(f"unknown test number kind {kind!r}")
