"""Sublevel-set goodness analysis for one-variable functions.

A function f is (C, alpha)-good on an interval B when every sublevel set
{x in B : |f(x)| <= eps * sup_B |f|} has measure at most C * eps**alpha * |B|.
This module measures those sets two ways:

* polynomials (and affine combinations of them) go through an exact path --
  Sturm chains isolate the roots of f -+ threshold, rational bisection refines
  each bracket, and the sublevel measure comes back as an exact interval that
  collapses to a point whenever every root lands on a rational bisection node;
* flat-bump functions built from exp(-1/t^2) factors go through a certified
  path -- mpmath interval arithmetic brackets every bump value (magnitudes
  like exp(-10**6) need arbitrary dyadic exponents), and adaptive subdivision
  classifies pieces as inside/outside the sublevel set, reporting unresolved
  pieces as undecided mass.

`build_cantor_bad` assembles the classical counterexample: a C-infinity
function vanishing exactly on a fat Cantor set.  `demonstrate_not_good`
couples the sublevel threshold to the sup over the half ball, which keeps the
certified ratio flat for polynomials and blows it up for the flat bumps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from mpmath import iv

from .exact import flog, fraction_str, iroot

TOL = Fraction(1, 2**40)  # default relative tolerance for certified brackets

_KINDS = ("polynomial", "cantor_bad", "sup_of", "affine_combination")

# mpf exponents beyond this are refused by the exact exporters; interval
# endpoints like exp(-2**90) exist internally but have no usable Fraction.
_EXPORT_EXP_CAP = 1 << 24

iv.prec = 64


# --------------------------------------------------------------------------
# function specifications


@dataclass(frozen=True)
class FunctionSpec:
    """One-variable function on a closed rational interval.

    kind == "polynomial":          coefficients, low degree first
    kind == "cantor_bad":          sum of scaled flat bumps over `bumps`
    kind == "sup_of":              pointwise max of `parts`
    kind == "affine_combination":  weights[0] + sum(weights[i+1] * parts[i])
    """

    kind: str
    domain: tuple[Fraction, Fraction]
    coefficients: tuple[Fraction, ...] = ()
    parts: tuple["FunctionSpec", ...] = ()
    weights: tuple[Fraction, ...] = ()
    bumps: tuple[tuple[int, Fraction, Fraction], ...] = ()
    levels: int = 0
    surviving: tuple[tuple[Fraction, Fraction], ...] = ()
    surviving_measure: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError("domain must be a nondegenerate interval")
        if self.kind == "polynomial" and not self.coefficients:
            raise ValueError("polynomial needs at least one coefficient")
        if self.kind in ("sup_of", "affine_combination") and not self.parts:
            raise ValueError(f"{self.kind} needs at least one part")
        if self.kind == "affine_combination" and len(self.weights) != len(self.parts) + 1:
            raise ValueError("need one weight per part plus a constant term")
        for p in self.parts:
            if p.domain != self.domain:
                raise ValueError("parts must share the parent domain")
        if self.kind == "cantor_bad" and not self.bumps:
            raise ValueError("cantor_bad needs bump intervals")


def polynomial(coefficients: Sequence[Fraction | int], domain=(Fraction(-1), Fraction(1))) -> FunctionSpec:
    coeffs = tuple(Fraction(c) for c in coefficients)
    lo, hi = (Fraction(domain[0]), Fraction(domain[1]))
    return FunctionSpec(kind="polynomial", domain=(lo, hi), coefficients=coeffs)


def sup_of(parts: Sequence[FunctionSpec]) -> FunctionSpec:
    parts = tuple(parts)
    return FunctionSpec(kind="sup_of", domain=parts[0].domain, parts=parts)


def affine_combination(weights: Sequence[Fraction | int], parts: Sequence[FunctionSpec]) -> FunctionSpec:
    parts = tuple(parts)
    ws = tuple(Fraction(w) for w in weights)
    return FunctionSpec(kind="affine_combination", domain=parts[0].domain, parts=parts, weights=ws)


def build_cantor_bad(levels: int) -> FunctionSpec:
    """Flat-bump sum vanishing exactly on a positive-measure Cantor set.

    Stage k splits every surviving interval into 3**(k+1) equal pieces and
    removes the open middle piece; the removed interval carries a bump scaled
    by 3**(-3**k).  The survivors keep measure prod_k (1 - 3**-(k+1)) > 0.
    """
    if not 1 <= levels <= 6:
        raise ValueError("levels must be in 1..6 (deeper stages exceed the exact budget)")
    survivors: list[tuple[Fraction, Fraction]] = [(Fraction(0), Fraction(1))]
    bumps: list[tuple[int, Fraction, Fraction]] = []
    for k in range(1, levels + 1):
        pieces = 3 ** (k + 1)
        middle = (pieces - 1) // 2
        nxt: list[tuple[Fraction, Fraction]] = []
        for lo, hi in survivors:
            w = (hi - lo) / pieces
            a = lo + middle * w
            b = a + w
            bumps.append((k, a, b))
            nxt.append((lo, a))
            nxt.append((b, hi))
        survivors = nxt
    measure = Fraction(1)
    for k in range(1, levels + 1):
        measure *= 1 - Fraction(1, 3 ** (k + 1))
    return FunctionSpec(
        kind="cantor_bad",
        domain=(Fraction(0), Fraction(1)),
        bumps=tuple(sorted(bumps, key=lambda t: t[1])),
        levels=levels,
        surviving=tuple(survivors),
        surviving_measure=measure,
    )


# --------------------------------------------------------------------------
# exact polynomial machinery


def _poly_trim(c: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return c[:i]


def _poly_eval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coef in reversed(c):
        acc = acc * x + coef
    return acc


def _poly_deriv(c: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return _poly_trim(tuple(i * c[i] for i in range(1, len(c))))


def _poly_divmod(a: tuple[Fraction, ...], b: tuple[Fraction, ...]):
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and _poly_trim(tuple(a)):
        k = len(a) - len(b)
        f = a[-1] * inv
        q[k] = f
        for i, coef in enumerate(b):
            a[k + i] -= f * coef
        a.pop()
    return _poly_trim(tuple(q)), _poly_trim(tuple(a))


def _poly_gcd(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        a = tuple(x / a[-1] for x in a)
    return a


def _square_free(c: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    d = _poly_deriv(c)
    if not d:
        return c
    g = _poly_gcd(c, d)
    if len(g) <= 1:
        return c
    q, _ = _poly_divmod(c, g)
    return q


def _sturm_chain(c: tuple[Fraction, ...]) -> list[tuple[Fraction, ...]]:
    chain = [c, _poly_deriv(c)]
    while chain[-1]:
        _, r = _poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append(tuple(-x for x in r))
    return [p for p in chain if p]


def _variations(chain: list[tuple[Fraction, ...]], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


@dataclass(frozen=True)
class _RootBracket:
    lo: Fraction
    hi: Fraction  # lo == hi marks an exact rational root

    @property
    def exact(self) -> bool:
        return self.lo == self.hi


def _isolate_roots(c: tuple[Fraction, ...], lo: Fraction, hi: Fraction, width: Fraction) -> list[_RootBracket]:
    """Brackets for every real root of c in [lo, hi], refined below `width`.

    Bisection midpoints are tested exactly, so roots on rational nodes (all
    degree-1 roots, dyadic roots on dyadic domains) collapse to exact points.
    """
    p = _square_free(_poly_trim(c))
    if len(p) <= 1:
        return []  # constant: no isolated roots (identically-zero handled upstream)
    roots: list[_RootBracket] = []
    if len(p) == 2:
        r = -p[0] / p[1]
        if lo <= r <= hi:
            roots.append(_RootBracket(r, r))
        return roots
    chain = _sturm_chain(p)
    if _poly_eval(p, lo) == 0:
        roots.append(_RootBracket(lo, lo))

    def count(a: Fraction, b: Fraction) -> int:  # roots in (a, b]
        return _variations(chain, a) - _variations(chain, b)

    stack = [(lo, hi, count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            while b - a > width:
                m = (a + b) / 2
                if _poly_eval(p, m) == 0:
                    a = b = m
                    break
                if count(a, m) == 1:
                    b = m
                else:
                    a = m
            roots.append(_RootBracket(a, b))
            continue
        m = (a + b) / 2
        left = count(a, m)  # counts a root at m as well
        if _poly_eval(p, m) == 0:
            roots.append(_RootBracket(m, m))
            stack.append((a, m, left - 1))
        else:
            stack.append((a, m, left))
        stack.append((m, b, n - left))
    return sorted(roots, key=lambda r: r.lo)


def _poly_range(c: Sequence[Fraction], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Interval Horner: encloses {c(x) : lo <= x <= hi}."""
    alo = ahi = Fraction(0)
    for coef in reversed(c):
        c1, c2, c3, c4 = alo * lo, alo * hi, ahi * lo, ahi * hi
        alo = min(c1, c2, c3, c4) + coef
        ahi = max(c1, c2, c3, c4) + coef
    return alo, ahi


def _flatten(f: FunctionSpec) -> tuple[Fraction, ...] | None:
    """Coefficients when f is a polynomial in disguise, else None."""
    if f.kind == "polynomial":
        return f.coefficients
    if f.kind == "sup_of" and len(f.parts) == 1:
        return _flatten(f.parts[0])
    if f.kind == "affine_combination":
        acc = [f.weights[0]]
        for w, part in zip(f.weights[1:], f.parts):
            sub = _flatten(part)
            if sub is None:
                return None
            if len(sub) > len(acc):
                acc.extend([Fraction(0)] * (len(sub) - len(acc)))
            for i, coef in enumerate(sub):
                acc[i] += w * coef
        return tuple(acc)
    return None


# --------------------------------------------------------------------------
# certified interval scalars (mpmath-backed)


def _iv_fraction(x: Fraction):
    """ivmpf interval containing the rational x exactly."""
    num, den = x.numerator, x.denominator
    need = max(abs(num).bit_length(), den.bit_length()) + 8
    old = iv.prec
    try:
        iv.prec = max(old, need)
        a = iv.mpf(num)
        b = iv.mpf(den)
    finally:
        iv.prec = old
    return a / b


def _mpf_tuple_to_fraction(t) -> Fraction:
    sign, man, exp, _ = t
    man = int(man)
    if man == 0:
        if exp != 0:
            raise ValueError("non-finite interval endpoint")
        return Fraction(0)
    if not isinstance(exp, int) or abs(exp) > _EXPORT_EXP_CAP:
        raise ValueError("interval endpoint too extreme for exact export")
    v = Fraction(man) * Fraction(2) ** exp
    return -v if sign else v


def _iv_bounds(x) -> tuple[Fraction, Fraction]:
    lo_t, hi_t = x._mpi_
    return _mpf_tuple_to_fraction(lo_t), _mpf_tuple_to_fraction(hi_t)


def _phi_iv(t: Fraction):
    """Bracket of exp(-1/t**2) for t > 0; exact zero for t <= 0."""
    if t <= 0:
        return iv.mpf(0)
    return iv.exp(-_iv_fraction(Fraction(1) / (t * t)))


def _bump_value_iv(stage: int, a: Fraction, b: Fraction, x: Fraction):
    if not a < x < b:
        return iv.mpf(0)
    scale = _iv_fraction(Fraction(1, 3 ** (3**stage)))
    return scale * _phi_iv(x - a) * _phi_iv(b - x)


def _cantor_range_iv(f: FunctionSpec, lo: Fraction, hi: Fraction):
    """Range bracket of a bump sum over [lo, hi].

    Bump supports are pairwise disjoint, so at every x at most one bump is
    active: the range is [0, max of bump maxima] unless [lo, hi] sits strictly
    inside a single bump, where unimodality pins both ends to point values.
    """
    zero = iv.mpf(0)
    active = [(k, a, b) for (k, a, b) in f.bumps if a < hi and lo < b]
    if not active:
        return zero
    top = zero
    for k, a, b in active:
        u, v = max(lo, a), min(hi, b)
        m = (a + b) / 2
        if u <= m <= v:
            cand = _bump_value_iv(k, a, b, m)
        else:
            cand = _bump_value_iv(k, a, b, u if abs(u - m) < abs(v - m) else v)
        top = cand if top.b < cand.b else top
    if len(active) == 1 and active[0][1] < lo and hi < active[0][2]:
        k, a, b = active[0]
        m = (a + b) / 2
        far = lo if abs(lo - m) >= abs(hi - m) else hi
        bot = _bump_value_iv(k, a, b, far)
        return iv.mpf([bot.a, top.b])
    return iv.mpf([0, top.b])


def _range_iv(f: FunctionSpec, lo: Fraction, hi: Fraction):
    """Certified bracket of {f(x) : lo <= x <= hi} as an ivmpf."""
    if f.kind == "polynomial":
        rlo, rhi = _poly_range(f.coefficients, lo, hi)
        return iv.mpf([_iv_fraction(rlo).a, _iv_fraction(rhi).b])
    if f.kind == "cantor_bad":
        return _cantor_range_iv(f, lo, hi)
    if f.kind == "sup_of":
        ranges = [_range_iv(p, lo, hi) for p in f.parts]
        return iv.mpf([max(r.a for r in ranges), max(r.b for r in ranges)])
    acc = _iv_fraction(f.weights[0])
    for w, part in zip(f.weights[1:], f.parts):
        acc = acc + _iv_fraction(w) * _range_iv(part, lo, hi)
    return acc


def _abs_range_iv(f: FunctionSpec, lo: Fraction, hi: Fraction):
    r = _range_iv(f, lo, hi)
    if r.a >= 0:
        return r
    if r.b <= 0:
        return -r
    m = max(-r.a, r.b)
    return iv.mpf([0, m.b if hasattr(m, "b") else m])


def evaluate_exact(f: FunctionSpec, x: Fraction | int) -> Fraction:
    """Exact value at x; raises for bump functions (values are transcendental)."""
    x = Fraction(x)
    if f.kind == "polynomial":
        return _poly_eval(f.coefficients, x)
    if f.kind == "sup_of":
        return max(evaluate_exact(p, x) for p in f.parts)
    if f.kind == "affine_combination":
        acc = f.weights[0]
        for w, part in zip(f.weights[1:], f.parts):
            acc += w * evaluate_exact(part, x)
        return acc
    raise ValueError("bump values are transcendental; use evaluate_interval")


def evaluate_interval(f: FunctionSpec, lo: Fraction | int, hi: Fraction | int) -> tuple[Fraction, Fraction]:
    """Certified rational bounds for {f(x) : lo <= x <= hi} (lo == hi allowed).

    Near bump endpoints the true values can be too extreme to export exactly
    (exponents beyond 2**24 bits); such calls raise rather than approximate.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError("need lo <= hi")
    coeffs = _flatten(f)
    if coeffs is not None:
        if lo == hi:
            v = _poly_eval(coeffs, lo)
            return v, v
        return _poly_range(coeffs, lo, hi)
    return _iv_bounds(_range_iv(f, lo, hi))


# --------------------------------------------------------------------------
# sup of |f| over an interval


def _point_abs_iv(f: FunctionSpec, x: Fraction):
    return _abs_range_iv(f, x, x)


def _candidate_points(f: FunctionSpec, lo: Fraction, hi: Fraction) -> list[Fraction]:
    pts = [lo, hi, (lo + hi) / 2]
    if f.kind == "cantor_bad":
        for _, a, b in f.bumps:
            m = (a + b) / 2
            if lo <= m <= hi:
                pts.append(m)
    if f.kind == "polynomial":
        for br in _isolate_roots(_poly_deriv(f.coefficients), lo, hi, (hi - lo) * TOL):
            pts.append((br.lo + br.hi) / 2)
    for part in f.parts:
        pts.extend(_candidate_points(part, lo, hi))
    return pts


def _sup_abs_poly(c: tuple[Fraction, ...], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    candidates = [(lo, lo), (hi, hi)]
    for br in _isolate_roots(_poly_deriv(c), lo, hi, (hi - lo) * TOL):
        candidates.append((max(lo, br.lo), min(hi, br.hi)))
    best_lo = Fraction(0)
    best_hi = Fraction(0)
    for a, b in candidates:
        if a == b:
            v = abs(_poly_eval(c, a))
            best_lo = max(best_lo, v)
            best_hi = max(best_hi, v)
        else:
            rlo, rhi = _poly_range(c, a, b)
            best_lo = max(best_lo, max(rlo, -rhi, Fraction(0)))
            best_hi = max(best_hi, max(abs(rlo), abs(rhi)))
    return best_lo, best_hi


def sup_abs_interval(f: FunctionSpec, interval: tuple[Fraction, Fraction], rel_tol: Fraction = TOL) -> tuple[Fraction, Fraction]:
    """Certified bounds [lo, hi] for sup{|f(x)|} over a closed interval.

    Exact through derivative roots for flattenable polynomials; otherwise
    branch-and-bound with point evaluations at bump peaks until the bracket is
    within the relative tolerance.
    """
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if lo >= hi:
        raise ValueError("need a nondegenerate interval")
    coeffs = _flatten(f)
    if coeffs is not None:
        return _sup_abs_poly(_poly_trim(coeffs), lo, hi)

    best = iv.mpf(0)  # point evaluations: sound lower bounds for the sup
    for x in sorted(set(_candidate_points(f, lo, hi))):
        v = _point_abs_iv(f, x)
        if v.a > best.a:
            best = v
    segments = [(lo, hi, _abs_range_iv(f, lo, hi))]
    for _ in range(4000):
        top = max(s[2].b for s in segments)
        if top == 0:
            return Fraction(0), Fraction(0)
        if best.a > 0 and top <= best.a * (1 + _iv_fraction(rel_tol)).b:
            break
        idx = max(range(len(segments)), key=lambda i: segments[i][2].b)
        a, b, _ = segments.pop(idx)
        if b - a <= (hi - lo) * rel_tol:
            segments.append((a, b, _abs_range_iv(f, a, b)))
            break
        m = (a + b) / 2
        vm = _point_abs_iv(f, m)
        if vm.a > best.a:
            best = vm
        segments.append((a, m, _abs_range_iv(f, a, m)))
        segments.append((m, b, _abs_range_iv(f, m, b)))
    top_range = max((s[2] for s in segments), key=lambda r: r.b)
    return _mpf_tuple_to_fraction(best._mpi_[0]), _mpf_tuple_to_fraction(top_range._mpi_[1])


# --------------------------------------------------------------------------
# sublevel measure


@dataclass(frozen=True)
class MeasureInterval:
    """Certified bounds on the measure of a sublevel set."""

    lo: Fraction
    hi: Fraction

    @property
    def undecided(self) -> Fraction:
        return self.hi - self.lo

    def to_json_dict(self) -> dict:
        return {"lo": fraction_str(self.lo), "hi": fraction_str(self.hi)}


def _sublevel_exact(c: tuple[Fraction, ...], lo: Fraction, hi: Fraction, tau: Fraction, width: Fraction) -> MeasureInterval:
    c = _poly_trim(c)
    if len(c) <= 1:
        v = abs(c[0]) if c else Fraction(0)
        full = hi - lo if v <= tau else Fraction(0)
        return MeasureInterval(full, full)
    brackets: list[tuple[Fraction, Fraction]] = []
    plus = (c[0] - tau,) + c[1:]
    minus = (c[0] + tau,) + c[1:]
    for g in (plus, minus):
        for br in _isolate_roots(g, lo, hi, width):
            brackets.append((max(lo, br.lo), min(hi, br.hi)))
    brackets.sort()
    merged: list[list[Fraction]] = []
    for a, b in brackets:
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    measure_lo = Fraction(0)
    slack = Fraction(0)
    cursor = lo
    for a, b in merged:
        if a > cursor:
            mid = (cursor + a) / 2
            if abs(_poly_eval(c, mid)) <= tau:
                measure_lo += a - cursor
        slack += b - a
        cursor = max(cursor, b)
    if cursor < hi:
        mid = (cursor + hi) / 2
        if abs(_poly_eval(c, mid)) <= tau:
            measure_lo += hi - cursor
    return MeasureInterval(measure_lo, measure_lo + slack)


def _sublevel_adaptive(f: FunctionSpec, lo: Fraction, hi: Fraction, tau_lo: Fraction, tau_hi: Fraction, tol: Fraction) -> MeasureInterval:
    t_lo = _iv_fraction(tau_lo) if tau_lo > 0 else iv.mpf(0)
    t_hi = _iv_fraction(tau_hi)
    floor = (hi - lo) * tol
    measure_lo = Fraction(0)
    undecided = Fraction(0)
    stack = [(lo, hi)]
    steps = 0
    while stack:
        steps += 1
        a, b = stack.pop()
        r = _abs_range_iv(f, a, b)
        if r.b <= t_lo.a:
            measure_lo += b - a
            continue
        if r.a > t_hi.b:
            continue
        if b - a <= floor or steps > 60000:
            undecided += b - a
            continue
        m = (a + b) / 2
        stack.append((a, m))
        stack.append((m, b))
    return MeasureInterval(measure_lo, measure_lo + undecided)


def sublevel_measure(f: FunctionSpec, interval: tuple[Fraction, Fraction], threshold: Fraction, tol: Fraction = TOL) -> MeasureInterval:
    """Certified measure of {x in interval : |f(x)| <= threshold}.

    Polynomials resolve exactly (the bounds coincide whenever every root of
    f -+ threshold is hit by a rational bisection node); bump functions get
    adaptive certified bounds whose gap is the reported undecided mass.
    """
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    lo = max(lo, f.domain[0])
    hi = min(hi, f.domain[1])
    if lo >= hi:
        raise ValueError("interval does not meet the domain")
    threshold = Fraction(threshold)
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    coeffs = _flatten(f)
    if coeffs is not None:
        return _sublevel_exact(coeffs, lo, hi, threshold, (hi - lo) * tol)
    return _sublevel_adaptive(f, lo, hi, threshold, threshold, tol)


# --------------------------------------------------------------------------
# nth-root brackets for eps**alpha


def _inth_root(n: int, q: int) -> int:
    """floor(n ** (1/q)) for n >= 0, q >= 1."""
    return iroot(n, q)


def _pow_bracket(eps: Fraction, alpha: Fraction) -> tuple[Fraction, Fraction]:
    """[lo, hi] containing eps**alpha; collapses on exact rational powers."""
    if eps <= 0:
        raise ValueError("need eps > 0")
    p, q = alpha.numerator, alpha.denominator
    r = eps**p
    if q == 1:
        return r, r
    rn, rd = _inth_root(r.numerator, q), _inth_root(r.denominator, q)
    if rn**q == r.numerator and rd**q == r.denominator:
        v = Fraction(rn, rd)  # a perfect rational power: collapse the bracket
        return v, v
    # pick the dyadic scale so the floor root keeps ~40 significant bits
    log2r = r.numerator.bit_length() - r.denominator.bit_length()
    k = max(48, 48 - (log2r // q) + 8)
    scaled = (r.numerator << (q * k)) // r.denominator
    m = _inth_root(scaled, q)
    return Fraction(m, 1 << k), Fraction(m + 1, 1 << k)


# --------------------------------------------------------------------------
# goodness profiles


@dataclass(frozen=True)
class GoodnessRecord:
    center: Fraction
    radius: Fraction
    alpha: Fraction
    eps: Fraction
    measure: MeasureInterval
    ratio_lo: Fraction
    ratio_hi: Fraction

    def to_row(self) -> dict:
        return {
            "ball_center": fraction_str(self.center),
            "radius": fraction_str(self.radius),
            "alpha": fraction_str(self.alpha),
            "eps": fraction_str(self.eps),
            "ratio": fraction_str(self.ratio_hi),
        }


@dataclass(frozen=True)
class GoodnessProfile:
    """Sampled sublevel ratios; C_hat dominates every sampled ratio by construction."""

    alpha: Fraction
    eps_grid: tuple[Fraction, ...]
    C_hat_per_ball: tuple[Fraction, ...]
    C_hat: Fraction
    records: tuple[GoodnessRecord, ...]

    def rows(self) -> list[dict]:
        return [r.to_row() for r in self.records]

    def to_json_dict(self) -> dict:
        return {
            "alpha": fraction_str(self.alpha),
            "eps_grid": [fraction_str(e) for e in self.eps_grid],
            "C_hat_per_ball": [fraction_str(c) for c in self.C_hat_per_ball],
            "C_hat": fraction_str(self.C_hat),
            "records": self.rows(),
        }


def _clip_ball(f: FunctionSpec, center: Fraction, radius: Fraction) -> tuple[Fraction, Fraction]:
    lo = max(center - radius, f.domain[0])
    hi = min(center + radius, f.domain[1])
    if lo >= hi:
        raise ValueError("ball does not meet the domain")
    return lo, hi


def goodness_profile(
    f: FunctionSpec,
    balls: Sequence[tuple[Fraction, Fraction]],
    alpha: Fraction,
    eps_grid: Sequence[Fraction],
    tol: Fraction = TOL,
) -> GoodnessProfile:
    """Sublevel ratios measure / (eps**alpha * |B|) over balls and thresholds.

    ratio_hi is certified >= the true ratio, so C_hat = max(ratio_hi) is a
    certified lower bound for any constant C making f (C, alpha)-good on the
    sampled balls.
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("need alpha > 0")
    eps_grid = tuple(Fraction(e) for e in eps_grid)
    if not eps_grid or any(not 0 < e <= 1 for e in eps_grid):
        raise ValueError("eps grid must sit in (0, 1]")
    records: list[GoodnessRecord] = []
    per_ball: list[Fraction] = []
    for center, radius in balls:
        center, radius = Fraction(center), Fraction(radius)
        blo, bhi = _clip_ball(f, center, radius)
        size = bhi - blo
        s_lo, s_hi = sup_abs_interval(f, (blo, bhi), tol)
        if s_hi == 0:
            raise ValueError("function vanishes identically on a ball")
        ball_worst = Fraction(0)
        for eps in eps_grid:
            coeffs = _flatten(f)
            if coeffs is not None and s_lo == s_hi:
                meas = _sublevel_exact(coeffs, blo, bhi, eps * s_lo, size * tol)
            else:
                meas = _sublevel_adaptive(f, blo, bhi, eps * s_lo, eps * s_hi, tol)
            p_lo, p_hi = _pow_bracket(eps, alpha)
            ratio_lo = meas.lo / (p_hi * size)
            ratio_hi = meas.hi / (p_lo * size)
            records.append(GoodnessRecord(center, radius, alpha, eps, meas, ratio_lo, ratio_hi))
            ball_worst = max(ball_worst, ratio_hi)
        per_ball.append(ball_worst)
    return GoodnessProfile(
        alpha=alpha,
        eps_grid=eps_grid,
        C_hat_per_ball=tuple(per_ball),
        C_hat=max(per_ball),
        records=tuple(records),
    )


# --------------------------------------------------------------------------
# divergence demonstrations


@dataclass(frozen=True)
class DivergenceRow:
    alpha: Fraction
    radius: Fraction
    eps: Fraction  # certified upper bound for the half-ball sup ratio
    measure: MeasureInterval
    ratio_lo: Fraction
    ratio_hi: Fraction
    log10_eps: float
    log10_ratio_lo: float

    def to_row(self) -> dict:
        return {
            "alpha": fraction_str(self.alpha),
            "radius": fraction_str(self.radius),
            "log10_eps": self.log10_eps,
            "log10_ratio_lo": self.log10_ratio_lo,
        }


@dataclass(frozen=True)
class DivergenceTable:
    """Sublevel ratios at eps coupled to the half-ball sup.

    For each radius r the threshold is sup over B(x0, r/2); eps is the
    certified ratio of that sup to the sup over B(x0, r).  A function that is
    (C, alpha)-good near x0 keeps ratio bounded; the flat-bump construction
    sends it through the roof as r halves.
    """

    x0: Fraction
    radii: tuple[Fraction, ...]
    rows: tuple[DivergenceRow, ...]

    def rows_for(self, alpha: Fraction) -> list[DivergenceRow]:
        alpha = Fraction(alpha)
        picked = [r for r in self.rows if r.alpha == alpha]
        return sorted(picked, key=lambda r: r.radius, reverse=True)

    def is_divergent(self, alpha: Fraction, factor: Fraction | int = 10) -> bool:
        """True when certified ratios grow monotonically and by >= factor overall."""
        rows = self.rows_for(alpha)
        if len(rows) < 2:
            return False
        for prev, nxt in zip(rows, rows[1:]):
            if nxt.ratio_lo < prev.ratio_hi:
                return False
        return rows[-1].ratio_lo >= Fraction(factor) * rows[0].ratio_hi

    def to_json_dict(self) -> dict:
        return {
            "x0": fraction_str(self.x0),
            "radii": [fraction_str(r) for r in self.radii],
            "rows": [r.to_row() for r in self.rows],
            "divergent": {
                fraction_str(a): self.is_divergent(a)
                for a in sorted({r.alpha for r in self.rows})
            },
        }


def _log10(x: Fraction) -> float:
    if x <= 0:
        return float("-inf")
    return flog(x) / math.log(10)


def demonstrate_not_good(
    f: FunctionSpec,
    x0: Fraction,
    alphas: Sequence[Fraction],
    radii: Sequence[Fraction],
    tol: Fraction = TOL,
) -> DivergenceTable:
    """Certified sublevel ratios with the threshold tied to the half-ball sup.

    For every radius the reported eps satisfies eps >= sup(B(x0, r/2)) / sup(B)
    and ratio_lo <= measure / (eps**alpha * |B|), so a divergent table is a
    proof that no (C, alpha) pair works at x0 on the sampled scales.
    """
    x0 = Fraction(x0)
    if not f.domain[0] <= x0 <= f.domain[1]:
        raise ValueError("x0 must lie in the domain")
    alphas = tuple(Fraction(a) for a in alphas)
    if any(a <= 0 for a in alphas):
        raise ValueError("need alpha > 0")
    radii = tuple(sorted({Fraction(r) for r in radii}, reverse=True))
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    if f.kind != "polynomial" and _flatten(f) is None and min(radii) < Fraction(1, 1024):
        raise ValueError("radii below 1/1024 exceed the certified-arithmetic budget for bump sums")
    rows: list[DivergenceRow] = []
    for r in radii:
        blo, bhi = _clip_ball(f, x0, r)
        hlo, hhi = _clip_ball(f, x0, r / 2)
        size = bhi - blo
        sf_lo, sf_hi = sup_abs_interval(f, (blo, bhi), tol)
        sh_lo, sh_hi = sup_abs_interval(f, (hlo, hhi), tol)
        if sf_lo <= 0:
            raise ValueError("sup lower bound vanishes; cannot form the halving ratio")
        eps = min(Fraction(1), sh_hi / sf_lo)
        tau_lo = sh_lo
        tau_hi = min(eps * sf_hi, sf_hi)
        coeffs = _flatten(f)
        if coeffs is not None and tau_lo == tau_hi:
            meas = _sublevel_exact(coeffs, blo, bhi, tau_lo, size * tol)
        else:
            meas = _sublevel_adaptive(f, blo, bhi, tau_lo, tau_hi, tol)
        for alpha in alphas:
            p_lo, p_hi = _pow_bracket(eps, alpha)
            ratio_lo = meas.lo / (p_hi * size)
            ratio_hi = meas.hi / (p_lo * size)
            rows.append(
                DivergenceRow(
                    alpha=alpha,
                    radius=r,
                    eps=eps,
                    measure=meas,
                    ratio_lo=ratio_lo,
                    ratio_hi=ratio_hi,
                    log10_eps=_log10(eps),
                    log10_ratio_lo=_log10(ratio_lo),
                )
            )
    return DivergenceTable(x0=x0, radii=radii, rows=tuple(rows))
