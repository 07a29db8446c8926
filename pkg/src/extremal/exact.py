"""Exact scalar utilities shared by every module.

All quantities that feed a verdict are rationals (`fractions.Fraction`) or
exact linear forms in logarithms of rationals (`LogValue`).  Comparisons of
products of rational powers are decided by clearing exponent denominators and
comparing big integers, never through floats.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction  # short alias used in signatures


def round_half_even_div(r: int, d: int) -> int:
    """Nearest integer to r/d for d > 0, ties going to the even integer."""
    if d <= 0:
        raise ValueError("d must be positive")
    q, rem = divmod(r, d)
    twice = 2 * rem
    if twice < d:
        return q
    if twice > d:
        return q + 1
    return q if q % 2 == 0 else q + 1


def centered_residue(r: int, d: int) -> tuple[int, int]:
    """Split r = k*d + e with |e| <= d/2, ties resolved toward even k."""
    k = round_half_even_div(r, d)
    return k, r - k * d


def nearest_int(x: Fraction) -> int:
    """Nearest integer with ties to even (banker's rounding)."""
    return round_half_even_div(x.numerator, x.denominator)


def flog(x: Fraction | int) -> float:
    """float log of a positive rational, safe for huge numerators."""
    f = Fraction(x)
    if f <= 0:
        raise ValueError("flog needs a positive value")
    return math.log(f.numerator) - math.log(f.denominator)


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer, exactly."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if n == 0 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)  # 2^ceil(bits/k) >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def compare_power_product(
    terms: Iterable[tuple[Fraction, Fraction]], rhs: Fraction = Fraction(1)
) -> int:
    """Sign of prod(base**exp) - rhs, decided exactly.

    Every base must be a positive rational; exponents are rationals.  Clearing
    the exponents to a common denominator L reduces the comparison to
    prod(base**n_i) vs rhs**L over integers.
    """
    if rhs <= 0:
        raise ValueError("rhs must be positive")
    cleaned = []
    lcm = 1
    for b, e in terms:
        b = Fraction(b)
        e = Fraction(e)
        if b <= 0:
            raise ValueError("power-product bases must be positive")
        if b == 1 or e == 0:
            continue
        cleaned.append((b, e))
        lcm = lcm * e.denominator // math.gcd(lcm, e.denominator)
    lhs = Fraction(1)
    for b, e in cleaned:
        lhs *= b ** int(e * lcm)
    rv = rhs**lcm
    if lhs == rv:
        return 0
    return 1 if lhs > rv else -1


class LogValue:
    """Exact value sum_i c_i * ln(r_i) with rational c_i and r_i > 0.

    Supports addition, scaling and exact sign/ordering via power products.
    Used to carry flow times t = ln(z)/(b-gamma) etc. without floats.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Fraction, Fraction] | None = None):
        clean: dict[Fraction, Fraction] = {}
        for r, c in (terms or {}).items():
            r = Fraction(r)
            c = Fraction(c)
            if r <= 0:
                raise ValueError("log of a non-positive rational")
            if r == 1 or c == 0:
                continue
            clean[r] = clean.get(r, Fraction(0)) + c
        self.terms = {r: c for r, c in clean.items() if c != 0}

    @classmethod
    def of(cls, r: Fraction | int, c: Fraction | int = 1) -> "LogValue":
        return cls({Fraction(r): Fraction(c)})

    @classmethod
    def zero(cls) -> "LogValue":
        return cls({})

    def __add__(self, other: "LogValue") -> "LogValue":
        t = dict(self.terms)
        for r, c in other.terms.items():
            t[r] = t.get(r, Fraction(0)) + c
        return LogValue(t)

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + (-other)

    def __neg__(self) -> "LogValue":
        return LogValue({r: -c for r, c in self.terms.items()})

    def scaled(self, c: Fraction | int) -> "LogValue":
        c = Fraction(c)
        return LogValue({r: cc * c for r, cc in self.terms.items()})

    def sign(self) -> int:
        """Sign of the value: compare prod r_i**c_i against 1."""
        return compare_power_product(self.terms.items())

    def compare(self, other: "LogValue") -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        return isinstance(other, LogValue) and self.compare(other) == 0

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms or self.sign() == 0

    def to_float(self) -> float:
        return sum(float(c) * flog(r) for r, c in self.terms.items())

    def exp_float(self) -> float:
        return math.exp(self.to_float())

    def __repr__(self):
        if not self.terms:
            return "LogValue(0)"
        bits = " + ".join(f"{c}*ln({r})" for r, c in sorted(self.terms.items()))
        return f"LogValue({bits})"


class LogAffine:
    """Exact value q + sum_i c_i*ln(r_i) with q, c_i, r_i rational, r_i > 0.

    Zero detection is exact: the value vanishes iff both parts vanish, since
    e^{-q} for rational q != 0 is transcendental while the power product is
    algebraic.  Nonzero signs are certified by interval refinement.
    """

    __slots__ = ("const", "logs")

    def __init__(self, const: Fraction | int = 0, logs: LogValue | None = None):
        self.const = Fraction(const)
        self.logs = logs if logs is not None else LogValue.zero()

    @classmethod
    def of_log(cls, r: Fraction | int, c: Fraction | int = 1) -> "LogAffine":
        return cls(0, LogValue.of(r, c))

    @classmethod
    def of_const(cls, q: Fraction | int) -> "LogAffine":
        return cls(q)

    @classmethod
    def zero(cls) -> "LogAffine":
        return cls(0)

    def __add__(self, other: "LogAffine") -> "LogAffine":
        return LogAffine(self.const + other.const, self.logs + other.logs)

    def __sub__(self, other: "LogAffine") -> "LogAffine":
        return LogAffine(self.const - other.const, self.logs - other.logs)

    def __neg__(self) -> "LogAffine":
        return LogAffine(-self.const, -self.logs)

    def scaled(self, c: Fraction | int) -> "LogAffine":
        c = Fraction(c)
        return LogAffine(self.const * c, self.logs.scaled(c))

    def is_zero(self) -> bool:
        return self.const == 0 and self.logs.is_zero()

    def sign(self) -> int:
        if not self.logs.terms:
            return (self.const > 0) - (self.const < 0)
        if self.const == 0:
            return self.logs.sign()
        log_sign = self.logs.sign()
        const_sign = 1 if self.const > 0 else -1
        if log_sign == 0:
            return const_sign
        if log_sign == const_sign:
            return const_sign
        return self._interval_sign()

    def _interval_sign(self) -> int:
        from mpmath import iv

        saved = iv.prec
        try:
            prec = 128
            while prec <= 1 << 14:
                iv.prec = prec
                total = iv.mpf(self.const.numerator) / self.const.denominator
                for r, c in self.logs.terms.items():
                    lr = iv.log(iv.mpf(r.numerator) / r.denominator)
                    total += (iv.mpf(c.numerator) / c.denominator) * lr
                if total > 0:
                    return 1
                if total < 0:
                    return -1
                prec *= 2
            raise ValueError("interval refinement failed to separate sign from 0")
        finally:
            iv.prec = saved

    def compare(self, other: "LogAffine") -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        return isinstance(other, LogAffine) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.const, self.logs))

    def to_float(self) -> float:
        return float(self.const) + self.logs.to_float()

    def exp_float(self) -> float:
        return math.exp(self.to_float())

    def __repr__(self):
        return f"LogAffine({self.const} + {self.logs!r})"


class ExpScalar:
    """Scalar mantissa * e**exponent with rational mantissa and exponent.

    Closed under products; magnitude comparisons go through LogAffine so test
    values like e^2 stay exact end to end.
    """

    __slots__ = ("mantissa", "exponent")

    def __init__(self, mantissa: Fraction | int, exponent: Fraction | int = 0):
        self.mantissa = Fraction(mantissa)
        self.exponent = Fraction(exponent)

    @classmethod
    def of(cls, x) -> "ExpScalar":
        if isinstance(x, ExpScalar):
            return x
        return cls(Fraction(x))

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def __abs__(self) -> "ExpScalar":
        return ExpScalar(abs(self.mantissa), self.exponent)

    def __mul__(self, other: "ExpScalar") -> "ExpScalar":
        other = ExpScalar.of(other)
        return ExpScalar(self.mantissa * other.mantissa, self.exponent + other.exponent)

    def __eq__(self, other):
        if not isinstance(other, ExpScalar):
            other = ExpScalar.of(other)
        if self.mantissa == 0 or other.mantissa == 0:
            return self.mantissa == other.mantissa
        if (self.mantissa > 0) != (other.mantissa > 0):
            return False
        return (self.log_abs() - other.log_abs()).is_zero()

    def __hash__(self):
        return hash((self.mantissa, self.exponent))

    def log_abs(self) -> "LogAffine":
        """Exact ln|self|; requires a nonzero value."""
        if self.mantissa == 0:
            raise ValueError("log of zero")
        return LogAffine(self.exponent, LogValue.of(abs(self.mantissa)))

    def abs_compare(self, other: "ExpScalar") -> int:
        """Sign of |self| - |other|, exact."""
        other = ExpScalar.of(other)
        if self.mantissa == 0:
            return 0 if other.mantissa == 0 else -1
        if other.mantissa == 0:
            return 1
        return (self.log_abs() - other.log_abs()).sign()

    def to_float(self) -> float:
        if self.mantissa == 0:
            return 0.0
        return math.copysign(self.log_abs().exp_float(), self.mantissa)

    def __repr__(self):
        if self.exponent == 0:
            return f"ExpScalar({self.mantissa})"
        return f"ExpScalar({self.mantissa}*e^{self.exponent})"


def power_le(value: Fraction, base: Fraction, exponent: Fraction) -> bool:
    """Exact test value <= base**exponent for positive rationals."""
    if value <= 0:
        return True
    return compare_power_product([(value, Fraction(1)), (base, -exponent)]) <= 0


def power_lt(value: Fraction, base: Fraction, exponent: Fraction) -> bool:
    if value <= 0:
        return True
    return compare_power_product([(value, Fraction(1)), (base, -exponent)]) < 0


def sup_norm_vec(v: Sequence[Fraction]) -> Fraction:
    return max((abs(Fraction(x)) for x in v), default=Fraction(0))


def parse_fraction(text: str) -> Fraction:
    """Parse 'num/den', integer, or decimal strings into an exact Fraction."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(text)


def fraction_str(x: Fraction) -> str:
    """Serialize exactly as num/den (den always shown, per output contract)."""
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def continued_fraction_terms(x: Fraction) -> list[int]:
    """Terminating continued fraction expansion of a rational."""
    x = Fraction(x)
    terms = []
    while True:
        a = x.numerator // x.denominator
        terms.append(a)
        frac = x - a
        if frac == 0:
            return terms
        x = 1 / frac


def convergents(x: Fraction) -> list[tuple[int, int]]:
    """All convergents (p, q) of a rational, ending with the exact value.

    Successive convergents are the best rational approximations of the second
    kind, so |q*x - p| decreases strictly along the list and hits 0 at the
    final entry.
    """
    p_prev, q_prev = 1, 0
    p, q = None, None
    out = []
    for a in continued_fraction_terms(x):
        if p is None:
            p, q = a, 1
        else:
            p, q, p_prev, q_prev = a * p + p_prev, a * q + q_prev, p, q
        out.append((p, q))
    return out
