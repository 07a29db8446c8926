"""Best approximations, exponent estimates, and contraction-time conversion.

Oracles: a plain Python loop over the ball reproduces the vectorized search;
continued fractions pin down the one-variable frontier; the conversion
formulas are checked on boundary cases where every quantity is forced.
"""

import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal.diophantine import (
    ApproxWitness,
    HomogeneousSet,
    best_approx,
    certificate_exponent,
    certificate_to_witness,
    check_discrete_homogeneous,
    exponent_estimate,
    make_test_number,
    multiplicative_best,
    plus_product,
    shell_minima,
    witness_to_flow_time,
    witness_to_flow_times,
)
from extremal.exact import ExpScalar, LogAffine, LogValue, power_le


def brute_frontier(y_rows, Q, mode="standard"):
    """Independent oracle: nested loops, no numpy, no shortcuts."""
    n = len(y_rows[0])
    entries = []
    for q in _ball(n, Q):
        quality = F(0)
        ps = []
        for row in y_rows:
            dot = sum(a * c for a, c in zip(row, q))
            best_p, best_e = None, None
            for p in range(-int(abs(dot)) - 2, int(abs(dot)) + 3):
                e = abs(dot + p)
                if best_e is None or e < best_e or (e == best_e and (p + dot == e)):
                    if best_e is None or e < best_e:
                        best_p, best_e = p, e
            ps.append(best_p)
            quality = max(quality, best_e)
        size = max(abs(c) for c in q) if mode == "standard" else plus_product(q)
        entries.append((F(size), quality))
    per_size = {}
    for size, quality in entries:
        if size not in per_size or quality < per_size[size]:
            per_size[size] = quality
    out = []
    best = None
    for size in sorted(per_size):
        quality = per_size[size]
        if best is None or quality < best:
            best = quality
            out.append((size, quality))
            if quality == 0:
                break
    return out


def _ball(n, Q):
    import itertools

    for q in itertools.product(range(-Q, Q + 1), repeat=n):
        nz = [c for c in q if c != 0]
        if nz and nz[0] > 0:
            yield q


# ---------------------------------------------------------------------------
# best_approx
# ---------------------------------------------------------------------------


def test_half_frontier_q1():
    out = best_approx([[F(1, 2)]], 1)
    assert len(out) == 1
    w = out[0]
    assert w.q == (1,) and w.quality == F(1, 2) and w.size == 1
    assert w.p == (0,)  # tie at 1/2 resolved toward the even integer


def test_zero_matrix_dependence():
    out = best_approx([[F(0), F(0)]], 5)
    assert out[-1].quality == 0
    assert out[-1].size == 1
    assert sorted(abs(c) for c in out[-1].q) == [0, 1]


def test_rational_dependence_two_vars():
    # y = (r, r^2) with r = 1/3: 3*y_1 - 9*y_2 = 0... use exact dependence q=(1,-3)
    r = F(1, 3)
    out = best_approx([[r, r * r]], 10)
    assert out[-1].quality == 0


@pytest.mark.parametrize("den", [7, 13, 100])
def test_one_var_matches_brute_force(den):
    rng = random.Random(den)
    for _ in range(5):
        y = F(rng.randrange(1, den), den)
        got = [(w.size, w.quality) for w in best_approx([[y]], 30)]
        assert got == brute_frontier([[y]], 30)


@pytest.mark.parametrize("n", [2, 3])
def test_multi_var_matches_brute_force(n):
    rng = random.Random(n)
    for _ in range(4):
        row = [F(rng.randrange(1, 97), 97) for _ in range(n)]
        got = [(w.size, w.quality) for w in best_approx([row], 6)]
        assert got == brute_frontier([row], 6)


def test_matrix_two_rows_matches_brute_force():
    rows = [[F(3, 7), F(1, 5)], [F(2, 9), F(4, 11)]]
    got = [(w.size, w.quality) for w in best_approx(rows, 5)]
    assert got == brute_frontier(rows, 5)


def test_golden_frontier_is_fibonacci():
    y = make_test_number("golden").value
    trail = best_approx([[y]], 1000)
    fib = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987]
    assert [int(w.size) for w in trail] == fib
    # quality within a factor 2 of the golden decay at each step
    phi = (1 + math.sqrt(5)) / 2
    for k, w in enumerate(trail, start=1):
        assert 0.5 * phi ** -(k + 1) <= float(w.quality) <= 2 * phi ** -(k + 1)


def test_big_denominator_falls_back_exactly():
    # denominator far beyond int64: the object-dtype path must stay exact
    y = make_test_number("golden").value  # ~40-digit denominator
    a = best_approx([[y, F(1, 3)]], 4)
    b = brute_frontier([[y, F(1, 3)]], 4)
    assert [(w.size, w.quality) for w in a] == b


def test_frontier_strictly_improves():
    y = [F(3, 7), F(5, 11)]
    trail = best_approx([y], 20)
    for a, b in zip(trail, trail[1:]):
        assert a.size < b.size and b.quality < a.quality


@given(num=st.integers(1, 200), den=st.integers(2, 200))
@settings(max_examples=40, deadline=None)
def test_optimal_p_neighborhood(num, den):
    y = F(num % den, den)
    for w in best_approx([[y]], 12):
        base = y * w.q[0]
        for dp in (-2, -1, 1, 2):
            assert abs(base + w.p[0] + dp) >= w.quality


# ---------------------------------------------------------------------------
# multiplicative mode
# ---------------------------------------------------------------------------


def test_multiplicative_matches_brute_force():
    rng = random.Random(5)
    for _ in range(4):
        row = [F(rng.randrange(1, 53), 53) for _ in range(2)]
        got = [(w.size, w.quality) for w in multiplicative_best(row, 6)]
        assert got == brute_frontier([row], 6, mode="multiplicative")


def test_multiplicative_axis_sizes():
    # y_2 = 0: the dependence witness sits on the second axis, where the
    # plus_product and the sup norm of q coincide
    out = multiplicative_best([F(5, 7), F(0)], 7)
    w = out[-1]
    assert w.quality == 0 and w.q == (0, 1)
    assert w.size == max(abs(c) for c in w.q) == w.shell


def test_standard_witness_inherits_multiplicatively():
    # quality <= shell^-v implies quality <= plus_product^{-v/n}
    y = [F(41, 97), F(58, 89)]
    v = F(5, 2)
    for w in best_approx([y], 40):
        if w.quality != 0 and w.size >= 2 and power_le(w.quality, w.size, -v):
            assert power_le(w.quality, F(plus_product(w.q)), -v / len(y))


# ---------------------------------------------------------------------------
# exponent estimation
# ---------------------------------------------------------------------------


def test_exponent_golden_near_one():
    y = make_test_number("golden").value
    est = exponent_estimate([[y]], [100, 1000, 10000])
    assert 0.9 <= est.omega_hat <= 1.1
    assert not est.rational_dependence


def test_exponent_rational_is_infinite():
    est = exponent_estimate([[F(3, 7)]], [50])
    assert est.rational_dependence
    assert est.omega_hat == math.inf


def test_exponent_liouville_injected():
    tn = make_test_number("liouville", base=10, depth=5)
    est = exponent_estimate([[tn.value]], [100], injected=tn.injected_witnesses)
    assert est.omega_hat >= 4 - 1e-9


def test_exponent_monotone_all_statistic():
    y = make_test_number("sqrt2").value
    est = exponent_estimate([[y]], [10, 50, 200, 1000])
    alls = [row[2] for row in est.per_Q]
    assert alls == sorted(alls)


def test_exponent_dirichlet_floor():
    # the tail statistic never drops below n for one linear form
    rng = random.Random(17)
    for n in (1, 2):
        for _ in range(5):
            y = [F(rng.randrange(1, 9973), 9973) for _ in range(n)]
            est = exponent_estimate([y], [25])
            assert est.omega_hat >= n - 1e-9


def test_exponent_multiplicative_mode_runs():
    y = [make_test_number("golden").value, make_test_number("sqrt2").value]
    est = exponent_estimate([y], [20, 60], mode="multiplicative")
    assert est.mode == "multiplicative"
    assert est.omega_hat >= 2 - 1e-9  # multiplicative floor: Pi_+ <= shell^n


# ---------------------------------------------------------------------------
# homogeneous sets
# ---------------------------------------------------------------------------


def test_lattice_point_set_is_discrete_and_homogeneous():
    E = HomogeneousSet.from_linear_form([F(3, 7)])
    rep = check_discrete_homogeneous(E, 9)
    assert rep.discrete_ok and rep.homogeneous_ok
    assert rep.min_gap > 0 and rep.scalings_checked > 0


def test_lattice_point_set_two_vars():
    E = HomogeneousSet.from_linear_form([F(1, 3), F(2, 5)])
    rep = check_discrete_homogeneous(E, 4, multipliers=(2,))
    assert rep.discrete_ok and rep.homogeneous_ok


# ---------------------------------------------------------------------------
# witness -> contraction time (one parameter)
# ---------------------------------------------------------------------------


def test_flow_time_zero_rate_weights():
    # a=1, b=1/n, v=n forces gamma=0 and t = n*log|z|
    n = 3
    cert = witness_to_flow_time(1, F(1, n), n, F(1, 1000), F(10))
    assert cert.gamma == 0
    assert cert.t == LogAffine(0, LogValue.of(10, n))
    assert cert.ok and not cert.degenerate


def test_flow_time_boundary_exact_power():
    # |z| = e^{b-gamma} makes t = 1; |x| = |z|^{-v} saturates both sides
    a, b, v = F(1), F(2), F(3)
    gamma = (b * v - a) / (v + 1)  # = 1
    z = ExpScalar(1, b - gamma)
    x = ExpScalar(1, -(b - gamma) * v)
    cert = witness_to_flow_time(a, b, v, x, z)
    assert cert.t == LogAffine.of_const(1)
    assert cert.ok
    assert cert.margins[0] == 0.0 and cert.margins[1] == 0.0


def test_flow_time_fibonacci_pair():
    y = make_test_number("golden").value
    trail = best_approx([[y]], 1000)
    w = trail[-1]
    x = w.quality if w.q[0] * y + w.p[0] >= 0 else -w.quality
    cert = witness_to_flow_time(1, 1, 1, x, F(w.q[0]))
    assert cert.gamma == 0
    assert cert.ok and not cert.degenerate
    assert cert.margins[0] > 0  # strict slack: golden is not exactly critical


def test_flow_time_rejects_bad_witness():
    with pytest.raises(ValueError):
        witness_to_flow_time(1, 1, 2, F(1, 2), F(10))  # 1/2 > 10^-2
    with pytest.raises(ValueError):
        witness_to_flow_time(1, 1, 1, F(1, 2), F(0))
    with pytest.raises(ValueError):
        witness_to_flow_time(2, 1, F(3, 2), F(1, 100), F(10))  # v < a/b


def test_flow_time_quality_zero_witness():
    cert = witness_to_flow_time(1, 1, 5, F(0), F(7))
    assert cert.ok and cert.margins[0] == math.inf


def test_certificate_converse_zero_slack():
    # build a certificate from a witness, then recover v' = v exactly
    a, b, v = F(1), F(1), F(2)
    x, z = F(1, 100), F(10)
    cert = witness_to_flow_time(a, b, v, x, z)
    v_prime, ok = certificate_to_witness(a, b, cert.gamma, cert.t, x, z)
    assert ok and v_prime == v
    assert certificate_exponent(a, b, cert.gamma) == v


@given(
    zn=st.integers(2, 10**6),
    ev=st.integers(1, 40),
    a_num=st.integers(1, 4),
    b_num=st.integers(1, 4),
)
@settings(max_examples=60, deadline=None)
def test_flow_time_side_z_always_exact(zn, ev, a_num, b_num):
    a, b = F(a_num), F(b_num)
    v = a / b + F(ev, 7)
    z = F(zn)
    x = F(1) / z ** math.ceil(v + 1)  # comfortably below z^-v
    cert = witness_to_flow_time(a, b, v, x, z)
    assert cert.ok
    assert cert.margins[1] == 0.0  # the z side is an equality by construction


# ---------------------------------------------------------------------------
# witness -> contraction times (multi-parameter)
# ---------------------------------------------------------------------------


def test_flow_times_worked_example():
    # n=2, z=(e^2, 1), v=5 => gamma=1/4, t=4, t_vector=(3, 1)
    cert = witness_to_flow_times(5, ExpScalar(1, -5), (ExpScalar(1, 2), F(1)))
    assert cert.gamma == F(1, 4)
    assert cert.t == LogAffine.of_const(4)
    assert cert.t_vector[0] == LogAffine.of_const(3)
    assert cert.t_vector[1] == LogAffine.of_const(1)
    assert cert.ok and cert.sum_exact and not cert.degenerate


def test_flow_times_degenerate_inside_unit_box():
    cert = witness_to_flow_times(4, F(1, 10), (F(1, 2), F(-2, 3)))
    assert cert.degenerate
    assert cert.sum_exact
    assert cert.t == LogAffine.zero()


def test_flow_times_sum_identity_random_exact_powers():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.choice([2, 3])
        v = n + F(rng.randrange(1, 12), 5)
        zs = [
            ExpScalar(F(rng.randrange(1, 9), rng.randrange(1, 9)), F(rng.randrange(0, 5)))
            for _ in range(n)
        ]
        cert = witness_to_flow_times(v, F(0), zs)
        assert cert.sum_exact
        assert cert.ok


def test_flow_times_rejects_bad_witness():
    with pytest.raises(ValueError):
        witness_to_flow_times(3, F(1), (F(10), F(10)))  # |x|=1 > (100)^{-3/2}
    with pytest.raises(ValueError):
        witness_to_flow_times(2, F(0), (F(2), F(2)))  # v must exceed n


# ---------------------------------------------------------------------------
# test numbers
# ---------------------------------------------------------------------------


def test_golden_truncation_bounds():
    tn = make_test_number("golden", precision=F(1, 10**40))
    assert tn.error_bound <= F(1, 10**40)
    assert tn.sufficient_for(10**12, 2)
    phi_hat = (math.sqrt(5) - 1) / 2
    assert abs(float(tn.value) - phi_hat) < 1e-15


def test_sqrt2_truncation():
    tn = make_test_number("sqrt2", precision=F(1, 10**30))
    assert abs(float(tn.value) - math.sqrt(2)) < 1e-15
    assert tn.error_bound <= F(1, 10**30)


def test_truncation_refusal_reports_precision():
    tn = make_test_number("golden", precision=F(1, 10**6))
    with pytest.raises(ValueError, match="need error below"):
        tn.require(10**4, 2)
    assert tn.require(10, 1) is tn


def test_rational_test_number_exact():
    tn = make_test_number("rational", value=F(3, 7))
    assert tn.value == F(3, 7) and tn.error_bound == 0
    assert tn.sufficient_for(10**9, 10)


def test_liouville_witnesses_self_verify():
    tn = make_test_number("liouville", base=10, depth=5)
    assert tn.error_bound == 0
    assert len(tn.injected_witnesses) == 4
    for w in tn.injected_witnesses:
        assert abs(tn.value * w.q[0] + w.p[0]) == w.quality
        assert w.injected and w.size == w.q[0]
    # decay exponent of the k-th witness approaches (k+1)!/k! - 1 = k
    w = tn.injected_witnesses[-1]
    assert w.slope() == pytest.approx(4.0, abs=1e-12)


def test_random_test_number_deterministic():
    a = make_test_number("random", seed=11, digits=10)
    b = make_test_number("random", seed=11, digits=10)
    assert a.value == b.value
    assert 0 <= a.value < 1


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        make_test_number("cursed")


def test_shell_minima_covers_every_shell_and_matches_brute():
    y = [F(5, 13), F(2, 7)]
    mins = shell_minima([y], 6)
    assert [w.shell for w in mins] == [1, 2, 3, 4, 5, 6]
    for w in mins:
        # every witness is exact and optimal-in-p
        err = abs(sum(a * x for a, x in zip(y, w.q)) + w.p[0])
        assert err == w.quality
    # brute per-shell minima agree
    for s, w in zip(range(1, 7), mins):
        best = None
        for q in _ball(2, s):
            if max(abs(x) for x in q) != s:
                continue
            vals = []
            dot = sum(a * x for a, x in zip(y, q))
            p = -round(dot)
            vals.append(abs(dot + p))
            cand = max(vals)
            best = cand if best is None else min(best, cand)
        assert w.quality == best


def test_shell_minima_one_column_path():
    a = [[F(7, 10)], [F(1, 3)]]  # two rows, one column: shells are |q| = s
    mins = shell_minima(a, 12)
    assert len(mins) == 12
    for s, w in zip(range(1, 13), mins):
        assert w.q == (s,)
        expect = max(
            abs(F(7, 10) * s - round(F(7, 10) * s)),
            abs(F(1, 3) * s - round(F(1, 3) * s)),
        )
        assert w.quality == expect


def test_frontier_is_subset_of_shell_minima():
    y = [F(355, 113)]  # wait-free rational with long CF tail
    front = best_approx([y], 40)
    mins = {w.shell: w.quality for w in shell_minima([y], 40)}
    for w in front:
        assert mins[w.shell] == w.quality
