"""Flow action, exact shortest vectors, and growth exponents.

Oracle strategy: the flow action on multivectors is checked against the naive
route (apply the matrix to basis vectors, then wedge); shortest vectors are
checked against scaling laws and brute-force enumeration; growth exponents
against hand-computed continued-fraction facts.
"""

import math
import random
from fractions import Fraction as F
from itertools import product

import pytest

from extremal.exterior_algebra import MultiVector, represent_subgroup, sup_norm, wedge_all
from extremal.lattice_flow import (
    CertificationError,
    FlowSpec,
    LatticeBasis,
    act_flow_unipotent,
    flow_scale_exponent,
    growth_exponent_estimate,
    lattice_points_in_box,
    lll_reduce,
    log_delta_embedded,
    matrix_inverse,
    minkowski_check,
    scaled_embed,
    shortest_vector,
    shortest_vector_norm,
    unipotent_embed,
)


# ---------------------------------------------------------------------------
# embedding and flow bookkeeping
# ---------------------------------------------------------------------------


def test_unipotent_embed_rows():
    b = unipotent_embed([F(1, 3), F(2, 5)])
    assert b.rows == (
        (F(1), F(0), F(0)),
        (F(1, 3), F(1), F(0)),
        (F(2, 5), F(0), F(1)),
    )
    assert b.determinant() == 1


def test_unipotent_lattice_contains_form_values():
    # integer combination q1*row1 + q2*row2 + p*row0 = (y.q + p, q)
    y = [F(3, 7), F(1, 2)]
    b = unipotent_embed(y)
    p, q1, q2 = -2, 3, 5
    v = [p * a + q1 * b1 + q2 * b2 for a, b1, b2 in zip(*b.rows)]
    assert v == [y[0] * q1 + y[1] * q2 + p, F(q1), F(q2)]


def test_flow_spec_unimodular_and_scale_factors():
    spec = FlowSpec(2, (F(3), F(5)))
    assert spec.expansion == 15
    # expanding set {0}: e^t
    assert spec.scale_factor((0,)) == 15
    # {0,1}: e^{t - t_1} = 15/3
    assert spec.scale_factor((0, 1)) == 5
    # {1,2}: e^{-t_1 - t_2}
    assert spec.scale_factor((1, 2)) == F(1, 15)
    assert spec.scale_factor(()) == 1


def test_one_parameter_scale_exponents():
    # equal exponents t_i = t/n: sets with 0 of size j get t*(n+1-j)/n,
    # sets without 0 of size j get -t*j/n
    n, t = 4, F(7)
    tv = [t / n] * n
    for j in range(1, n + 1):
        with_zero = tuple(range(j))  # {0, 1, ..., j-1}
        without = tuple(range(1, j + 1))
        assert flow_scale_exponent(tv, with_zero) == t * (n + 1 - j) / n
        assert flow_scale_exponent(tv, without) == -t * j / n
    spec = FlowSpec.one_parameter(n, F(3))  # e^{t/n} = 3
    assert spec.expansion == 81
    assert spec.scale_factor((0, 1, 2)) == 81 / F(9)


def test_flow_spec_rejects_bad_input():
    with pytest.raises(ValueError):
        FlowSpec(2, (F(3),))
    with pytest.raises(ValueError):
        FlowSpec(2, (F(3), F(-1)))
    with pytest.raises(ValueError):
        FlowSpec(2, (F(3), F(5)), "one-parameter")


# ---------------------------------------------------------------------------
# flow action on multivectors vs matrix-then-wedge oracle
# ---------------------------------------------------------------------------


def _matrix_then_wedge(spec, y, basis_vectors):
    """Oracle: push each basis vector through u_y then g, wedge the images."""
    n = spec.n
    images = []
    for v in basis_vectors:
        # u_y maps e_0 -> e_0 and e_i -> y_i e_0 + e_i
        w = [F(v[0]) + sum(F(y[i - 1]) * v[i] for i in range(1, n + 1))]
        w += [F(v[i]) for i in range(1, n + 1)]
        # g scales coordinate 0 by expansion, coordinate i by 1/scales[i-1]
        w[0] *= spec.expansion
        for i in range(1, n + 1):
            w[i] /= spec.scales[i - 1]
        images.append(w)
    return wedge_all(images)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("n,j", [(2, 1), (2, 2), (3, 2), (3, 3), (4, 2)])
def test_act_flow_matches_matrix_oracle(n, j, seed):
    rng = random.Random(1000 * n + 100 * j + seed)
    y = [F(rng.randint(-5, 5), rng.randint(1, 7)) for _ in range(n)]
    spec = FlowSpec(n, tuple(F(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)))
    vecs = [[rng.randint(-4, 4) for _ in range(n + 1)] for _ in range(j)]
    w = wedge_all(vecs)
    if w.is_zero():
        pytest.skip("degenerate draw")
    assert act_flow_unipotent(spec, y, w) == _matrix_then_wedge(spec, y, vecs)


def test_act_flow_identity_when_scales_one_and_y_zero():
    w = wedge_all([[1, 2, 0], [0, 1, 3]])
    spec = FlowSpec(2, (F(1), F(1)))
    assert act_flow_unipotent(spec, [F(0), F(0)], w) == w


def test_act_flow_is_linear():
    spec = FlowSpec(2, (F(2), F(3)))
    y = [F(1, 2), F(1, 3)]
    a = wedge_all([[1, 0, 2], [0, 1, 1]])
    b = wedge_all([[2, 1, 0], [1, 0, 1]])
    lhs = act_flow_unipotent(spec, y, a + b.scaled(F(3)))
    rhs = act_flow_unipotent(spec, y, a) + act_flow_unipotent(spec, y, b).scaled(F(3))
    assert lhs == rhs


# ---------------------------------------------------------------------------
# exact shortest vectors
# ---------------------------------------------------------------------------


def test_shortest_vector_identity_lattice():
    b = LatticeBasis(((F(1), F(0)), (F(0), F(1))))
    norm, m, v = shortest_vector(b)
    assert norm == 1


def test_shortest_vector_needs_combination():
    # rows are long but their difference is short
    b = LatticeBasis(((F(100), F(1)), (F(100), F(0))))
    norm, m, v = shortest_vector(b)
    assert norm == 1
    assert tuple(abs(x) for x in v) == (F(0), F(1))


def test_shortest_vector_scaling_law():
    rng = random.Random(7)
    for _ in range(10):
        rows = tuple(
            tuple(F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
            for _ in range(3)
        )
        b = LatticeBasis(rows)
        if b.determinant() == 0:
            continue
        d = shortest_vector_norm(b)
        c = F(3, 7)
        assert shortest_vector_norm(b.scaled(c)) == c * d


def test_shortest_vector_brute_force_agreement():
    rng = random.Random(11)
    for _ in range(8):
        rows = tuple(
            tuple(F(rng.randint(-6, 6)) for _ in range(2)) for _ in range(2)
        )
        b = LatticeBasis(rows)
        if b.determinant() == 0:
            continue
        # independent oracle: scan a generous coefficient window
        best = min(
            max(abs(m1 * rows[0][0] + m2 * rows[1][0]), abs(m1 * rows[0][1] + m2 * rows[1][1]))
            for m1, m2 in product(range(-40, 41), repeat=2)
            if (m1, m2) != (0, 0)
        )
        assert shortest_vector_norm(b) == best


def test_shortest_vector_rectangular_rows():
    # rank-2 sublattice of Z^3
    b = LatticeBasis(((F(1), F(1), F(0)), (F(0), F(2), F(0))))
    norm, m, v = shortest_vector(b)
    assert norm == 1
    assert tuple(abs(x) for x in v) in {(F(1), F(1), F(0))}


def test_shortest_vector_certification_budget():
    # any scan visits at least the 3x3 neighborhood of the origin here
    b = LatticeBasis(((F(1), F(0)), (F(0), F(1))))
    with pytest.raises(CertificationError):
        shortest_vector(b, search_bound=2)


def test_matrix_inverse_roundtrip():
    rows = [[F(2), F(1)], [F(1), F(1)]]
    inv = matrix_inverse(rows)
    prod_ = [
        [sum(rows[i][k] * inv[k][j] for k in range(2)) for j in range(2)]
        for i in range(2)
    ]
    assert prod_ == [[1, 0], [0, 1]]


# ---------------------------------------------------------------------------
# flowed embedded lattice: exact scaling
# ---------------------------------------------------------------------------


def test_scaled_embed_matches_flow_on_vectors():
    y = [F(3, 7), F(1, 2)]
    spec = FlowSpec(2, (F(4), F(2)))
    b = scaled_embed(y, spec)
    # each row equals the flow applied to the corresponding embedded generator
    base = unipotent_embed(y)
    for raw, flowed in zip(base.rows, b.rows):
        w = MultiVector.from_vector(raw)
        img = act_flow_unipotent(spec, [F(0), F(0)], w)  # y already baked in
        vec = [img.coeffs.get((i,), F(0)) for i in range(3)]
        assert tuple(vec) == flowed


def test_scaled_embed_delta_log_consistency():
    # delta from exact enumeration agrees with the float log series
    y = [F(3, 7)]
    for r in [F(2), F(5), F(12)]:
        spec = FlowSpec.one_parameter(1, r)
        t = math.log(float(r))
        exact = shortest_vector_norm(scaled_embed(y, spec))
        assert math.isclose(math.log(float(exact)), log_delta_embedded(y, t), abs_tol=1e-9)


# ---------------------------------------------------------------------------
# growth exponents
# ---------------------------------------------------------------------------


def test_growth_exponent_rational_is_one():
    # rational number: lattice develops an exact hit, delta decays like e^{-t}
    est = growth_exponent_estimate(F(3, 7), t_max=40)
    assert est.window == (20, 40)
    assert est.gamma_hat >= 0.9
    assert est.gamma_hat <= 1.0 + 1e-9


def test_growth_exponent_golden_is_near_zero():
    # 40-digit convergent of the golden mean: badly approximable up to huge q
    a, b = 1, 1
    while b < 10**40:
        a, b = a + b, a
    y = F(a, b)
    est = growth_exponent_estimate(y, t_max=30, t_min=10)
    assert est.gamma_hat <= 0.05


def test_growth_exponent_series_shape():
    est = growth_exponent_estimate(F(1, 2), t_max=12, t_min=6)
    assert [t for t, _ in est.series] == list(range(1, 13))
    assert all(t >= 6 for t in est.achieving_times)


def test_log_delta_embedded_two_vars():
    # n=2 exhaustive path at small t vs direct exact enumeration
    y = [F(3, 7), F(1, 2)]
    for r in [F(2), F(3)]:
        spec = FlowSpec.one_parameter(2, r)
        t = spec.t_float()
        exact = shortest_vector_norm(scaled_embed(y, spec))
        assert math.isclose(
            math.log(float(exact)), log_delta_embedded(y, t), abs_tol=1e-9
        )


def test_log_delta_two_vars_budget():
    with pytest.raises(CertificationError):
        log_delta_embedded([F(3, 7), F(1, 2)], 40.0, q_cap=100)


# ---------------------------------------------------------------------------
# reduction and box enumeration
# ---------------------------------------------------------------------------


def test_lll_preserves_lattice_and_shortens():
    rng = random.Random(5)
    for _ in range(10):
        rows = [[rng.randint(-50, 50) for _ in range(3)] for _ in range(3)]
        b = LatticeBasis(tuple(tuple(F(x) for x in r) for r in rows))
        if b.determinant() == 0:
            continue
        red, U = lll_reduce(rows)
        # U is unimodular and maps input to output
        assert abs(_int_det(U)) == 1
        for i in range(3):
            got = [sum(U[i][k] * rows[k][c] for k in range(3)) for c in range(3)]
            assert got == red[i]
        # reduced basis spans the same lattice, so shortest vectors agree
        rb = LatticeBasis(tuple(tuple(F(x) for x in r) for r in red))
        assert shortest_vector_norm(rb) == shortest_vector_norm(b)


def _int_det(m):
    from extremal.lattice_flow import _det

    return _det([[F(x) for x in row] for row in m])


def _exact_gso(rows):
    star: list[list[F]] = []
    mu = []
    for i, r in enumerate(rows):
        v = [F(x) for x in r]
        mrow = []
        for j in range(i):
            nj = sum(a * a for a in star[j])
            mij = F(sum(a * c for a, c in zip(r, star[j]))) / nj
            mrow.append(mij)
            v = [a - mij * c for a, c in zip(v, star[j])]
        mu.append(mrow)
        star.append(v)
    norms = [sum(a * a for a in v) for v in star]
    return mu, norms


@pytest.mark.parametrize("seed,width,rank,lo,hi", [
    (1, 3, 3, -50, 50),
    (2, 4, 3, -9, 9),
    (3, 3, 3, -(10**12), 10**12),
    (4, 5, 4, -200, 200),
    (5, 3, 2, -30, 30),
])
def test_lll_output_is_exactly_reduced(seed, width, rank, lo, hi):
    rng = random.Random(seed)
    for _ in range(8):
        rows = [[rng.randint(lo, hi) for _ in range(width)] for _ in range(rank)]
        if rank == width and _int_det(rows) == 0:
            continue
        mu0, norms0 = _exact_gso(rows)
        if any(n == 0 for n in norms0):
            continue
        red, U = lll_reduce(rows)
        assert abs(_int_det([row[:] for row in U])) == 1 if rank == len(U) else True
        for i in range(rank):
            got = [sum(U[i][k] * rows[k][c] for k in range(rank)) for c in range(width)]
            assert got == red[i]
        mu, norms = _exact_gso(red)
        for i in range(rank):
            for j in range(i):
                assert abs(mu[i][j]) <= F(1, 2)
        for k in range(1, rank):
            assert norms[k] >= (F(3, 4) - mu[k][k - 1] ** 2) * norms[k - 1]


def test_lll_fraction_rows_reduce_exactly():
    rows = [[F(7, 3), F(1, 5)], [F(1, 2), F(11, 4)]]
    red, U = lll_reduce(rows)
    assert all(isinstance(x, F) for r in red for x in r)
    for i in range(2):
        got = [sum(U[i][k] * rows[k][c] for k in range(2)) for c in range(2)]
        assert got == red[i]
    mu, norms = _exact_gso(red)
    assert abs(mu[1][0]) <= F(1, 2)
    assert norms[1] >= (F(3, 4) - mu[1][0] ** 2) * norms[0]


def test_lattice_points_in_box_completeness():
    rows = [[2, 1], [1, 3]]
    box = [F(4), F(4)]
    got = {v for _, v in ((m, tuple(v)) for m, v in lattice_points_in_box(rows, box))}
    expect = set()
    for m1, m2 in product(range(-10, 11), repeat=2):
        v = (2 * m1 + m2, m1 + 3 * m2)
        if abs(v[0]) <= 4 and abs(v[1]) <= 4:
            expect.add(v)
    assert got == expect


def test_lattice_points_box_budget():
    with pytest.raises(CertificationError):
        list(lattice_points_in_box([[1, 0], [0, 1]], [F(10**6), F(10**6)], cap=100))


# ---------------------------------------------------------------------------
# comparability of one-parameter snapshots and the norm/covolume constant
# ---------------------------------------------------------------------------


def test_delta_comparable_between_nearby_times():
    # moving time by s changes every coordinate by at most e^{|s|}; with
    # e^{t/n} on a grid of ratio rho, consecutive deltas differ by <= rho^n
    y = [F(5, 13)]
    rho = F(2)
    deltas = []
    for k in range(1, 8):
        spec = FlowSpec.one_parameter(1, rho**k)
        deltas.append(shortest_vector_norm(scaled_embed(y, spec)))
    for a, b in zip(deltas, deltas[1:]):
        ratio = b / a
        assert F(1, 4) <= ratio <= 4  # rho^{n+1} = 4 envelope


def test_minkowski_ratio_rank_two_example():
    basis_rows = [[1, 1, 0], [0, 2, 0]]
    rep = represent_subgroup(basis_rows)
    b = LatticeBasis(tuple(tuple(F(x) for x in r) for r in basis_rows))
    rm = minkowski_check(rep, b)
    assert rm.delta == 1
    assert rm.rep_norm == 2
    # empirical constant for rank-2 subgroups of Z^3/Z^4 stays modest
    assert rm.ratio <= 1.5


def test_minkowski_ratio_random_rank_two():
    rng = random.Random(23)
    worst = 0.0
    for _ in range(25):
        rows = [[rng.randint(-5, 5) for _ in range(4)] for _ in range(2)]
        try:
            rep = represent_subgroup(rows)
        except ValueError:
            continue
        b = LatticeBasis(tuple(tuple(F(x) for x in r) for r in rows))
        rm = minkowski_check(rep, b)
        worst = max(worst, rm.ratio)
    assert 0 < worst <= 1.5
