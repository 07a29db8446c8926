"""Batch experiment driver: every checker and estimator as a subcommand.

Each run is determined by its config (flags or --config JSON); the resolved
config is echoed into the output header.  Exact results serialize as
"num/den".  Exit codes: 0 = completed with the property holding, 2 = an
inequality violation was certified (grep-able in the artifact), 1 = error.
Progress goes to stderr; stdout stays data-clean.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import report
from .diophantine import (
    TestNumber,
    best_approx,
    certificate_to_witness,
    exponent_estimate,
    make_test_number,
    witness_to_flow_time,
)
from .exact import flog, fraction_str, parse_fraction, power_le
from .exterior_algebra import wedge_all
from .extremality_criteria import (
    CriterionParams,
    SubspaceSpec,
    bad_set_measure,
    coefficient_box_min_lhs,
    hyperplane_extremal_evidence,
    line_origin_extremal_evidence,
    sample_wedge_reps,
    scan_extremality_criterion,
    strong_hyperplane_verdict,
)
from .good_functions import build_cantor_bad, demonstrate_not_good, goodness_profile, polynomial
from .lattice_flow import CertificationError, FlowSpec, act_flow_unipotent, growth_exponent_estimate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2

ENV_PRECISION = "EXTREMAL_PRECISION"
DEFAULT_PRECISION_BITS = 140  # ~42 decimal digits

NAMED_TARGETS = ("golden", "sqrt2", "liouville", "random")


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


def _default_precision() -> int:
    return int(os.environ.get(ENV_PRECISION, DEFAULT_PRECISION_BITS))


def _resolve_target(text: str, args, Q: int | None, v_max: Fraction) -> TestNumber:
    """One entry of a vector flag: a named target or an exact fraction."""
    text = text.strip()
    if text in NAMED_TARGETS:
        precision = Fraction(1, 2**args.precision)
        if text in ("golden", "sqrt2"):
            tn = make_test_number(text, precision=precision)
        elif text == "liouville":
            tn = make_test_number("liouville", base=args.base, depth=args.depth)
        else:
            tn = make_test_number("random", seed=args.seed, digits=args.digits)
        if Q is not None and tn.error_bound > 0:
            tn = tn.require(Q, v_max)  # refusal carries the needed bound
        return tn
    return make_test_number("rational", value=parse_fraction(text))


def _resolve_vector(texts: Sequence[str], args, Q: int | None, v_max: Fraction):
    targets = [_resolve_target(t, args, Q, v_max) for t in texts]
    values = [t.value for t in targets]
    injected = [w for t in targets for w in t.injected_witnesses]
    details = [f"{t.kind}({t.detail})" for t in targets]
    return values, injected, details


def _fractions_list(text: str) -> list[Fraction]:
    return [parse_fraction(part) for part in text.split(",") if part.strip()]


def _ints_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _violation_rows(violations) -> list[dict]:
    rows = []
    for v in violations:
        d = v.to_json_dict()
        try:
            lhs_float = float(v.lhs)
        except OverflowError:
            lhs_float = math.inf
        rows.append(
            {
                "w_coeffs": ";".join(d["w_coeffs"]),
                "I": " ".join(str(i) for i in d["I"]),
                "lhs": f"{d['lhs_num']}/{d['lhs_den']}",
                "lhs_float": lhs_float,
                "rhs_base": f"{d['rhs_num']}/{d['rhs_den']}",
                "t": " ".join(d.get("t", [])),
                "injected": d.get("injected", False),
                "note": d.get("note", ""),
            }
        )
    return rows


def _require(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n.lstrip("-").replace("-", "_")) is None]
    if missing:
        raise ValueError(f"missing required option(s): {', '.join(missing)} (flag or config)")


def _finish(args, rows: list[dict], meta: dict, payload: dict, figure=None) -> None:
    meta = {"command": args.command, **meta}
    text = report.render_csv(rows, meta) if args.format == "csv" else report.render_json(payload, meta)
    report.emit(text, args.output)
    if args.plot:
        if not args.output:
            raise ValueError("--plot needs --output: figures land next to the data file")
        if figure is None:
            _progress(f"{args.command}: no figure for this command")
        else:
            path = report.figure_path(args.output)
            figure(path)
            _progress(f"figure written to {path}")


# ---------------------------------------------------------------- commands


def _cmd_exponent(args) -> int:
    schedule = _ints_list(args.Qs) if args.Qs else [args.Q]
    tn = _resolve_target(args.kind if args.kind in NAMED_TARGETS else args.value, args, max(schedule), Fraction(3))
    est = exponent_estimate([[tn.value]], schedule, mode=args.mode, injected=tn.injected_witnesses)
    rows = [
        {
            "size": w.size,
            "shell": w.shell,
            "q": " ".join(str(c) for c in w.q),
            "p": " ".join(str(c) for c in w.p),
            "quality": w.quality,
            "quality_float": float(w.quality),
            "slope": w.slope() if w.quality > 0 and w.size >= 2 else float("inf"),
            "injected": w.injected,
        }
        for w in est.witness_trail
    ]
    meta = {
        "kind": tn.kind,
        "detail": tn.detail,
        "mode": est.mode,
        "cutoff_Q": est.cutoff_Q,
        "omega_hat": est.omega_hat,
        "omega_hat_all": est.omega_hat_all,
        "rational_dependence": est.rational_dependence,
        "seed": args.seed,
        "precision": args.precision,
    }
    payload = {
        "estimate": {
            "omega_hat": est.omega_hat,
            "omega_hat_all": est.omega_hat_all,
            "rational_dependence": est.rational_dependence,
            "per_Q": [[q, t, a] for q, t, a in est.per_Q],
        },
        "witnesses": report.jsonable(rows),
    }

    def figure(path: str) -> None:
        pts = [(float(w.size), float(w.quality)) for w in est.witness_trail if w.quality > 0 and w.size >= 2]
        if not pts:
            return
        xs = [math.log10(s) for s, _ in pts]
        ys = [math.log10(q) for _, q in pts]
        fit = (-est.omega_hat, ys[-1] + est.omega_hat * xs[-1], f"slope -omega_hat = {-est.omega_hat:.3f}")
        report.save_series_figure(
            path, [(xs, ys, "witnesses")], "log10 size", "log10 quality",
            f"approximation quality vs size ({tn.kind})", fit=fit,
        )

    _finish(args, rows, meta, payload, figure)
    return EXIT_OK


def _cmd_flow(args) -> int:
    _require(args, "--y")
    y = _fractions_list(args.y)
    est = growth_exponent_estimate(y, args.t_max, args.t_min, q_cap=args.q_cap)
    rows = [{"t": t, "log_delta": ld} for t, ld in est.series]
    meta = {
        "y": ",".join(fraction_str(v) for v in y),
        "t_max": args.t_max,
        "window": f"{est.window[0]}..{est.window[1]}",
        "gamma_hat": est.gamma_hat,
        "achieving_times": " ".join(str(t) for t in est.achieving_times),
    }
    payload = {"gamma_hat": est.gamma_hat, "achieving_times": est.achieving_times, "series": rows}

    def figure(path: str) -> None:
        xs = [float(t) for t, _ in est.series]
        ys = [ld for _, ld in est.series]
        report.save_series_figure(
            path, [(xs, ys, "log delta")], "t", "log shortest-vector norm",
            "flowed lattice: cusp excursion depth",
            fit=(-est.gamma_hat, 0.0, f"slope -gamma_hat = {-est.gamma_hat:.3f}"),
        )

    _finish(args, rows, meta, payload, figure)
    return EXIT_OK


def _load_matrix(path: str | None, rows: int, cols: int) -> tuple[tuple[Fraction, ...], ...]:
    if path is None:
        return tuple((Fraction(0),) * cols for _ in range(rows))
    data = json.loads(Path(path).read_text())
    return tuple(tuple(parse_fraction(str(x)) for x in row) for row in data)


def _cmd_criterion(args) -> int:
    _require(args, "--n", "--s", "--j")
    A = _load_matrix(args.A, args.s + 1, args.n - args.s)
    spec = SubspaceSpec(args.n, args.s, A)
    params = CriterionParams(
        v=parse_fraction(args.v), j=args.j, N=parse_fraction(args.N), coeff_bound=args.bound
    )
    reps = None
    if args.samples:
        reps = sample_wedge_reps(args.n + 1, args.j, args.bound, args.samples, seed=args.seed)
    rep = scan_extremality_criterion(spec, params, reps=reps)
    rows = _violation_rows(rep.violations)
    meta = {
        "criterion": rep.criterion,
        "n": args.n,
        "s": args.s,
        "j": args.j,
        "v": args.v,
        "bound": args.bound,
        "verdict": rep.verdict,
        "violations": len(rep.violations),
        "seed": args.seed,
    }
    _finish(args, rows, meta, rep.to_json_dict())
    return EXIT_VIOLATION if rep.violations else EXIT_OK


def _evidence_command(args, builder, flag: str) -> int:
    v = parse_fraction(args.v)
    values, injected, details = _resolve_vector(getattr(args, flag).split(","), args, args.Q, v)
    rep = builder(values, args.Q, v, injected=injected)
    rows = _violation_rows(rep.violations)
    meta = {
        flag: ",".join(details),
        "Q": args.Q,
        "v": args.v,
        "verdict": rep.verdict,
        "violations": len(rep.violations),
        "precision": args.precision,
    }
    _finish(args, rows, meta, rep.to_json_dict())
    return EXIT_VIOLATION if rep.violations else EXIT_OK


def _cmd_hyperplane(args) -> int:
    _require(args, "--a")
    return _evidence_command(args, hyperplane_extremal_evidence, "a")


def _cmd_line(args) -> int:
    _require(args, "--b")
    return _evidence_command(args, line_origin_extremal_evidence, "b")


def _cmd_measure48(args) -> int:
    v = parse_fraction(args.v)
    Qs = _ints_list(args.Qs)
    values, _, details = _resolve_vector(args.b.split(","), args, max(Qs), v)
    rows = []
    estimates = []
    for Q in Qs:
        _progress(f"measure48: Q={Q} ({args.samples} samples)")
        est = bad_set_measure(values, v, Q, args.samples, seed=args.seed, workers=args.workers)
        estimates.append(est)
        rows.append(
            {
                "Q": Q,
                "samples": est.samples,
                "members": est.members,
                "measure_hat": est.measure_hat,
                "ci_halfwidth": est.halfwidth,
            }
        )
    slope = float("nan")
    if len(Qs) >= 2:
        xs = np.log([float(q) for q in Qs])
        ys = np.log([max(e.measure_hat, 1e-4) for e in estimates])
        slope = float(np.polyfit(xs, ys, 1)[0])
    meta = {
        "b": ",".join(details),
        "v": args.v,
        "Qs": args.Qs,
        "samples": args.samples,
        "seed": args.seed,
        "workers": args.workers,
        "loglog_slope": slope,
        "predicted_exponent": float((len(values) - v) / 2),
        "precision": args.precision,
    }
    payload = {"rows": report.jsonable(rows), "loglog_slope": slope}

    def figure(path: str) -> None:
        xs = [float(q) for q in Qs]
        ys = [max(e.measure_hat, 1e-6) for e in estimates]
        report.save_series_figure(
            path, [(xs, ys, f"measure (slope {slope:.2f})")], "Q", "sampled measure",
            "approximable-set measure vs cutoff", logx=True, logy=True,
        )

    _finish(args, rows, meta, payload, figure)
    return EXIT_OK


def _cmd_strong(args) -> int:
    _require(args, "--a")
    Qs = _ints_list(args.Qs)
    values, injected, details = _resolve_vector(args.a.split(","), args, max(Qs), Fraction(len(args.a.split(",")) + 2))
    margin = float(args.margin) if args.margin is not None else None
    sv = strong_hyperplane_verdict(values, Q_schedule=Qs, injected=injected, margin=margin)
    rows = [
        {"Q": q, "omega_hat_tail": t, "omega_hat_all": a}
        for q, t, a in sv.estimate.per_Q
    ]
    meta = {
        "a": ",".join(details),
        "Qs": args.Qs,
        "support_k": sv.k,
        "threshold": sv.threshold,
        "extremality_threshold": sv.extremality_threshold,
        "omega_hat": sv.omega_hat,
        "margin": sv.margin,
        "verdict": sv.verdict,
        "precision": args.precision,
    }
    _finish(args, rows, meta, sv.to_json_dict())
    return EXIT_VIOLATION if sv.verdict == "violated" else EXIT_OK


def _goodness_function(args):
    if args.cantor_levels is not None:
        return build_cantor_bad(args.cantor_levels), f"cantor_bad(levels={args.cantor_levels})"
    if args.poly_coeffs:
        coeffs = _fractions_list(args.poly_coeffs)
        dom = _fractions_list(args.domain)
        return polynomial(coeffs, domain=(dom[0], dom[1])), f"polynomial({args.poly_coeffs})"
    l = args.poly_degree
    dom = _fractions_list(args.domain)
    return polynomial([0] * l + [1], domain=(dom[0], dom[1])), f"x^{l}"


def _cmd_goodness(args) -> int:
    f, desc = _goodness_function(args)
    if args.not_good_at is not None:
        x0 = parse_fraction(args.not_good_at)
        alphas = _fractions_list(args.alphas)
        radii = _fractions_list(args.radii)
        table = demonstrate_not_good(f, x0, alphas, radii)
        rows = [r.to_row() for r in table.rows]
        verdicts = {fraction_str(a): table.is_divergent(a) for a in alphas}
        meta = {"function": desc, "x0": args.not_good_at, "mode": "divergence"}
        for key, val in sorted(verdicts.items()):
            meta[f"divergent[{key}]"] = val
        payload = table.to_json_dict()

        def figure(path: str) -> None:
            series = []
            for a in alphas:
                picked = table.rows_for(a)
                xs = [-math.log2(float(r.radius)) for r in picked]
                ys = [r.log10_ratio_lo for r in picked]
                series.append((xs, ys, f"alpha={fraction_str(a)}"))
            report.save_series_figure(
                path, series, "-log2 radius", "log10 certified ratio lower bound",
                f"sublevel ratio growth at x0={args.not_good_at}",
            )

        _finish(args, rows, meta, payload, figure)
        return EXIT_VIOLATION if any(verdicts.values()) else EXIT_OK

    alpha = parse_fraction(args.alpha)
    eps_grid = _fractions_list(args.eps)
    balls = []
    for part in args.balls.split(","):
        center, radius = part.split(":")
        balls.append((parse_fraction(center), parse_fraction(radius)))
    prof = goodness_profile(f, balls, alpha, eps_grid)
    rows = []
    for rec in prof.records:
        row = rec.to_row()
        row["ratio_float"] = float(rec.ratio_hi)
        rows.append(row)
    meta = {"function": desc, "alpha": args.alpha, "C_hat": prof.C_hat, "mode": "profile"}
    payload = prof.to_json_dict()

    def figure(path: str) -> None:
        series = []
        for center, radius in balls:
            recs = [r for r in prof.records if r.center == center and r.radius == radius]
            xs = [float(r.eps) for r in recs]
            ys = [float(r.ratio_hi) for r in recs]
            series.append((xs, ys, f"ball {fraction_str(center)}+-{fraction_str(radius)}"))
        report.save_series_figure(
            path, series, "eps", "measure / (eps^alpha |B|)",
            f"goodness ratios for {desc}", logx=True,
        )

    _finish(args, rows, meta, payload, figure)
    return EXIT_OK


def _random_fraction(rng: random.Random, num: int = 30, den: int = 12) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def _lemma_suites(n_values, per_case, bound, column_bound, seed, progress=True):
    """Norm-floor sweeps: random any-shape A at full rank, then column A at every rank."""
    rng = random.Random(seed)
    rows = []
    for n in n_values:
        for s in range(1, n):
            worst = None
            for _ in range(per_case):
                A = tuple(
                    tuple(_random_fraction(rng) for _ in range(n - s)) for _ in range(s + 1)
                )
                got, _ = coefficient_box_min_lhs(SubspaceSpec(n, s, A), n, bound)
                worst = got if worst is None or got < worst else worst
            rows.append(
                {
                    "suite": "codim-one-floor",
                    "n": n,
                    "s": s,
                    "j": n,
                    "bound": bound,
                    "cases": per_case,
                    "min_lhs": worst,
                    "ok": worst >= 1,
                }
            )
            if progress:
                _progress(f"lemmas: codim-one-floor n={n} s={s} min={worst}")
    for n in n_values:
        for j in range(2, n + 1):
            b = column_bound if j == n or n <= 3 else 1  # middle ranks grow fast
            worst = None
            for _ in range(per_case):
                A = tuple((_random_fraction(rng),) for _ in range(n))
                got, _ = coefficient_box_min_lhs(SubspaceSpec(n, n - 1, A), j, b)
                worst = got if worst is None or got < worst else worst
            rows.append(
                {
                    "suite": "column-rank-floor",
                    "n": n,
                    "s": n - 1,
                    "j": j,
                    "bound": b,
                    "cases": per_case,
                    "min_lhs": worst,
                    "ok": worst >= 1,
                }
            )
            if progress:
                _progress(f"lemmas: column-rank-floor n={n} j={j} min={worst}")
    return rows


def _cmd_lemmas(args) -> int:
    n_values = _ints_list(args.n_values)
    rows = _lemma_suites(n_values, args.per_case, args.bound, args.column_bound, args.seed)
    bad = [r for r in rows if not r["ok"]]
    meta = {
        "n_values": args.n_values,
        "per_case": args.per_case,
        "bound": args.bound,
        "column_bound": args.column_bound,
        "seed": args.seed,
        "verdict": "violated" if bad else "holds-at-scale",
        "violations": len(bad),
    }
    _finish(args, rows, meta, {"rows": report.jsonable(rows)})
    return EXIT_VIOLATION if bad else EXIT_OK


def _matrix_then_wedge(spec: FlowSpec, y, vectors):
    """Independent route: push each basis vector through the affine shear
    and the diagonal scaling, then wedge the images."""
    n = spec.n
    images = []
    for v in vectors:
        w = [Fraction(v[0]) + sum(Fraction(y[i - 1]) * v[i] for i in range(1, n + 1))]
        w += [Fraction(v[i]) for i in range(1, n + 1)]
        w[0] *= spec.expansion
        for i in range(1, n + 1):
            w[i] /= spec.scales[i - 1]
        images.append(w)
    return wedge_all(images)


def _selftest_flow_action(rng: random.Random, cases: int) -> int:
    done = 0
    while done < cases:
        n = rng.randint(2, 4)
        j = rng.randint(1, n)
        y = [_random_fraction(rng, 5, 7) for _ in range(n)]
        spec = FlowSpec(n, tuple(Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)))
        vecs = [[rng.randint(-4, 4) for _ in range(n + 1)] for _ in range(j)]
        w = wedge_all(vecs)
        if w.is_zero():
            continue
        if act_flow_unipotent(spec, y, w) != _matrix_then_wedge(spec, y, vecs):
            raise AssertionError(f"flow action mismatch at n={n}, j={j}, y={y}")
        done += 1
    return done


def _selftest_round_trip(rng: random.Random, cases: int) -> int:
    done = 0
    v = Fraction(3, 2)
    for _ in range(cases):
        y = Fraction(rng.randint(1, 400), rng.randint(401, 997))
        for w in best_approx([[y]], 30):
            if w.quality == 0 or w.size < 2:
                continue
            if not power_le(w.quality, Fraction(w.size), -v):
                continue
            cert = witness_to_flow_time(1, 1, v, w.quality, w.size)
            if not cert.ok:
                raise AssertionError(f"forward certificate failed for y={y}, q={w.q}")
            v_back, ok = certificate_to_witness(1, 1, cert.gamma, cert.t, w.quality, w.size)
            if not ok or v_back != v:
                raise AssertionError(f"converse failed for y={y}, q={w.q}")
            done += 1
    return done


def _selftest_floor(suite: str, seed: int, per_case: int) -> str:
    rows = [r for r in _lemma_suites([2, 3], per_case, 3, 2, seed, progress=False) if r["suite"] == suite]
    bad = [r for r in rows if not r["ok"]]
    if bad:
        raise AssertionError(f"norm floor below 1 at n={bad[0]['n']}, s={bad[0]['s']}, j={bad[0]['j']}")
    return f"{len(rows)} sweeps ok"


def _cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    failures = 0
    total = 0

    def run(name: str, fn) -> None:
        nonlocal failures, total
        total += 1
        t0 = time.time()
        try:
            detail = fn()
            print(f"PASS {name} ({detail}, {time.time() - t0:.1f}s)")
        except Exception as exc:  # fatal per contract
            failures += 1
            print(f"FAIL {name}: {exc}")

    run("codim-one-norm-floor", lambda: _selftest_floor("codim-one-floor", args.seed, 8))
    run("column-rank-floor", lambda: _selftest_floor("column-rank-floor", args.seed + 1, 4))
    run("flow-action-vs-matrix-wedge", lambda: f"{_selftest_flow_action(rng, 60)} instances")
    run("witness-time-round-trip", lambda: f"{_selftest_round_trip(rng, 25)} witnesses")
    print(f"{total - failures}/{total} suites passed")
    return EXIT_ERROR if failures else EXIT_OK


# ---------------------------------------------------------------- parser


def _build_parser() -> tuple[argparse.ArgumentParser, argparse._SubParsersAction]:
    parser = argparse.ArgumentParser(
        prog="extremal",
        description="Exact checkers and seeded estimators for approximation exponents, "
        "lattice flows, and sublevel goodness.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw")
    common.add_argument("--output", help="artifact path (stdout when omitted)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument(
        "--precision",
        type=int,
        default=_default_precision(),
        help=f"bits for named-target truncation (default {DEFAULT_PRECISION_BITS}, env {ENV_PRECISION})",
    )
    common.add_argument("--config", help="JSON config file; explicit flags override it")
    common.add_argument("--workers", type=int, default=1, help="internal parallelism (results independent of N)")
    common.add_argument("--plot", action="store_true", help="also render a figure next to --output")
    common.add_argument("--base", type=int, default=10, help="base for the liouville target")
    common.add_argument("--depth", type=int, default=4, help="truncation depth for the liouville target")
    common.add_argument("--digits", type=int, default=12, help="digits for the random target")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponent", parents=[common], help="approximation exponent of a target number")
    p.add_argument("--kind", default="golden", help=f"one of {NAMED_TARGETS} or 'rational'")
    p.add_argument("--value", default="0/1", help="exact value when --kind rational")
    p.add_argument("--Q", type=int, default=10000, help="single search cutoff")
    p.add_argument("--Qs", help="comma-separated cutoff schedule (overrides --Q)")
    p.add_argument("--mode", choices=("standard", "multiplicative"), default="standard")
    p.set_defaults(fn=_cmd_exponent)

    p = sub.add_parser("flow", parents=[common], help="cusp excursion depth along the diagonal flow")
    p.add_argument("--y", help="comma-separated rational coordinates")
    p.add_argument("--t-max", type=int, default=12)
    p.add_argument("--t-min", type=int, default=None)
    p.add_argument("--q-cap", type=int, default=20000)
    p.set_defaults(fn=_cmd_flow)

    p = sub.add_parser("criterion", parents=[common], help="norm-floor scan over rank-j subgroup representatives")
    p.add_argument("--n", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--v", default="1", help="scan exponent (rational)")
    p.add_argument("--N", default="1", help="norm scale (rational)")
    p.add_argument("--bound", type=int, default=2, help="basis coefficient box bound")
    p.add_argument("--A", help="JSON file with the (s+1) x (n-s) parameter matrix (fraction strings)")
    p.add_argument("--samples", type=int, default=0, help="sample this many representatives instead of enumerating")
    p.set_defaults(fn=_cmd_criterion)

    p = sub.add_parser("hyperplane", parents=[common], help="extremality evidence for an affine hyperplane")
    p.add_argument("--a", help="comma list: fractions or named targets (golden|sqrt2|liouville|random)")
    p.add_argument("--Q", type=int, default=1000)
    p.add_argument("--v", default="7/2", help="exponent to scan at (needs v > n)")
    p.set_defaults(fn=_cmd_hyperplane)

    p = sub.add_parser("line", parents=[common], help="extremality evidence for a line through the origin")
    p.add_argument("--b", help="comma list of slopes: fractions or named targets")
    p.add_argument("--Q", type=int, default=1000)
    p.add_argument("--v", default="5/2", help="exponent to scan at (needs v > n)")
    p.set_defaults(fn=_cmd_line)

    p = sub.add_parser("measure48", parents=[common], help="Monte-Carlo measure of the v-approximable set")
    p.add_argument("--b", default="sqrt2", help="comma list of line slopes")
    p.add_argument("--v", default="3")
    p.add_argument("--Qs", default="16,64,256,1024")
    p.add_argument("--samples", type=int, default=100000)
    p.set_defaults(fn=_cmd_measure48)

    p = sub.add_parser("strong", parents=[common], help="strong-extremality verdict via the support count")
    p.add_argument("--a", help="comma list: fractions or named targets")
    p.add_argument("--Qs", default="32,100,316,1000")
    p.add_argument("--margin", default=None, help="slope margin override (float)")
    p.set_defaults(fn=_cmd_strong)

    p = sub.add_parser("goodness", parents=[common], help="sublevel goodness profile or divergence demo")
    p.add_argument("--poly-degree", type=int, default=2, help="use f(x) = x^l")
    p.add_argument("--poly-coeffs", help="comma fractions, low degree first (overrides --poly-degree)")
    p.add_argument("--cantor-levels", type=int, default=None, help="use the flat-bump Cantor sum instead")
    p.add_argument("--domain", default="-1,1")
    p.add_argument("--alpha", default="1/2", help="profile mode: goodness exponent")
    p.add_argument("--eps", default="1/4,1/16,1/64", help="profile mode: threshold grid")
    p.add_argument("--balls", default="0:1/2", help="profile mode: comma list of center:radius")
    p.add_argument("--not-good-at", default=None, help="divergence mode: the point x0")
    p.add_argument("--alphas", default="1/4,1/2", help="divergence mode: alpha list")
    p.add_argument("--radii", default="1/32,1/64,1/128,1/256,1/512", help="divergence mode: ball radii")
    p.set_defaults(fn=_cmd_goodness)

    p = sub.add_parser("lemmas", parents=[common], help="norm-floor suites over random parameter matrices")
    p.add_argument("--n-values", default="2,3,4")
    p.add_argument("--per-case", type=int, default=20)
    p.add_argument("--bound", type=int, default=5)
    p.add_argument("--column-bound", type=int, default=4)
    p.set_defaults(fn=_cmd_lemmas)

    p = sub.add_parser("selftest", parents=[common], help="fast oracle suites; nonzero exit on any failure")
    p.set_defaults(fn=_cmd_selftest)

    return parser, sub


_CONFIG_KEYS = {"command", "parameters", "seed", "output", "format", "precision", "workers"}


def _apply_config(argv: list[str], parser, sub) -> list[str]:
    """Merge a --config JSON file into subparser defaults; flags still win."""
    if "--config" not in argv:
        return argv
    path = argv[argv.index("--config") + 1]
    cfg = json.loads(Path(path).read_text())
    unknown = set(cfg) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    command = cfg.get("command")
    if command is None:
        raise ValueError("config needs a 'command' key")
    if command not in sub.choices:
        raise ValueError(f"unknown command {command!r} in config")
    if not argv or argv[0].startswith("-"):
        argv = [command] + argv
    elif argv[0] != command:
        raise ValueError(f"config command {command!r} conflicts with CLI command {argv[0]!r}")
    defaults = {}
    for key in ("seed", "output", "format", "precision", "workers"):
        if key in cfg:
            defaults[key] = cfg[key]
    for key, value in cfg.get("parameters", {}).items():
        defaults[key.replace("-", "_")] = value
    sub.choices[command].set_defaults(**defaults)
    return argv


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, sub = _build_parser()
    try:
        argv = _apply_config(argv, parser, sub)
        args = parser.parse_args(argv)
        return args.fn(args)
    except (ValueError, CertificationError, OSError, json.JSONDecodeError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
