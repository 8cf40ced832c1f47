"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from submajor import hermat
from submajor import hypotest as H
from submajor.asymptotics import (
    asymptotic_geq,
    power_universal_exponent,
    relative_margin,
    strong_converse_exponent,
)
from submajor.boxes import Box, box_add, box_mul, box_pow, power_universal, scalar_box, unit_box
from submajor.monotones import (
    MonotoneIndex,
    default_alpha_grid,
    log_sandwiched,
    pinched_bounds,
    relative_entropy,
    sandwiched_f,
)
from submajor.sampling import (
    random_box,
    random_channel,
    random_classical_box,
    random_density,
    random_psd,
    random_test,
)
from submajor.submaj import (
    DEFAULT_TOL,
    check_submajorization,
    classical_submaj_lp,
    constraint_margins,
    upgrade_map,
    witness_margin,
)


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def f(B, i, a):
    return sandwiched_f(B, MonotoneIndex(i, a)).value


def test_criterion_01_classical_oracle_equivalence():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    compared = disagreements = 0
    decided = {True: 0, False: 0}
    for _ in range(200):
        m = int(rng.integers(1, 4))
        A = random_classical_box(rng, m, int(rng.integers(2, 5)))
        B = random_classical_box(rng, m, int(rng.integers(2, 5)))
        sdp, lp = check_submajorization(A, B), classical_submaj_lp(A, B)
        if abs(sdp.slack) > 1e-6 and abs(lp.slack) > 1e-6:
            compared += 1
            disagreements += sdp.feasible != lp.feasible
            decided[sdp.feasible] += 1
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and elapsed < 120 and compared > 150
    report(
        1,
        ok,
        f"{compared}/200 decisive, {disagreements} disagreements, "
        f"{decided[True]} feasible / {decided[False]} infeasible, {elapsed:.1f}s",
    )


def test_criterion_02_monotone_laws_and_data_processing():
    rng = np.random.default_rng(2)
    alphas = np.append(default_alpha_grid()[0:95:5], np.inf)
    assert len(alphas) == 20
    worst_law = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 3))
        A = random_box(rng, m, int(rng.integers(1, 4)), normalized=bool(rng.integers(2)))
        B = random_box(rng, m, int(rng.integers(1, 4)), normalized=bool(rng.integers(2)))
        P, S = box_mul(A, B), box_add(A, B)
        for i in range(1, m + 1):
            la, lb = log_sandwiched(A, i, alphas), log_sandwiched(B, i, alphas)
            lp, ls = log_sandwiched(P, i, alphas), log_sandwiched(S, i, alphas)
            fa, fb, fs = np.exp2(la), np.exp2(lb), np.exp2(ls)
            mult = np.abs(np.expm1((lp - la - lb) * math.log(2)))
            expect = np.where(np.isinf(alphas), np.maximum(fa, fb), fa + fb)
            add = np.abs(fs - expect) / expect
            worst_law = max(worst_law, mult.max(), add.max())
    worst_dp = -np.inf
    for k in range(50):
        m = int(rng.integers(1, 3))
        d_in, d_out = int(rng.integers(2, 4)), int(rng.integers(1, 4))
        A = random_box(rng, m, d_in)
        ch = random_channel(rng, d_in, d_out, trace_preserving=k % 2 == 0)
        out = Box(tuple(ch.apply(r) for r in A.rhos), ch.apply(A.sigma))
        for i in range(1, m + 1):
            fa = np.exp2(log_sandwiched(A, i, alphas))
            fo = np.exp2(log_sandwiched(out, i, alphas))
            worst_dp = max(worst_dp, float(np.max((fo - fa) / np.maximum(fa, 1.0))))
    ok = worst_law <= 1e-9 and worst_dp <= 1e-9
    report(2, ok, f"max relative law error {worst_law:.2e}, max data-processing excess {worst_dp:.2e}")


def _candidate_pair(rng):
    m = int(rng.integers(1, 3))
    d = 2
    A = random_box(rng, m, d)
    rhos = tuple(rng.uniform(0.3, 1.0) * random_density(rng, d) for _ in range(m))
    sigma = rng.uniform(0.6, 1.4) * random_density(rng, d) + 0.02 * np.eye(d)
    return A, Box(rhos, sigma)


def test_criterion_03_single_shot_implies_monotones():
    rng = np.random.default_rng(3)
    alphas = default_alpha_grid()
    found = tried = 0
    worst = np.inf
    while found < 50 and tried < 2000:
        tried += 1
        A, B = _candidate_pair(rng)
        if not check_submajorization(A, B).feasible:
            continue
        found += 1
        for i in range(1, A.m + 1):
            marg = relative_margin(log_sandwiched(A, i, alphas), log_sandwiched(B, i, alphas))
            worst = min(worst, float(marg.min()))
    ok = found == 50 and worst >= -1e-7
    report(3, ok, f"{found} feasible pairs from {tried} samples, worst relative margin {worst:.2e}")


def test_criterion_04_pinched_bounds():
    rng = np.random.default_rng(4)
    violations = non_shrinking = 0
    for _ in range(20):
        B = random_box(rng, 1, 2)
        for a in (1.5, 2.0, 3.0):
            exact = f(B, 1, a)
            ratios = []
            for n in (1, 2, 3):
                lo, hi = pinched_bounds(B, 1, a, n)
                violations += not (lo - 1e-8 <= exact <= hi + 1e-8)
                ratios.append(hi / lo)
            non_shrinking += not (ratios[0] > ratios[1] > ratios[2])
    ok = violations == 0 and non_shrinking == 0
    report(4, ok, f"{violations} bracket violations, {non_shrinking} non-shrinking width sequences over 60 cases")


def test_criterion_05_strong_converse_closed_forms():
    rng = np.random.default_rng(5)
    pure = Box((np.diag([1.0, 0.0]),), np.eye(2) / 2)
    err_pure = max(abs(strong_converse_exponent(pure, r).value - max(0.0, r - 1.0)) for r in (0.5, 1.0, 1.5, 2.0))
    sigma = random_density(rng, 3)
    same = Box((sigma, sigma), sigma)
    err_same = max(abs(strong_converse_exponent(same, r).value - r) for r in (0.5, 1.0, 1.5, 2.0))
    err_zero = 0.0
    for _ in range(5):
        A = random_box(rng, 2, 2)
        d_min = min(relative_entropy(r, A.sigma) for r in A.rhos)
        for frac in (0.0, 0.5, 0.99):
            err_zero = max(err_zero, abs(strong_converse_exponent(A, frac * d_min).value))
    ok = err_pure <= 1e-4 and err_same <= 1e-4 and err_zero <= 1e-6
    report(5, ok, f"pure-state error {err_pure:.1e}, identical-state error {err_same:.1e}, below-D1 value {err_zero:.1e}")


def _near_box(rng):
    """Normalized qubit box whose states are close to sigma, so R*(r) > 0 for r in {0.5, 1}."""
    m = int(rng.integers(1, 3))
    sigma = 0.5 * random_density(rng, 2) + 0.25 * np.eye(2)
    rhos = tuple(0.6 * sigma + 0.4 * random_density(rng, 2) for _ in range(m))
    return Box(rhos, sigma)


def _flip_point(A, r, hi):
    lo = 0.0
    if asymptotic_geq(A, scalar_box([1.0] * A.m, 2.0 ** -r)).holds:
        return 0.0
    while hi - lo > 1e-5:
        mid = (lo + hi) / 2
        target = scalar_box([2.0 ** -mid] * A.m, 2.0 ** -r)
        if asymptotic_geq(A, target).holds:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def test_criterion_06_phase_transition():
    rng = np.random.default_rng(6)
    worst = 0.0
    positive = 0
    for _ in range(10):
        A = _near_box(rng)
        for r in (0.5, 1.0):
            Rstar = strong_converse_exponent(A, r).value
            positive += Rstar > 0
            worst = max(worst, abs(_flip_point(A, r, r + 1.0) - Rstar))
    ok = worst <= 2e-3
    report(6, ok, f"max |flip point - R*(r)| = {worst:.2e} over 20 cases ({positive} with R* > 0)")


def test_criterion_07_test_map_dictionary():
    rng = np.random.default_rng(7)
    worst_round = 0.0
    infeasible = 0
    worst_witness = np.inf
    for _ in range(50):
        m, d = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        B = random_box(rng, m, d)
        t = H.Test(random_test(rng, d))
        choi = H.test_to_map(t)
        worst_round = max(worst_round, float(np.abs(H.map_to_test(choi).Pi - t.Pi).max()))
        _, sig = H.type1_errors(B, t)
        target = H.scalar_target(sig, H.type2_error(B, t), m)
        worst_witness = min(worst_witness, witness_margin(choi, B, target))
        infeasible += not check_submajorization(B, target).feasible
    ok = worst_round <= 1e-10 and infeasible == 0 and worst_witness >= -1e-10
    report(
        7,
        ok,
        f"round-trip error {worst_round:.1e}, witness margin {worst_witness:.1e}, {infeasible} infeasible targets",
    )


def test_criterion_08_povm_and_standard_box_powers():
    rng = np.random.default_rng(8)
    mismatches = checked = marginal = feasible = 0
    for _ in range(30):
        B = random_box(rng, 2, 2)
        spec = H.DiscriminationSpec(rng.uniform(0, 1, 2), rng.uniform(0.05, 1, 2))
        povm = H.discrimination_feasible(B, spec)
        chan = check_submajorization(B, H.standard_box(spec))
        if min(abs(povm.slack), abs(chan.slack)) < DEFAULT_TOL:
            marginal += 1
            continue
        checked += 1
        feasible += povm.feasible
        mismatches += povm.feasible != chan.feasible
    lemma_fail = 0
    for n in (2, 3):
        for _ in range(3):
            spec = H.DiscriminationSpec(rng.uniform(0.05, 1, 2), rng.uniform(0.05, 1, 2))
            power = box_pow(H.standard_box(spec), n)
            std = H.std_box_power(spec, n)
            lemma_fail += not check_submajorization(power, std).feasible
            lemma_fail += not check_submajorization(std, power).feasible
    ok = mismatches == 0 and lemma_fail == 0
    report(
        8,
        ok,
        f"{checked} decisive specs ({feasible} feasible), {mismatches} mismatches, {marginal} marginal; "
        f"{lemma_fail} failed lemma directions of 12",
    )


def _upgrade_instance(rng, equal_traces):
    d = int(rng.integers(2, 4))
    m = int(rng.integers(1, 3))
    A = random_box(rng, m, d)
    ch = random_channel(rng, d, d, trace_preserving=False)
    Ts = ch.apply(A.sigma)
    deficit = hermat.trace(A.sigma) - hermat.trace(Ts)
    P = random_psd(rng, d)
    P = P / hermat.trace(P) * deficit * (1.0 if equal_traces else rng.uniform(0.2, 0.9))
    return A, Box(tuple(0.9 * ch.apply(r) for r in A.rhos), Ts + P)


def test_criterion_09_map_upgrade():
    rng = np.random.default_rng(9)
    worst_sigma = worst_tp = 0.0
    worst_rho = np.inf
    for k in range(50):
        equal = k % 2 == 0
        A, B = _upgrade_instance(rng, equal)
        res = check_submajorization(A, B)
        assert res.feasible
        up = upgrade_map(res.witness, A, B)
        worst_sigma = max(worst_sigma, float(np.abs(up.apply(A.sigma) - B.sigma).max()))
        before = constraint_margins(res.witness, A, B)["rho"]
        after = constraint_margins(up, A, B)["rho"]
        worst_rho = min(worst_rho, min(a - b for a, b in zip(after, before)))
        if equal:
            worst_tp = max(worst_tp, float(np.abs(up.trace_out() - np.eye(A.dim)).max()))
    ok = worst_sigma <= 1e-9 and worst_tp <= 1e-9 and worst_rho >= -1e-9
    report(
        9,
        ok,
        f"max |T(sigma) - sigma'| {worst_sigma:.1e}, max |Tr_out J - I| {worst_tp:.1e}, "
        f"worst rho margin change {worst_rho:.1e}",
    )


def test_criterion_10_power_universal():
    rng = np.random.default_rng(10)
    failures = 0
    slowest = 0.0
    for _ in range(20):
        m = int(rng.integers(1, 3))
        A = random_box(rng, m, int(rng.integers(1, 4)), normalized=bool(rng.integers(2)))
        k = power_universal_exponent(A)[0]
        uk = box_pow(power_universal(m), k)
        for X, Y in ((uk, A), (box_mul(uk, A), unit_box(m))):
            start = time.perf_counter()
            res = check_submajorization(X, Y)
            slowest = max(slowest, time.perf_counter() - start)
            failures += not res.feasible
    ok = failures == 0 and slowest < 5.0
    report(10, ok, f"{failures} failed checks of 40, slowest solve {slowest:.2f}s")
