"""One test per acceptance criterion, each with its time limit and a one-line verdict."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from sumfree.compositions import marginal
from sumfree.construction import construct
from sumfree.decomposition import symmetric_marginal_tensor, tame_decompose
from sumfree.distributions import Params, capacity, mean, nu
from sumfree.primes import next_prime, primes_up_to
from sumfree.progression import has_only_trivial_solutions, progression_free_set
from sumfree.rounding import round_tau
from sumfree.suites import (
    _random_subspace,
    _random_symmetric,
    _random_zero_sum_tuple,
    random_tame,
)
from sumfree.verification import (
    admissible_js,
    alpha_property_failures,
    bounded_tuple_count,
    bounded_tuple_count_brute,
    lucas_identity_check,
    rank_flag_threshold,
    rank_lemma_check,
    sequence_count_checks,
    simple_cone_member,
    subspace_entropy_check,
    verify_sumfree,
)


def report(capsys, number: int, title: str, ok: bool, seconds: float, limit: float, detail: str = "") -> None:
    passed = ok and seconds < limit
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:2d}: {title} ({seconds:.2f}s < {limit:.0f}s){' ' + detail if detail else ''}"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line
    assert seconds < limit, line


def test_criterion_01_capacity_constants(capsys):
    t = time.perf_counter()
    g33 = capacity(Params(3, 3)).capacity
    g23 = capacity(Params(2, 3)).capacity
    dt = time.perf_counter() - t
    ok = abs(g33 - 2.7551) <= 1e-3 and abs(g23 - 1.5 * 2 ** (1 / 3)) <= 1e-9
    report(capsys, 1, "capacity constants", ok, dt, 1, f"Gamma_3,3={g33:.6f} Gamma_2,3={g23:.10f}")


def test_criterion_02_nu_consistency(capsys):
    t = time.perf_counter()
    bad = []
    for m in range(2, 11):
        for k in range(3, 7):
            c = capacity(Params(m, k))
            if abs(c.entropy_nu - math.log(c.capacity)) > 1e-9 or abs(mean(nu(Params(m, k))) - (m - 1) / k) > 1e-12:
                bad.append((m, k))
    dt = time.perf_counter() - t
    report(capsys, 2, "entropy and mean of nu on m<=10, k<=6", not bad, dt, 1, f"failures={bad}")


def test_criterion_03_marginal_theorem(capsys):
    t = time.perf_counter()
    bad, worst = [], 0.0
    for m in range(2, 9):
        for k in (3, 4, 5):
            target = nu(Params(m, k))
            tau = symmetric_marginal_tensor(target, k)
            err = sum(abs(float(a) - b) for a, b in zip(marginal(tau), target.to_floats()))
            worst = max(worst, err)
            if tau.min_weight() <= 0 or err > 1e-9:
                bad.append((m, k))
    dt = time.perf_counter() - t
    report(capsys, 3, "positive symmetric tensor with marginal nu, m<=8, k in 3..5", not bad, dt, 30, f"worst l1={worst:.1e}")


def test_criterion_04_decomposition_vs_lp(capsys):
    t = time.perf_counter()
    rng = np.random.default_rng(2024)
    bad = 0
    for _ in range(200):
        psi = random_tame(rng, int(rng.integers(0, 7)), 3)
        comb = tame_decompose(psi, 3)
        if comb.evaluate() != psi or not simple_cone_member(psi.weights, 3):
            bad += 1
    dt = time.perf_counter() - t
    report(capsys, 4, "200 tame decompositions reconstruct exactly and pass the LP", bad == 0, dt, 60, f"failures={bad}")


def test_criterion_05_alpha_properties(capsys):
    t = time.perf_counter()
    bad, cases = [], 0
    for k in (3, 4, 5):
        for n in range(1, 21):
            for j in admissible_js(n, k):
                cases += 1
                if alpha_property_failures(n, k, j):
                    bad.append((n, k, j))
    dt = time.perf_counter() - t
    report(capsys, 5, f"alpha_j properties (a)-(f) on {cases} cases", not bad, dt, 10, f"failures={bad}")


def test_criterion_06_rounding(capsys):
    t = time.perf_counter()
    bad = []
    for m in range(2, 6):
        tau = symmetric_marginal_tensor(nu(Params(m, 3)), 3)
        for n in (9, 12, 30):
            pair = round_tau(tau, n)
            ok = (
                all((Fraction(w) * n).denominator == 1 for _, w in pair.tau_tilde.items())
                and marginal(pair.tau_tilde) == pair.nu_n
                and pair.nu_n.first_moment() == Fraction(m - 1, 3)
                and pair.linf_gap <= m**3 / n
            )
            if not ok:
                bad.append((m, n))
    dt = time.perf_counter() - t
    report(capsys, 6, "rounding to denominator n", not bad, dt, 5, f"failures={bad}")


def test_criterion_07_end_to_end(capsys):
    t = time.perf_counter()
    found = {}
    for n in (6, 9, 12):
        for seed in range(20):
            res = construct(2, 3, n, seed)
            if res.integer.L >= 1 and verify_sumfree(res.integer).ok and verify_sumfree(res.zm).ok:
                found[n] = (seed, res.integer.L, capacity(Params(2, 3)).capacity ** n)
                break
    dt = time.perf_counter() - t
    detail = " ".join(f"n={n}:seed={s},L={L},Gamma^n={g:.0f}" for n, (s, L, g) in found.items())
    report(capsys, 7, "end-to-end construction verified in both views", len(found) == 3, dt, 120, detail)


def test_criterion_08_progression_free(capsys):
    t = time.perf_counter()
    bad = []
    for k in (3, 4):
        for P in primes_up_to(2000):
            if P >= k and not has_only_trivial_solutions(progression_free_set(P, k).Y, k):
                bad.append((P, k))
    size = progression_free_set(31, 3).R
    dt = time.perf_counter() - t
    report(capsys, 8, "progression-free Y for all P<=2000, k in {3,4}", not bad and size >= 5, dt, 60, f"|Y(31,3)|={size}")


def test_criterion_09_subspace_entropy(capsys):
    t = time.perf_counter()
    rng = np.random.default_rng(9)
    bad = 0
    for c in range(1000):
        ell = int(rng.choice([3, 4]))
        pi = _random_symmetric(rng, int(rng.integers(0, 5)), ell)
        anchored = bool(c % 2)
        W = _random_subspace(rng, ell, int(rng.integers(1, ell)), anchored)
        if not subspace_entropy_check(pi, W, anchored=anchored).ok:
            bad += 1
    dt = time.perf_counter() - t
    report(capsys, 9, "subspace entropy inequality, 1000 plain/anchored cases", bad == 0, dt, 60, f"failures={bad}")


def test_criterion_10_lucas(capsys):
    t = time.perf_counter()
    bad = []
    for p, l in ((2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2)):
        for k in (3, 4):
            if not lucas_identity_check(p, l, k).ok:
                bad.append((p**l, k))
    dt = time.perf_counter() - t
    report(capsys, 10, "binomial indicator identity, m in {2,3,4,5,8,9}", not bad, dt, 30, f"failures={bad}")


def test_criterion_11_rank(capsys):
    t = time.perf_counter()
    rng = np.random.default_rng(11)
    bad = 0
    for _ in range(1000):
        m, k, n = int(rng.integers(2, 5)), int(rng.integers(3, 6)), int(rng.integers(1, 7))
        xs = _random_zero_sum_tuple(rng, m, k, n)
        xs2 = _random_zero_sum_tuple(rng, m, k, n)
        rep = rank_lemma_check(xs, xs2, m, next_prime(rank_flag_threshold(k, m) + 1))
        if not (rep.ok and rep.flag and rep.rank_p == k - 1 + rep.d):
            bad += 1
    dt = time.perf_counter() - t
    report(capsys, 11, "rank_P = k-1+d on 1000 zero-sum pairs", bad == 0, dt, 30, f"failures={bad}")


def test_criterion_12_counting(capsys):
    t = time.perf_counter()
    bad = []
    for m in range(2, 6):
        for k in (3, 4, 5):
            for n in range(1, 41):
                r = bounded_tuple_count(n, m, k)
                if not r.holds or (n <= 6 and bounded_tuple_count_brute(n, m, k) != r.exact):
                    bad.append((n, m, k))
    dt = time.perf_counter() - t
    report(capsys, 12, "bounded-sum count <= Gamma^n, n<=40", not bad, dt, 10, f"failures={bad}")


def test_criterion_13_sequence_counts(capsys):
    t = time.perf_counter()
    rng = np.random.default_rng(13)
    bad = 0
    for _ in range(200):
        n = int(rng.integers(1, 61))
        size = int(rng.integers(1, 9))
        counts = rng.multinomial(n, rng.dirichlet(np.ones(size)))
        labels = [int(x) for x in rng.integers(0, 3, size=size)]
        rep = sequence_count_checks([Fraction(int(c), n) for c in counts], n, classifier=lambda s: labels[s])
        if not rep.ok:
            bad += 1
    dt = time.perf_counter() - t
    report(capsys, 13, "multinomial entropy bounds, 200 compositions", bad == 0, dt, 10, f"failures={bad}")
