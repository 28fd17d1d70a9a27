"""Randomized and exhaustive property suites, shared by the CLI and the acceptance tests.

Each suite returns ``{"suite", "cases", "failures", "stats"}``; a run is a
pure function of its seed.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from typing import Callable

import numpy as np

from sumfree.compositions import SymmetricTensor, marginal, orbit_representatives
from sumfree.construction import SumFreeCollection, construct
from sumfree.decomposition import is_tame, symmetric_marginal_tensor, tame_decompose
from sumfree.distributions import Params, ScaledDistribution, capacity, gamma_root, mean, nu
from sumfree.errors import ValidationError
from sumfree.linalg import rank_rational
from sumfree.primes import next_prime, primes_up_to
from sumfree.progression import has_only_trivial_solutions, progression_free_set
from sumfree.rounding import round_tau
from sumfree.verification import (
    SubspaceSpec,
    admissible_js,
    alpha_property_failures,
    bounded_tuple_count,
    bounded_tuple_count_brute,
    lucas_identity_check,
    perturbation_entropy_check,
    permuted_copies_span,
    rank_flag_threshold,
    rank_lemma_check,
    sequence_count_checks,
    simple_cone_member,
    subspace_entropy_check,
    verify_sumfree,
    verify_sumfree_naive,
)

SUITES: dict[str, Callable[[int], dict]] = {}


def suite(name: str):
    def register(fn):
        SUITES[name] = fn
        return fn

    return register


def _report(name: str, cases: int, failures: list, **stats) -> dict:
    # wall-clock time is left out so that reports are reproducible byte for byte
    return {"suite": name, "cases": cases, "failures": failures, "stats": stats}


def run_suite(name: str, seed: int = 0) -> dict:
    if name not in SUITES:
        raise ValidationError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    return SUITES[name](seed)


@suite("capacity")
def capacity_suite(seed: int = 0) -> dict:
    failures, cases = [], 0
    for m in range(2, 11):
        for k in range(3, 7):
            cases += 1
            p = Params(m, k)
            res = capacity(p)
            d = nu(p)
            if abs(res.entropy_nu - math.log(res.capacity)) > 1e-9:
                failures.append({"m": m, "k": k, "kind": "entropy"})
            if abs(mean(d) - (m - 1) / k) > 1e-12:
                failures.append({"m": m, "k": k, "kind": "mean"})
            if not 1 < res.capacity < m or not 0 < res.gamma < 1:
                failures.append({"m": m, "k": k, "kind": "range"})
            if any(d[i] <= d[i + 1] for i in range(m - 1)) or d[m - 1] <= 0:
                failures.append({"m": m, "k": k, "kind": "monotone"})
    g33 = capacity(Params(3, 3)).capacity
    g23 = capacity(Params(2, 3)).capacity
    return _report("capacity", cases, failures, gamma_3_3=g33, gamma_2_3=g23, gamma_root_3_3=gamma_root(Params(3, 3)))


@suite("marginal")
def marginal_suite(seed: int = 0) -> dict:
    failures, cases, worst = [], 0, 0.0
    for m in range(2, 9):
        for k in (3, 4, 5):
            cases += 1
            target = nu(Params(m, k))
            tau = symmetric_marginal_tensor(target, k)
            err = sum(abs(float(a) - b) for a, b in zip(marginal(tau), target.to_floats()))
            worst = max(worst, err)
            if tau.min_weight() <= 0 or err > 1e-9 or tau.total_mass() != 1:
                failures.append({"m": m, "k": k, "l1": err, "min_weight": float(tau.min_weight())})
    return _report("marginal", cases, failures, worst_l1=worst)


def random_tame(rng: np.random.Generator, n: int, k: int) -> ScaledDistribution:
    """A random rational n-tame distribution (rejection sampling)."""
    for _ in range(100_000):
        tail = sorted((int(x) for x in rng.integers(0, 12, size=n)), reverse=True)
        if n and rng.random() < 0.3:
            cut = int(rng.integers(1, n + 1))
            tail = tail[:cut] + [0] * (n - cut)
        tail = [Fraction(int(t), int(rng.integers(1, 5))) for t in tail]
        tail.sort(reverse=True)
        s = sum(tail)
        if n == 0:
            return ScaledDistribution([Fraction(int(rng.integers(1, 10)))])
        first = Fraction(k, n) * sum(i * t for i, t in enumerate(tail, start=1)) - s
        if first < 0 or s == 0:
            continue
        psi = ScaledDistribution([first] + tail)
        if is_tame(psi, k):
            return psi
    raise RuntimeError("could not sample a tame distribution")


@suite("decomposition")
def decomposition_suite(seed: int = 0, cases: int = 200) -> dict:
    rng = np.random.default_rng(seed)
    failures = []
    k = 3
    for c in range(cases):
        n = int(rng.integers(0, 7))
        psi = random_tame(rng, n, k)
        comb = tame_decompose(psi, k)
        exact = comb.evaluate() == psi and all(v >= 0 for v in comb.coefficients.values())
        lp = simple_cone_member(psi.weights, k)
        if not exact or not lp:
            failures.append({"case": c, "psi": [str(x) for x in psi], "exact": exact, "lp": lp})
    return _report("decomposition", cases, failures)


@suite("alpha")
def alpha_suite(seed: int = 0) -> dict:
    failures, cases = [], 0
    for k in (3, 4, 5):
        for n in range(1, 21):
            for j in admissible_js(n, k):
                cases += 1
                bad = alpha_property_failures(n, k, j)
                if bad:
                    failures.append({"n": n, "k": k, "j": j, "properties": bad})
    return _report("alpha", cases, failures)


@suite("rounding")
def rounding_suite(seed: int = 0) -> dict:
    failures, cases = [], 0
    k = 3
    for m in range(2, 6):
        tau = symmetric_marginal_tensor(nu(Params(m, k)), k)
        for n in (9, 12, 30):
            cases += 1
            pair = round_tau(tau, n)
            ok = (
                all((Fraction(w) * n).denominator == 1 for _, w in pair.tau_tilde.items())
                and marginal(pair.tau_tilde) == pair.nu_n
                and pair.nu_n.first_moment() == Fraction(m - 1, k)
                and pair.tau_tilde.total_mass() == 1
                and pair.linf_gap <= m**k / n
            )
            if not ok:
                failures.append({"m": m, "n": n, "linf_gap": pair.linf_gap})
    return _report("rounding", cases, failures)


@suite("construction")
def construction_suite(seed: int = 0, seeds: int = 20) -> dict:
    failures, rows = [], []
    m, k = 2, 3
    for n in (6, 9, 12):
        found = None
        for s in range(seed, seed + seeds):
            res = construct(m, k, n, s)
            if res.integer.L >= 1:
                found = res
                break
        if found is None:
            failures.append({"n": n, "reason": "no seed gave L >= 1"})
            continue
        ok_int = verify_sumfree(found.integer).ok
        ok_zm = verify_sumfree(found.zm).ok
        if not (ok_int and ok_zm):
            failures.append({"n": n, "seed": found.stats["seed"], "integer": ok_int, "zm": ok_zm})
        rows.append({**found.csv_row(), "L": found.integer.L, "gamma_n": capacity(Params(m, k)).capacity ** n})
    return _report("construction", 3, failures, runs=rows)


@suite("progression")
def progression_suite(seed: int = 0, limit: int = 2000) -> dict:
    failures, cases = [], 0
    for k in (3, 4):
        for P in primes_up_to(limit):
            if P < k:
                continue
            cases += 1
            fs = progression_free_set(P, k)
            if not has_only_trivial_solutions(fs.Y, k) or max(fs.Y) > P // k:
                failures.append({"P": P, "k": k})
    size31 = progression_free_set(31, 3).R
    if size31 < 5:
        failures.append({"P": 31, "k": 3, "size": size31})
    return _report("progression", cases, failures, size_31_3=size31)


def _random_symmetric(rng: np.random.Generator, r: int, ell: int) -> SymmetricTensor:
    reps = orbit_representatives(r, ell)
    w = {rep: Fraction(int(rng.integers(0, 6)) if rng.random() < 0.3 else int(rng.integers(1, 20))) for rep in reps}
    if all(v == 0 for v in w.values()):
        w[reps[0]] = Fraction(1)
    return SymmetricTensor(r, ell, w).normalized()


def _random_zero_sum(rng: np.random.Generator, ell: int, span: int = 2) -> tuple[int, ...]:
    head = [int(x) for x in rng.integers(-span, span + 1, size=ell - 1)]
    return tuple(head + [-sum(head)])


def _random_subspace(rng: np.random.Generator, ell: int, dim: int, anchored: bool) -> SubspaceSpec:
    basis: list[tuple[int, ...]] = []
    if anchored:
        basis.append((1,) * (ell - 1) + (-(ell - 1),))
    while len(basis) < dim:
        v = _random_zero_sum(rng, ell)
        if any(v) and rank_rational(basis + [v]) == len(basis) + 1:
            basis.append(v)
    return SubspaceSpec.of(basis)


@suite("subspace")
def subspace_suite(seed: int = 0, cases: int = 1000) -> dict:
    rng = np.random.default_rng(seed)
    failures = []
    for c in range(cases):
        ell = int(rng.choice([3, 4]))
        r = int(rng.integers(0, 5))
        anchored = bool(c % 2)
        dim = int(rng.integers(1, ell))
        pi = _random_symmetric(rng, r, ell)
        W = _random_subspace(rng, ell, dim, anchored)
        rep = subspace_entropy_check(pi, W, anchored=anchored)
        if not rep.ok:
            failures.append({"case": c, "r": r, "arity": ell, "basis": [[str(x) for x in w] for w in W.basis]})
    return _report("subspace", cases, failures)


@suite("spanning")
def spanning_suite(seed: int = 0, cases: int = 100) -> dict:
    rng = np.random.default_rng(seed)
    failures = []
    for c in range(cases):
        ell = int(rng.integers(2, 6))
        v = _random_zero_sum(rng, ell, span=5)
        while not any(v):
            v = _random_zero_sum(rng, ell, span=5)
        if not permuted_copies_span(v):
            failures.append({"case": c, "v": list(v)})
    return _report("spanning", cases, failures)


@suite("lucas")
def lucas_suite(seed: int = 0) -> dict:
    failures, cases = [], 0
    for p, l in ((2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2)):
        for k in (3, 4):
            cases += 1
            v = lucas_identity_check(p, l, k)
            if not v.ok:
                failures.append({"m": p**l, "k": k, "violations": [x.to_json() for x in v.violations[:5]]})
    return _report("lucas", cases, failures)


def _random_zero_sum_tuple(rng: np.random.Generator, m: int, k: int, n: int) -> list[list[int]]:
    cols = []
    for _ in range(n):
        cuts = sorted(int(x) for x in rng.integers(0, m, size=k - 1))
        bounds = [0] + cuts + [m - 1]
        cols.append([bounds[i + 1] - bounds[i] for i in range(k)])
    return [list(row) for row in zip(*cols)]


@suite("rank")
def rank_suite(seed: int = 0, cases: int = 1000) -> dict:
    rng = np.random.default_rng(seed)
    failures, by_d = [], {}
    for c in range(cases):
        m = int(rng.integers(2, 5))
        k = int(rng.integers(3, 6))
        n = int(rng.integers(1, 7))
        xs = _random_zero_sum_tuple(rng, m, k, n)
        xs2 = _random_zero_sum_tuple(rng, m, k, n)
        if rng.random() < 0.3:
            # share some columns so that small d shows up too
            keep = rng.random(n) < 0.6
            for i in range(k):
                xs2[i] = [a if kp else b for a, b, kp in zip(xs[i], xs2[i], keep)]
        P = next_prime(rank_flag_threshold(k, m) + 1)
        rep = rank_lemma_check(xs, xs2, m, P)
        by_d[rep.d] = by_d.get(rep.d, 0) + 1
        if not rep.ok or not rep.flag:
            failures.append({"case": c, "report": rep.to_json()})
    return _report("rank", cases, failures, by_d={str(d): v for d, v in sorted(by_d.items())})


@suite("counting")
def counting_suite(seed: int = 0) -> dict:
    failures, cases = [], 0
    for m in range(2, 6):
        for k in (3, 4, 5):
            for n in range(1, 41):
                cases += 1
                res = bounded_tuple_count(n, m, k)
                if not res.holds:
                    failures.append(res.to_json())
                if n <= 6 and bounded_tuple_count_brute(n, m, k) != res.exact:
                    failures.append({**res.to_json(), "kind": "brute_force_mismatch"})
    return _report("counting", cases, failures)


@suite("sequences")
def sequences_suite(seed: int = 0, cases: int = 200) -> dict:
    rng = np.random.default_rng(seed)
    failures = []
    for c in range(cases):
        n = int(rng.integers(1, 61))
        size = int(rng.integers(1, 9))
        counts = rng.multinomial(n, rng.dirichlet(np.ones(size)))
        omega = [Fraction(int(x), n) for x in counts]
        labels = [int(x) for x in rng.integers(0, 3, size=size)]
        rep = sequence_count_checks(omega, n, classifier=lambda s: labels[s])
        if not rep.ok:
            failures.append({"case": c, "n": n, "counts": counts.tolist(), "labels": labels})
    return _report("sequences", cases, failures)


@suite("perturbation")
def perturbation_suite(seed: int = 0, cases: int = 10_000) -> dict:
    rng = np.random.default_rng(seed)
    failures = []
    for c in range(cases):
        size = int(rng.integers(2, 7))
        w0 = rng.dirichlet(np.ones(size))
        w1 = rng.dirichlet(np.ones(size))
        v = perturbation_entropy_check(list(w0), list(w1), float(min(w0.min(), w1.min())))
        if not v.ok:
            failures.append({"case": c})
    return _report("perturbation", cases, failures)


@suite("sumfree")
def sumfree_suite(seed: int = 0, cases: int = 200) -> dict:
    rng = np.random.default_rng(seed)
    failures = []
    for c in range(cases):
        m = int(rng.integers(2, 4))
        k = int(rng.integers(3, 5))
        n = int(rng.integers(1, 4))
        L = int(rng.integers(1, 13 if k == 3 else 7))
        mode = "zm" if c % 2 else "integer"
        tuples = []
        for _ in range(L):
            if mode == "integer":
                rows = _random_zero_sum_tuple(rng, m, k, n)
            else:
                rows = [list(rng.integers(0, m, size=n)) for _ in range(k - 1)]
                rows.append([(-sum(col)) % m for col in zip(*rows)])
            tuples.append(tuple(tuple(int(a) for a in r) for r in rows))
        col = SumFreeCollection(mode, m, k, n, tuples)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            fast = verify_sumfree(col)
        slow = verify_sumfree_naive(col)
        if fast.ok != slow.ok or {v.indices for v in fast.violations} != {v.indices for v in slow.violations}:
            failures.append({"case": c, "fast": fast.ok, "slow": slow.ok})
    return _report("sumfree", cases, failures)
