"""Independent checks for every combinatorial and entropy statement the construction relies on."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Mapping, Sequence

import numpy as np

from sumfree import kernels
from sumfree.compositions import (
    SymmetricTensor,
    _partitions,
    enumerate_compositions,
    marginal,
)
from sumfree.construction import SumFreeCollection, enumerate_X0, lift
from sumfree.distributions import Params, ScaledDistribution, capacity, entropy, entropy_of_masses
from sumfree.errors import ResourceCapError, ValidationError
from sumfree.linalg import in_span, rank_mod_p, rank_rational
from sumfree.primes import is_prime

TOL = 1e-9
NAIVE_SCAN_CAP = 10**8
CENSUS_CAP = 10**7


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple = ()
    detail: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "indices": list(self.indices), "detail": self.detail}


@dataclass
class Verdict:
    ok: bool
    violations: list[Violation] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "stats": self.stats,
        }


def _verdict(violations: list[Violation], **stats) -> Verdict:
    return Verdict(ok=not violations, violations=violations, stats=stats)


# sum-free collections


def _naive_zero_sums(arrays: list[np.ndarray], target: np.ndarray, modulus: int) -> list[tuple[int, ...]]:
    L = arrays[0].shape[0]
    k = len(arrays)
    if L**k > NAIVE_SCAN_CAP:
        raise ResourceCapError(f"naive scan of {L}^{k} tuples exceeds the cap")
    out = []
    for idx in itertools.product(range(L), repeat=k):
        s = sum(arrays[i][j] for i, j in enumerate(idx))
        diff = (s - target) % modulus if modulus else s - target
        if not diff.any():
            out.append(idx)
    return out


def verify_sumfree(c: SumFreeCollection, max_violations: int = 1000) -> Verdict:
    """Diagonal tuples must sum to zero and no off-diagonal tuple may."""
    violations: list[Violation] = []
    if any(len(t) != c.k or any(len(v) != c.n for v in t) for t in c.tuples):
        raise ValidationError("collection has tuples of the wrong shape")
    if c.L == 0:
        return _verdict(violations, L=0, mode=c.mode, scan="none")
    arrays = c.position_arrays()
    if c.mode == "integer":
        target = np.full(c.n, c.m - 1, dtype=np.int64)
        modulus = 0
    else:
        target = np.zeros(c.n, dtype=np.int64)
        modulus = c.m
    in_range = all(((a >= 0) & (a < c.m)).all() for a in arrays)
    last_distinct = len({tuple(v) for v in arrays[-1].tolist()}) == c.L
    if in_range and last_distinct:
        hits = [tuple(r) for r in kernels.zero_sum_search(arrays, target, modulus, c.m).tolist()]
        scan = "lookup"
    else:
        warnings.warn(
            "position-k members are not distinct (or out of range); falling back to a full scan",
            RuntimeWarning,
            stacklevel=2,
        )
        hits = _naive_zero_sums(arrays, target, modulus)
        scan = "naive"
    diagonal_ok = set()
    for idx in hits:
        if all(j == idx[0] for j in idx):
            diagonal_ok.add(idx[0])
        elif len(violations) < max_violations:
            violations.append(Violation("off_diagonal_zero_sum", idx, "cross-tuple sum vanishes"))
    for j in range(c.L):
        if j not in diagonal_ok:
            violations.append(Violation("diagonal_nonzero", (j,) * c.k, "tuple does not sum to zero"))
    return _verdict(violations, L=c.L, mode=c.mode, scan=scan, zero_sums=len(hits))


def verify_sumfree_naive(c: SumFreeCollection) -> Verdict:
    """The O(L^k) reference scan."""
    if c.L == 0:
        return _verdict([], L=0, mode=c.mode, scan="naive")
    arrays = c.position_arrays()
    target = np.full(c.n, c.m - 1 if c.mode == "integer" else 0, dtype=np.int64)
    hits = set(_naive_zero_sums(arrays, target, 0 if c.mode == "integer" else c.m))
    violations = []
    for idx in itertools.product(range(c.L), repeat=c.k):
        diag = all(j == idx[0] for j in idx)
        if diag and idx not in hits:
            violations.append(Violation("diagonal_nonzero", idx))
        elif not diag and idx in hits:
            violations.append(Violation("off_diagonal_zero_sum", idx))
    return _verdict(violations, L=c.L, mode=c.mode, scan="naive")


# counting


@dataclass(frozen=True)
class CountResult:
    n: int
    m: int
    k: int
    exact: int
    bound: float

    @property
    def holds(self) -> bool:
        return self.exact <= self.bound * (1 + TOL)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "k": self.k, "exact": self.exact, "bound": self.bound, "holds": self.holds}


def bounded_tuple_count(n: int, m: int, k: int) -> CountResult:
    """Number of ``a`` in ``{0..m-1}^n`` with ``sum(a) <= n(m-1)/k``, against ``Gamma^n``."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    threshold = n * (m - 1) // k
    ways = [1] + [0] * threshold
    for _ in range(n):
        new = [0] * (threshold + 1)
        for s, w in enumerate(ways):
            if w:
                for a in range(min(m - 1, threshold - s) + 1):
                    new[s + a] += w
        ways = new
    exact = sum(ways)
    bound = capacity(Params(m, k)).capacity ** n
    res = CountResult(n, m, k, exact, bound)
    if not res.holds:
        raise AssertionError(f"count {exact} exceeds Gamma^n = {bound} at n={n}, m={m}, k={k}")
    return res


def bounded_tuple_count_brute(n: int, m: int, k: int) -> int:
    return sum(1 for a in itertools.product(range(m), repeat=n) if k * sum(a) <= n * (m - 1))


# the binomial indicator identity over Z_{p^l}


def lucas_identity_check(p: int, l: int, k: int) -> Verdict:
    """Exhaustively compare the truncated binomial sum with the zero-sum indicator on ``Z_m^k``."""
    if not is_prime(p) or l < 1:
        raise ValidationError(f"m must be a prime power p^l, got p={p}, l={l}")
    m = p**l
    if m > 16:
        raise ValidationError(f"exhaustive mode needs m = {m} <= 16")
    # B[z, a] = (-1)^a binom(z, a) mod p; the residue lift 0..m-1 is the one that makes this well defined
    B = np.array([[((-1) ** a * math.comb(z, a)) % p for a in range(m)] for z in range(m)], dtype=np.int64)
    polys = np.zeros((1, m), dtype=np.int64)
    polys[0, 0] = 1
    sums = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        new = np.zeros((polys.shape[0], m, m), dtype=np.int64)
        for a in range(m):
            new[:, :, a:] += polys[:, a, None, None] * B[None, :, : m - a]
        polys = (new % p).reshape(-1, m)
        sums = (sums[:, None] + np.arange(m)[None, :]).reshape(-1)
    value = polys.sum(axis=1) % p
    indicator = (sums % m == 0).astype(np.int64)
    bad = np.nonzero(value != indicator)[0]
    violations = []
    for row in bad[:100].tolist():
        z = np.unravel_index(row, (m,) * k)
        violations.append(
            Violation("lucas_mismatch", tuple(int(v) for v in z), f"value {value[row]} indicator {indicator[row]}")
        )
    return _verdict(violations, m=m, k=k, cases=int(value.shape[0]))


# ranks of lifted tuples


@dataclass(frozen=True)
class RankReport:
    d: int
    rank_q: int
    rank_p: int
    P: int
    flag: bool
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "rank_q": self.rank_q,
            "rank_p": self.rank_p,
            "P": self.P,
            "flag": self.flag,
            "violations": [v.to_json() for v in self.violations],
        }


def rank_flag_threshold(k: int, m: int) -> int:
    return math.factorial(2 * k) * (m - 1) ** (2 * k)


def rank_lemma_check(xs: Sequence[Sequence[int]], xs2: Sequence[Sequence[int]], m: int, P: int) -> RankReport:
    """``rank_P`` of the ``2k`` lifts equals ``k - 1 + dim span_Q(x_i - x_i')`` when ``P`` is large."""
    k = len(xs)
    if len(xs2) != k:
        raise ValidationError("both tuples must have the same length")
    n = len(xs[0])
    for tup in (xs, xs2):
        if any(sum(col) != m - 1 for col in zip(*tup)):
            raise ValidationError("tuples must sum to (m-1)*1")
    diffs = [[a - b for a, b in zip(x, y)] for x, y in zip(xs, xs2)]
    d = rank_rational(diffs) if n else 0
    lifts = [lift(x, i + 1, m, k) for i, x in enumerate(xs)] + [lift(x, i + 1, m, k) for i, x in enumerate(xs2)]
    rank_q = rank_rational(lifts)
    rank_p = rank_mod_p(lifts, P)
    flag = P > rank_flag_threshold(k, m)
    violations = []
    if rank_q != k - 1 + d:
        violations.append(Violation("rank_q_mismatch", (), f"rank_Q {rank_q} != k-1+d = {k - 1 + d}"))
    if flag and rank_p != k - 1 + d:
        violations.append(Violation("rank_p_mismatch", (), f"rank_P {rank_p} != k-1+d = {k - 1 + d}"))
    return RankReport(d, rank_q, rank_p, P, flag, tuple(violations))


def permuted_copies_span(v: Sequence) -> bool:
    """Whether the coordinate permutations of a nonzero zero-sum ``v`` span the zero-sum hyperplane."""
    v = [Fraction(x) for x in v]
    if sum(v) != 0 or not any(v):
        raise ValidationError("v must be a nonzero vector with coordinate sum 0")
    copies = {tuple(v[i] for i in s) for s in itertools.permutations(range(len(v)))}
    return rank_rational(sorted(copies)) == len(v) - 1


# subspace entropy


@dataclass(frozen=True)
class SubspaceSpec:
    arity: int
    basis: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for w in self.basis:
            if len(w) != self.arity:
                raise ValidationError(f"basis vector {w} has the wrong length")
            if sum(Fraction(x) for x in w) != 0:
                raise ValidationError(f"basis vector {w} does not sum to 0")
        if self.basis and rank_rational(self.basis) != len(self.basis):
            raise ValidationError("basis vectors are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def of(cls, basis) -> "SubspaceSpec":
        basis = tuple(tuple(Fraction(x) for x in w) for w in basis)
        if not basis:
            raise ValidationError("use SubspaceSpec(arity, ()) for the zero subspace")
        return cls(len(basis[0]), basis)


@dataclass(frozen=True)
class SubspaceReport:
    h_values: float
    h_pi: float
    h_mu: float
    plain_rhs: float
    anchored_rhs: float | None
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _grouped_entropy(pi: SymmetricTensor, key: Callable[[tuple], Hashable]) -> float:
    groups: dict[Hashable, Any] = {}
    for t in enumerate_compositions(pi.r, pi.arity).elements:
        w = pi[t]
        if w:
            kk = key(t)
            groups[kk] = groups.get(kk, 0) + w
    return entropy_of_masses(groups.values())


def subspace_entropy_check(pi: SymmetricTensor, W: SubspaceSpec, anchored: bool = False) -> SubspaceReport:
    if not isinstance(pi, SymmetricTensor):
        raise ValidationError("pi must be a symmetric tensor")
    ell = pi.arity
    if W.arity != ell:
        raise ValidationError(f"subspace lives in Q^{W.arity}, tensor has arity {ell}")
    if abs(float(pi.total_mass()) - 1) > TOL:
        raise ValidationError("pi must be normalised")
    basis = W.basis
    h_w = _grouped_entropy(pi, lambda t: tuple(sum(a * b for a, b in zip(w, t)) for w in basis))
    h_pi = pi.entropy()
    h_mu = entropy(marginal(pi))
    plain_rhs = W.dim / (ell - 1) * h_pi
    violations = []
    if h_w < plain_rhs - TOL:
        violations.append(Violation("plain_inequality", (), f"H_W {h_w} < {plain_rhs}"))
    anchored_rhs = None
    if anchored:
        if ell < 3:
            raise ValidationError("anchored mode needs arity >= 3")
        anchor = (1,) * (ell - 1) + (-(ell - 1),)
        if not in_span(anchor, basis):
            raise ValidationError(f"anchor {anchor} is not in the span of W")
        anchored_rhs = h_mu + (W.dim - 1) / (ell - 2) * (h_pi - h_mu)
        if h_w < anchored_rhs - TOL:
            violations.append(Violation("anchored_inequality", (), f"H_W {h_w} < {anchored_rhs}"))
    return SubspaceReport(h_w, h_pi, h_mu, plain_rhs, anchored_rhs, tuple(violations))


# sequence counting


@dataclass(frozen=True)
class SequenceReport:
    n: int
    log_count: float
    lower: float
    upper: float
    log_constrained: float | None
    constrained_upper: float | None
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _counts(omega: Sequence, n: int) -> list[int]:
    out = []
    for i, w in enumerate(omega):
        c = Fraction(w) * n
        if c.denominator != 1 or c < 0:
            raise ValidationError(f"omega({i})*n = {c} is not a non-negative integer")
        out.append(int(c))
    if sum(out) != n:
        raise ValidationError("omega does not sum to 1")
    return out


def _log_multinomial(counts: Sequence[int]) -> float:
    return math.log(math.factorial(sum(counts))) - sum(math.log(math.factorial(c)) for c in counts)


def sequence_count_checks(
    omega: Sequence,
    n: int,
    classifier: Callable[[int], Hashable] | None = None,
    targets: Sequence[Hashable] | None = None,
) -> SequenceReport:
    """Multinomial entropy bounds, optionally conditioned on a classifier with prescribed values."""
    counts = _counts(omega, n)
    probs = [Fraction(c, n) for c in counts]
    h = entropy_of_masses(probs)
    support = sum(1 for c in counts if c)
    log_m = _log_multinomial(counts)
    lower = h * n - support * (1 + math.log(n))
    upper = h * n
    violations = []
    slack = TOL * max(1.0, abs(upper))
    if log_m < lower - slack:
        violations.append(Violation("lower_bound", (), f"log M {log_m} < {lower}"))
    if log_m > upper + slack:
        violations.append(Violation("upper_bound", (), f"log M {log_m} > {upper}"))
    log_c = c_upper = None
    if classifier is not None:
        classes: dict[Hashable, list[int]] = {}
        for s, c in enumerate(counts):
            classes.setdefault(classifier(s), []).append(c)
        if targets is None:
            targets = [key for key, cs in classes.items() for _ in range(sum(cs))]
        if len(targets) != n:
            raise ValidationError(f"need {n} targets, got {len(targets)}")
        slots: dict[Hashable, int] = {}
        for t in targets:
            slots[t] = slots.get(t, 0) + 1
        feasible = all(slots.get(key, 0) == sum(cs) for key, cs in classes.items() if sum(cs)) and all(
            key in classes and sum(classes[key]) == v for key, v in slots.items()
        )
        log_c = sum(_log_multinomial(cs) for cs in classes.values()) if feasible else -math.inf
        h_f = entropy_of_masses([Fraction(sum(cs), n) for cs in classes.values()])
        c_upper = (h - h_f) * n
        if log_c > c_upper + slack:
            violations.append(Violation("constrained_upper_bound", (), f"log M {log_c} > {c_upper}"))
    return SequenceReport(n, log_m, lower, upper, log_c, c_upper, tuple(violations))


def perturbation_entropy_check(w0: Sequence, w1: Sequence, c: float) -> Verdict:
    if len(w0) != len(w1):
        raise ValidationError("distributions must share a support")
    if c <= 0:
        raise ValidationError("c must be positive")
    for w in (w0, w1):
        if min(w) < c:
            raise ValidationError(f"entry {min(w)} below c={c}")
    lhs = abs(entropy(w1) - entropy(w0))
    rhs = sum(abs(float(a) - float(b)) for a, b in zip(w0, w1)) * math.log(1 / c)
    violations = [] if lhs <= rhs + TOL else [Violation("perturbation", (), f"{lhs} > {rhs}")]
    return _verdict(violations, lhs=lhs, rhs=rhs)


# special pairs


@dataclass(frozen=True)
class CensusReport:
    counts: dict[int, int]
    exponential: dict[int, float]
    h_tau: float
    h_nu: float
    examined: int

    def to_json(self) -> dict:
        return {
            "counts": {str(d): c for d, c in sorted(self.counts.items())},
            "exponential": {str(d): v for d, v in sorted(self.exponential.items())},
            "h_tau": self.h_tau,
            "h_nu": self.h_nu,
            "examined": self.examined,
        }


def special_pair_census(xs: Sequence[Sequence[int]], nu_n: ScaledDistribution, m: int, cap: int = CENSUS_CAP) -> CensusReport:
    """Counts, by ``d``, of zero-sum tuples in ``X_0^k`` that share a member with ``xs`` without equalling it.

    Data only: the comparison term is ``exp(d (H(tau) - H(nu)) n / (k-2))`` where ``tau`` is
    the column type of ``xs``.
    """
    k = len(xs)
    n = len(xs[0])
    xs = tuple(tuple(int(a) for a in x) for x in xs)
    X0 = enumerate_X0(nu_n, m, n)
    if X0.shape[0] ** (k - 1) > cap:
        raise ResourceCapError(f"|X_0|^(k-1) = {X0.shape[0] ** (k - 1)} exceeds the census cap {cap}")
    target = np.full(n, m - 1, dtype=np.int64)
    hits = kernels.zero_sum_search([X0] * k, target, 0, m)
    rows = [tuple(map(tuple, r)) for r in (X0[h] for h in hits)] if hits.shape[0] else []
    counts: dict[int, int] = {d: 0 for d in range(1, k - 1)}
    for tup in rows:
        if tup == xs or not any(a == b for a, b in zip(tup, xs)):
            continue
        d = rank_rational([[a - b for a, b in zip(x, y)] for x, y in zip(xs, tup)])
        counts[d] = counts.get(d, 0) + 1
    col_counts: dict[tuple, int] = {}
    for col in zip(*xs):
        col_counts[col] = col_counts.get(col, 0) + 1
    h_tau = entropy_of_masses([Fraction(c, n) for c in col_counts.values()])
    h_nu = entropy(nu_n)
    expo = {d: math.exp(d * (h_tau - h_nu) * n / (k - 2)) for d in range(1, k - 1)}
    return CensusReport(counts, expo, h_tau, h_nu, len(rows))


# cone membership and the alpha properties


def simple_cone_member(psi: Sequence, k: int) -> bool:
    """LP feasibility: is ``psi`` a non-negative combination of ``n``-simple atoms?"""
    from scipy.optimize import linprog

    n = len(psi) - 1
    atoms = list(_partitions(n, k))
    A = np.zeros((n + 1, len(atoms)))
    for j, atom in enumerate(atoms):
        for a in atom:
            A[a, j] += 1
    b = np.array([float(x) for x in psi])
    scale = max(1.0, float(np.abs(b).max()))
    res = linprog(np.zeros(len(atoms)), A_eq=A, b_eq=b / scale, bounds=(0, None), method="highs")
    return res.status == 0


def alpha_property_failures(n: int, k: int, j: int) -> list[str]:
    """Letters of the six required properties of ``alpha_j`` that fail."""
    from sumfree.decomposition import alpha

    a, witness = alpha(n, k, j)
    fails = []
    if any(c < 0 for c in witness.coefficients.values()) or witness.evaluate() != a:
        fails.append("a")
    if not a.has_mean(k):
        fails.append("b")
    if any(a[i] > a[i + 1] for i in range(1, j)):
        fails.append("c")
    if any(a[i] != 0 for i in range(j + 1, n + 1)):
        fails.append("d")
    if a[j] == 0:
        fails.append("e")
    if n >= 2 * k:
        lo, hi = n // k, -(-n // k)
        if 2 * a[lo] < a[lo - 1] + a[hi]:
            fails.append("f")
    return fails


def admissible_js(n: int, k: int) -> list[int]:
    return [j for j in range(1, n + 1) if k * (j + 1) >= 2 * n]
