"""The randomized construction of k-colored sum-free sets in ``Z_m^n``.

Pipeline: ``nu`` and a positive symmetric ``tau`` with marginal ``nu``; round
both to denominator ``n``; choose a prime ``P`` and a progression-free
``Y``; draw a random linear map ``f`` on ``F_P^(n+k-1)``; keep the vectors of
``X_0`` whose lifted image lands in the matching column of the colored line;
collect zero-sum candidate tuples and keep the isolated ones.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from sumfree import kernels
from sumfree.compositions import multinomial
from sumfree.decomposition import symmetric_marginal_tensor
from sumfree.distributions import Params, ScaledDistribution, entropy, nu
from sumfree.errors import ResourceCapError, ValidationError
from sumfree.primes import is_prime, next_prime
from sumfree.progression import FieldSetup, colored_line, progression_free_set
from sumfree.rounding import RoundedPair, round_tau

X0_CAP = 2_000_000
PRIME_TARGET_CAP = 2**62
PRIME_FORMULA = "smallest prime >= exp((H(tau)-H(nu))/(k-2) * n), polynomial prefactors dropped"


def choose_prime(H_tau: float, H_nu: float, n: int, k: int, override: int | None = None) -> int:
    if override is not None:
        if not is_prime(int(override)):
            raise ValidationError(f"prime override {override} is not prime")
        return int(override)
    if H_tau < H_nu - 1e-9 or H_nu < -1e-12:
        raise ValidationError(f"need H_tau >= H_nu >= 0, got H_tau={H_tau}, H_nu={H_nu}")
    exponent = max(0.0, H_tau - H_nu) / (k - 2) * n
    if exponent > math.log(PRIME_TARGET_CAP):
        raise ResourceCapError(f"prime target exp({exponent:.1f}) exceeds 2^62; use a smaller n")
    return next_prime(math.ceil(math.exp(exponent) - 1e-9))


@dataclass(frozen=True)
class LinearMap:
    P: int
    coefficients: tuple[int, ...]
    seed: int

    @classmethod
    def sample(cls, seed: int, P: int, dim: int) -> "LinearMap":
        if not 0 <= seed < 2**64:
            raise ValidationError(f"seed must be a 64-bit unsigned integer, got {seed}")
        rng = np.random.Generator(np.random.Philox(key=seed))
        coeffs = rng.integers(0, P, size=dim, dtype=np.int64)
        return cls(P=P, coefficients=tuple(int(c) for c in coeffs), seed=seed)

    def __call__(self, v) -> int:
        return sum(int(a) * c for a, c in zip(v, self.coefficients)) % self.P

    def lift_offsets(self, n: int, m: int, k: int) -> list[int]:
        """``f(lift(x, i)) = f(x, 0...) + offset_i``; returns ``[offset_1, ..., offset_k]``."""
        c = self.coefficients
        tail = c[n:]
        offs = [tail[i] % self.P for i in range(k - 1)]
        offs.append((-(m - 1) * sum(c[:n]) - sum(tail)) % self.P)
        return offs


@dataclass
class SumFreeCollection:
    mode: str
    m: int
    k: int
    n: int
    tuples: list[tuple[tuple[int, ...], ...]]
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in ("integer", "zm"):
            raise ValidationError(f"mode must be 'integer' or 'zm', got {self.mode!r}")

    @property
    def L(self) -> int:
        return len(self.tuples)

    def position_arrays(self) -> list[np.ndarray]:
        return [
            np.array([t[i] for t in self.tuples], dtype=np.int64).reshape(self.L, self.n)
            for i in range(self.k)
        ]

    def check_invariants(self) -> None:
        for j, tup in enumerate(self.tuples):
            if len(tup) != self.k or any(len(v) != self.n for v in tup):
                raise ValidationError(f"tuple {j} has the wrong shape")
            for v in tup:
                if any(not 0 <= a < self.m for a in v):
                    raise ValidationError(f"tuple {j} has an entry outside 0..m-1")
            sums = [sum(col) for col in zip(*tup)]
            if self.mode == "integer":
                if any(s != self.m - 1 for s in sums):
                    raise ValidationError(f"tuple {j} does not sum to (m-1)*1")
                weight = Fraction((self.m - 1) * self.n, self.k)
                if any(sum(v) != weight for v in tup):
                    raise ValidationError(f"tuple {j} has a member with coordinate sum != (m-1)n/k")
            elif any(s % self.m for s in sums):
                raise ValidationError(f"tuple {j} does not sum to 0 in Z_m")

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "n": self.n,
            "seed": self.provenance.get("seed"),
            "P": self.provenance.get("P"),
            "mode": self.mode,
            "tuples": [[list(v) for v in t] for t in self.tuples],
            "provenance": self.provenance,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "SumFreeCollection":
        prov = dict(data.get("provenance") or {})
        prov.setdefault("seed", data.get("seed"))
        prov.setdefault("P", data.get("P"))
        tuples = [tuple(tuple(int(a) for a in v) for v in t) for t in data["tuples"]]
        return cls(data["mode"], int(data["m"]), int(data["k"]), int(data["n"]), tuples, prov)


def enumerate_X0(nu_n: ScaledDistribution, m: int, n: int, cap: int = X0_CAP) -> np.ndarray:
    """All vectors in ``{0..m-1}^n`` with exactly ``nu_n(i) * n`` coordinates equal to ``i``, in lex order."""
    if m < 2:
        raise ValidationError(f"m must be >= 2, got {m}")
    if len(nu_n) != m:
        raise ValidationError(f"distribution must live on 0..{m - 1}")
    counts = []
    for i, w in enumerate(nu_n):
        c = Fraction(w) * n
        if c.denominator != 1 or c < 0:
            raise ValidationError(f"nu({i})*n = {c} is not a non-negative integer")
        counts.append(int(c))
    if sum(counts) != n:
        raise ValidationError("distribution does not sum to 1")
    size = multinomial(counts)
    if size > cap:
        raise ResourceCapError(f"|X_0| = {size} exceeds the enumeration cap {cap}; use a smaller n")
    out = np.empty((size, n), dtype=np.int64)
    row = [0] * n
    left = list(counts)
    pos = 0

    def fill(j: int) -> None:
        nonlocal pos
        if j == n:
            out[pos] = row
            pos += 1
            return
        for v in range(m):
            if left[v]:
                left[v] -= 1
                row[j] = v
                fill(j + 1)
                left[v] += 1

    fill(0)
    return out


def lift(x, i: int, m: int, k: int) -> tuple[int, ...]:
    if not 1 <= i <= k:
        raise ValidationError(f"lift index {i} outside 1..{k}")
    x = tuple(int(a) for a in x)
    if any(not 0 <= a < m for a in x):
        raise ValidationError("lift input must have entries in 0..m-1")
    if i < k:
        tail = [0] * (k - 1)
        tail[i - 1] = 1
        return x + tuple(tail)
    return tuple(a - (m - 1) for a in x) + (-1,) * (k - 1)


def find_candidates(members: list[np.ndarray], m: int) -> np.ndarray:
    """Index tuples into ``members`` whose vectors sum to ``(m-1) * 1``."""
    n = members[0].shape[1]
    target = np.full(n, m - 1, dtype=np.int64)
    return kernels.zero_sum_search(members, target, 0, m)


def isolate(candidates: np.ndarray, ids: list[np.ndarray]) -> np.ndarray:
    """Rows of ``candidates`` whose member in every position occurs in no other candidate.

    ``ids[i]`` maps a position-``i`` index to a global identity (its row in ``X_0``).
    """
    if candidates.shape[0] == 0:
        return candidates
    keep = np.ones(candidates.shape[0], dtype=bool)
    for i, id_map in enumerate(ids):
        g = id_map[candidates[:, i]]
        _, inverse, counts = np.unique(g, return_inverse=True, return_counts=True)
        keep &= counts[inverse] == 1
    return candidates[keep]


def project_to_zm(tuples, m: int) -> list[tuple[tuple[int, ...], ...]]:
    out = []
    for t in tuples:
        head = tuple(tuple(int(a) % m for a in v) for v in t[:-1])
        last = tuple((int(a) - (m - 1)) % m for a in t[-1])
        out.append(head + (last,))
    return out


@dataclass
class ConstructionResult:
    integer: SumFreeCollection
    zm: SumFreeCollection
    stats: dict[str, Any]

    def csv_row(self) -> dict[str, Any]:
        s = self.stats
        return {
            "m": s["m"],
            "k": s["k"],
            "n": s["n"],
            "seed": s["seed"],
            "P": s["P"],
            "R": s["R"],
            "|X0|": s["X0"],
            "candidates": s["candidates"],
            "isolated": s["isolated"],
        }


@dataclass(frozen=True)
class ConstructOptions:
    prime: int | None = None
    method: str = "greedy"
    x0_cap: int = X0_CAP
    tol: float = 1e-12


def prepare(m: int, k: int, n: int, tol: float = 1e-12) -> tuple[RoundedPair, float, float]:
    """``(rounded pair, H(tau_tilde), H(nu_n))`` for the given parameters."""
    p = Params(m, k, n, tol)
    if n == 0 or n % k:
        raise ValidationError(f"n must be a positive multiple of k={k}, got {n}")
    tau = symmetric_marginal_tensor(nu(p), k, tol=tol)
    pair = round_tau(tau, n)
    return pair, pair.tau_tilde.entropy(), entropy(pair.nu_n)


def construct(m: int, k: int, n: int, seed: int, options: ConstructOptions | None = None) -> ConstructionResult:
    opts = options or ConstructOptions()
    pair, h_tau, h_nu = prepare(m, k, n, opts.tol)
    if not pair.positive:
        warnings.warn(
            f"rounded tensor has zero entries at n={n}; the isolation bound degrades",
            RuntimeWarning,
            stacklevel=2,
        )
    P = choose_prime(h_tau, h_nu, n, k, opts.prime)
    raised = False
    if P < k:
        # the colored line needs P >= k
        P = next_prime(k)
        raised = True
    fs: FieldSetup = progression_free_set(P, k, opts.method)
    line = colored_line(fs)
    X0 = enumerate_X0(pair.nu_n, m, n, opts.x0_cap)
    f = LinearMap.sample(seed, P, n + k - 1)
    base_img = kernels.hash_images(X0, np.array(f.coefficients[:n], dtype=np.int64), P, 0)
    offsets = f.lift_offsets(n, m, k)
    members_idx: list[np.ndarray] = []
    for i in range(k):
        column = np.array(sorted({t[i] for t in line}), dtype=np.int64)
        img = (base_img + offsets[i]) % P
        members_idx.append(np.nonzero(np.isin(img, column))[0])
    members = [X0[idx] for idx in members_idx]
    cands = find_candidates(members, m)
    iso = isolate(cands, members_idx)
    int_tuples = [
        tuple(tuple(int(a) for a in X0[members_idx[i][row[i]]]) for i in range(k)) for row in iso.tolist()
    ]
    stats = {
        "m": m,
        "k": k,
        "n": n,
        "seed": seed,
        "P": P,
        "R": fs.R,
        "X0": int(X0.shape[0]),
        "X_sizes": [int(len(ix)) for ix in members_idx],
        "candidates": int(cands.shape[0]),
        "isolated": int(iso.shape[0]),
    }
    provenance = {
        "seed": seed,
        "P": P,
        "P_raised_to_k": raised,
        "prime_formula": "override" if opts.prime is not None else PRIME_FORMULA,
        "method": opts.method,
        "R": fs.R,
        "H_tau": h_tau,
        "H_nu": h_nu,
        "nu_n": [f"{w.numerator}/{w.denominator}" for w in pair.nu_n],
        "rng": "numpy Philox keyed by seed; Generator.integers(0, P)",
    }
    provenance["stats"] = stats
    integer = SumFreeCollection("integer", m, k, n, int_tuples, dict(provenance))
    zm = SumFreeCollection("zm", m, k, n, project_to_zm(int_tuples, m), dict(provenance))
    return ConstructionResult(integer=integer, zm=zm, stats=stats)
