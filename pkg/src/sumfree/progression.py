"""Sets ``Y`` in ``{1, ..., floor(P/k)}`` where ``y_1 + ... + y_{k-1} = (k-1) y_k`` forces equality."""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from sumfree.errors import ResourceCapError, ValidationError
from sumfree.primes import is_prime

BEHREND_ENUM_CAP = 2_000_000


@dataclass(frozen=True)
class FieldSetup:
    P: int
    k: int
    Y: tuple[int, ...]
    method: str = "greedy"

    @property
    def R(self) -> int:
        return len(self.Y)

    def to_json(self) -> dict:
        return {"P": self.P, "k": self.k, "Y": list(self.Y), "method": self.method}


def _greedy(N: int, k: int) -> list[int]:
    # sums[t] = set of sums of t-element multisets of the current Y
    sums: list[set[int]] = [{0}] + [set() for _ in range(k - 1)]
    Y: list[int] = []
    for c in range(1, N + 1):
        # c as the right-hand side with the left side drawn from Y ∪ {c} (not all c)
        bad = any(t * c in sums[t] for t in range(1, k))
        # c on the left j times, an existing y on the right
        if not bad:
            for y in Y:
                if any((k - 1) * y - j * c in sums[k - 1 - j] for j in range(1, k - 1)):
                    bad = True
                    break
        if bad:
            continue
        Y.append(c)
        new = [set(s) for s in sums]
        for t in range(1, k):
            for j in range(1, t + 1):
                new[t].update(v + j * c for v in sums[t - j])
        sums = new
    return Y


def _behrend(N: int, k: int) -> list[int]:
    best: list[int] = [1]
    for d in range(2, N + 1):
        h = -(-d // (k - 1))
        if h < 2:
            continue
        # one digit only ever gives a one-element shell
        if 1 + (h - 1) * (d + 1) > N:
            break
        D = 2
        while True:
            top = 1 + (h - 1) * (d**D - 1) // (d - 1)
            if top > N:
                break
            if h**D > BEHREND_ENUM_CAP:
                break
            shells: dict[int, list[int]] = defaultdict(list)
            for digits in itertools.product(range(h), repeat=D):
                x = 1 + sum(g * d**i for i, g in enumerate(digits))
                shells[sum(g * g for g in digits)].append(x)
            shell = max(shells.values(), key=lambda v: (len(v), -max(v)))
            if len(shell) > len(best):
                best = sorted(shell)
            D += 1
    return best


def progression_free_set(P: int, k: int, method: str = "greedy") -> FieldSetup:
    if not is_prime(P):
        raise ValidationError(f"P={P} is not prime")
    if k < 3:
        raise ValidationError(f"k must be >= 3, got {k}")
    if P < k:
        raise ValidationError(f"P={P} must be at least k={k}")
    N = P // k
    if method == "greedy":
        if N > 200_000:
            raise ResourceCapError(f"greedy progression-free search capped at P/k <= 200000 (got {N})")
        Y = _greedy(N, k)
    elif method == "behrend":
        Y = _behrend(N, k)
    else:
        raise ValidationError(f"unknown method {method!r}; use 'greedy' or 'behrend'")
    return FieldSetup(P=P, k=k, Y=tuple(Y), method=method)


def count_solutions(Y, k: int) -> int:
    """Number of integer solutions of ``y_1 + ... + y_{k-1} = (k-1) y_k`` in ``Y``, trivial ones included."""
    Y = list(Y)
    if not Y:
        return 0
    top = max(Y)
    ind = np.zeros(top + 1, dtype=np.int64)
    ind[Y] = 1
    conv = np.array([1], dtype=np.int64)
    for _ in range(k - 1):
        conv = np.convolve(conv, ind)
    return int(sum(conv[(k - 1) * y] for y in Y if (k - 1) * y < len(conv)))


def has_only_trivial_solutions(Y, k: int) -> bool:
    return count_solutions(Y, k) == len(set(Y))


def brute_force_nontrivial(Y, k: int) -> list[tuple[int, ...]]:
    """All nontrivial solutions by exhaustive search; meant for small ``Y``."""
    Y = sorted(set(Y))
    out = []
    for left in itertools.product(Y, repeat=k - 1):
        s = sum(left)
        if s % (k - 1):
            continue
        y = s // (k - 1)
        if y in Y and not all(v == y for v in left):
            out.append(left + (y,))
    return out


def colored_line(fs: FieldSetup) -> list[tuple[int, ...]]:
    """The tuples ``(y, ..., y, -(k-1) y) mod P`` for ``y`` in ``Y``."""
    return [(y,) * (fs.k - 1) + ((-(fs.k - 1) * y) % fs.P,) for y in fs.Y]


def is_colored_sum_free_mod(tuples, modulus: int) -> bool:
    """Exhaustive check that cross-tuple sums vanish mod ``modulus`` only on the diagonal."""
    L = len(tuples)
    if L == 0:
        return True
    k = len(tuples[0])
    for idx in itertools.product(range(L), repeat=k):
        s = sum(tuples[j][i] for i, j in enumerate(idx)) % modulus
        diagonal = all(j == idx[0] for j in idx)
        if (s == 0) != diagonal:
            return False
    return True


def behrend_size_bound(P: int, k: int) -> float:
    """The guaranteed size ``P * exp(-12 sqrt(log P log k))`` of the colored line."""
    return P * math.exp(-12 * math.sqrt(math.log(P) * math.log(k)))
