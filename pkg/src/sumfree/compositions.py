"""Compositions ``T_{r,l}``, symmetric tensors on them, and marginals.

A symmetric tensor is stored once per orbit, keyed by the non-increasing
representative of the orbit; the stored weight is the weight of *each*
element of the orbit, so the orbit contributes ``weight * orbit_size`` to the
total mass.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from numbers import Real
from typing import Iterator, Mapping

import numpy as np

from sumfree.distributions import ScaledDistribution, entropy_of_masses
from sumfree.errors import ConvergenceError, ValidationError

IPF_MAX_ITER = 10_000

Composition = tuple[int, ...]


def _compositions(r: int, arity: int) -> Iterator[Composition]:
    # lexicographic: first coordinate ascending
    if arity == 1:
        yield (r,)
        return
    for a in range(r + 1):
        for rest in _compositions(r - a, arity - 1):
            yield (a,) + rest


def _partitions(r: int, arity: int, cap: int | None = None) -> Iterator[Composition]:
    # non-increasing tuples of length arity summing to r
    cap = r if cap is None else cap
    if arity == 1:
        if r <= cap:
            yield (r,)
        return
    for a in range(min(r, cap), -1, -1):
        if a * arity < r:
            break
        for rest in _partitions(r - a, arity - 1, a):
            yield (a,) + rest


def canonical(t: Composition) -> Composition:
    """Orbit representative: the entries in non-increasing order."""
    return tuple(sorted(t, reverse=True))


def multinomial(counts) -> int:
    total = 0
    out = 1
    for c in counts:
        total += c
        out *= math.comb(total, c)
    return out


@lru_cache(maxsize=None)
def orbit_size(rep: Composition) -> int:
    return multinomial(Counter(rep).values())


@dataclass(frozen=True)
class CompositionTable:
    r: int
    arity: int
    elements: tuple[Composition, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def representatives(self) -> list[Composition]:
        return orbit_representatives(self.r, self.arity)


@lru_cache(maxsize=256)
def enumerate_compositions(r: int, arity: int) -> CompositionTable:
    if not isinstance(arity, int) or arity < 2:
        raise ValidationError(f"arity must be an integer >= 2, got {arity!r}")
    if not isinstance(r, int) or r < 0:
        raise ValidationError(f"r must be a non-negative integer, got {r!r}")
    return CompositionTable(r, arity, tuple(_compositions(r, arity)))


@lru_cache(maxsize=256)
def _representatives(r: int, arity: int) -> tuple[Composition, ...]:
    return tuple(sorted(_partitions(r, arity)))


def orbit_representatives(r: int, arity: int) -> list[Composition]:
    """All non-increasing representatives, sorted lexicographically."""
    if arity < 2:
        raise ValidationError(f"arity must be >= 2, got {arity}")
    return list(_representatives(r, arity))


class SymmetricTensor:
    """An ``S_l``-symmetric weight function on ``T_{r,l}``.

    ``weights`` maps each orbit representative to the weight of one element of
    that orbit.  Missing representatives have weight zero.
    """

    __slots__ = ("r", "arity", "weights")

    def __init__(self, r: int, arity: int, weights: Mapping[Composition, Real]):
        if arity < 2:
            raise ValidationError(f"arity must be >= 2, got {arity}")
        reps = set(_representatives(r, arity))
        clean: dict[Composition, Real] = {}
        for rep, w in weights.items():
            key = canonical(rep)
            if key not in reps:
                raise ValidationError(f"{rep} is not in T_({r},{arity})")
            if w < 0:
                raise ValidationError(f"negative weight {w} on orbit {key}")
            clean[key] = w
        self.r = r
        self.arity = arity
        self.weights = {rep: clean.get(rep, 0) for rep in _representatives(r, arity)}

    @property
    def table(self) -> CompositionTable:
        return enumerate_compositions(self.r, self.arity)

    @property
    def symmetric_flag(self) -> bool:
        return True

    def __getitem__(self, t: Composition):
        return self.weights[canonical(t)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymmetricTensor):
            return NotImplemented
        return (self.r, self.arity, self.weights) == (other.r, other.arity, other.weights)

    def __repr__(self) -> str:
        body = ", ".join(f"{rep}: {w}" for rep, w in self.weights.items())
        return f"SymmetricTensor(r={self.r}, arity={self.arity}, {{{body}}})"

    def items(self):
        return self.weights.items()

    def total_mass(self):
        return sum(w * orbit_size(rep) for rep, w in self.weights.items())

    def normalized(self) -> "SymmetricTensor":
        t = self.total_mass()
        if t == 0:
            raise ValidationError("cannot normalise the zero tensor")
        return SymmetricTensor(self.r, self.arity, {rep: w / t for rep, w in self.weights.items()})

    def to_dense(self) -> dict[Composition, Real]:
        return {t: self.weights[canonical(t)] for t in self.table.elements}

    def min_weight(self):
        return min(self.weights.values())

    def entropy(self) -> float:
        masses = []
        for rep, w in self.weights.items():
            masses.extend([w] * orbit_size(rep))
        return entropy_of_masses(masses)

    def to_floats(self) -> "SymmetricTensor":
        return SymmetricTensor(self.r, self.arity, {rep: float(w) for rep, w in self.weights.items()})

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "arity": self.arity,
            "orbits": [{"rep": list(rep), "weight": _num_to_json(w)} for rep, w in self.weights.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SymmetricTensor":
        weights = {tuple(o["rep"]): _num_from_json(o["weight"]) for o in data["orbits"]}
        return cls(int(data["r"]), int(data["arity"]), weights)


def _num_to_json(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return f"{x}/1"
    return float(x)


def _num_from_json(x):
    if isinstance(x, str):
        return Fraction(x)
    return float(x)


def _orbit_first_coordinate_counts(rep: Composition) -> dict[int, int]:
    """For each value v, the number of orbit elements whose first coordinate is v."""
    cnt = Counter(rep)
    out = {}
    for v, c in cnt.items():
        rest = dict(cnt)
        rest[v] -= 1
        out[v] = multinomial(rest.values())
    return out


def marginal(t: SymmetricTensor | Mapping[Composition, Real]) -> ScaledDistribution:
    """First-coordinate projection of a symmetric tensor.

    A plain mapping over elements is accepted but must be orbit-constant.
    """
    if not isinstance(t, SymmetricTensor):
        t = _as_symmetric(t)
    mu = [0] * (t.r + 1)
    for rep, w in t.weights.items():
        if w == 0:
            continue
        for v, c in _orbit_first_coordinate_counts(rep).items():
            mu[v] += w * c
    return ScaledDistribution(mu, check=False)


def _as_symmetric(w: Mapping[Composition, Real]) -> SymmetricTensor:
    r, arity = _shape_of(w)
    reps: dict[Composition, Real] = {}
    for t, x in w.items():
        key = canonical(t)
        if key in reps and reps[key] != x:
            raise ValidationError(f"tensor is not symmetric: orbit {key} has weights {reps[key]} and {x}")
        reps[key] = x
    for t in enumerate_compositions(r, arity).elements:
        if canonical(t) in reps and t not in w and reps[canonical(t)] != 0:
            raise ValidationError(f"tensor is not symmetric: {t} missing but its orbit is charged")
    return SymmetricTensor(r, arity, reps)


def _shape_of(w: Mapping[Composition, Real]) -> tuple[int, int]:
    if not w:
        raise ValidationError("empty weight map")
    first = next(iter(w))
    r, arity = sum(first), len(first)
    for t in w:
        if len(t) != arity or sum(t) != r or min(t) < 0:
            raise ValidationError(f"{t} is not in T_({r},{arity})")
    return r, arity


def coordinate_projection(w: Mapping[Composition, Real], coord: int) -> list:
    r, _ = _shape_of(w)
    out = [0] * (r + 1)
    for t, x in w.items():
        out[t[coord]] += x
    return out


def symmetrize(w: Mapping[Composition, Real]) -> SymmetricTensor:
    """Orbit average of an arbitrary non-negative weight map on ``T_{r,l}``."""
    r, arity = _shape_of(w)
    sums: dict[Composition, Real] = {}
    for t, x in w.items():
        if x < 0:
            raise ValidationError(f"negative weight {x} at {t}")
        key = canonical(t)
        sums[key] = sums.get(key, 0) + x
    return SymmetricTensor(r, arity, {rep: s / orbit_size(rep) for rep, s in sums.items()})


def _element_array(r: int, arity: int) -> np.ndarray:
    return np.array(enumerate_compositions(r, arity).elements, dtype=np.int64).reshape(-1, arity)


def maxent_with_marginals(
    target: ScaledDistribution,
    r: int,
    arity: int,
    tol: float = 1e-10,
    max_iter: int = IPF_MAX_ITER,
) -> SymmetricTensor:
    """Maximum-entropy tensor on ``T_{r,arity}`` whose coordinate projections equal ``target``.

    Cyclic iterative proportional fitting from the uniform tensor, which
    converges to the I-projection of the uniform distribution, i.e. the
    entropy maximiser.  The result is orbit-averaged at the end; by uniqueness
    of the maximiser this only removes round-off asymmetry.
    """
    if len(target) != r + 1:
        raise ValidationError(f"target must live on {{0,...,{r}}}, got support {target.support_max}")
    tgt = np.array(target.to_floats(), dtype=float)
    if np.any(tgt < 0):
        raise ValidationError("target has negative entries")
    s = tgt.sum()
    if abs(s - 1.0) > 1e-9:
        raise ValidationError(f"target must be normalised, total mass is {s}")
    mean = float(np.dot(np.arange(r + 1), tgt))
    if abs(mean - r / arity) > 1e-9:
        raise ValidationError(f"target mean {mean} differs from r/arity = {r / arity}")

    elems = _element_array(r, arity)
    w = np.full(len(elems), 1.0 / len(elems))
    residual = np.inf
    for it in range(1, max_iter + 1):
        for c in range(arity):
            proj = np.bincount(elems[:, c], weights=w, minlength=r + 1)
            ratio = np.divide(tgt, proj, out=np.zeros_like(tgt), where=proj > 0)
            w = w * ratio[elems[:, c]]
        residual = max(
            float(np.abs(np.bincount(elems[:, c], weights=w, minlength=r + 1) - tgt).sum())
            for c in range(arity)
        )
        if residual <= tol:
            break
    else:
        raise ConvergenceError("iterative proportional fitting did not converge", residual, max_iter)
    dense = {tuple(int(v) for v in t): float(x) for t, x in zip(elems, w)}
    return symmetrize(dense)


def all_orderings(rep: Composition) -> set[Composition]:
    return set(permutations(rep))
