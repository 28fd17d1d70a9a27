"""Capacity constants and finite distributions on {0, ..., n}.

The capacity ``Gamma_{m,k}`` is the minimum over ``0 < g < 1`` of
``(1 + g + ... + g^(m-1)) / g^((m-1)/k)``.  Its minimiser ``gamma_{m,k}`` is the
unique root in ``(0, 1)`` of the integer polynomial
``sum_i (k*i - (m-1)) g^i``; the coefficients change sign exactly once, so the
root is bracketed by bisection with an exact rational certificate.

Numeric boundary: ``gamma_root`` brackets the root with exact rationals and
returns a float; ``capacity`` and ``nu`` are float-valued.  Everything
downstream that needs exact arithmetic rationalises ``nu`` explicitly (see
``sumfree.decomposition.rationalize``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterable, Sequence

from sumfree.errors import ValidationError

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class Params:
    m: int
    k: int
    n: int = 0
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise ValidationError(f"m must be an integer >= 2, got {self.m!r}")
        if not isinstance(self.k, int) or self.k < 3:
            raise ValidationError(f"k must be an integer >= 3, got {self.k!r}")
        if not isinstance(self.n, int) or self.n < 0:
            raise ValidationError(f"n must be a non-negative integer, got {self.n!r}")
        if not self.tol > 0:
            raise ValidationError(f"tol must be positive, got {self.tol!r}")


@dataclass(frozen=True)
class CapacityResult:
    gamma: float
    capacity: float
    entropy_nu: float


class ScaledDistribution:
    """Non-negative weights on ``{0, ..., n}``; not necessarily normalised.

    Weights may be ``Fraction`` (exact mode) or ``float``.  Arithmetic keeps
    whatever number type it is given.
    """

    __slots__ = ("weights",)

    def __init__(self, weights: Iterable[Real], *, check: bool = True):
        w = tuple(weights)
        if not w:
            raise ValidationError("a scaled distribution needs at least one weight")
        if check:
            for i, x in enumerate(w):
                if x < 0:
                    raise ValidationError(f"negative weight {x} at index {i}")
        self.weights = w

    @property
    def support_max(self) -> int:
        return len(self.weights) - 1

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)

    def __eq__(self, other) -> bool:
        if isinstance(other, ScaledDistribution):
            return self.weights == other.weights
        return NotImplemented

    def __hash__(self):
        return hash(self.weights)

    def __repr__(self) -> str:
        return f"ScaledDistribution({[str(x) for x in self.weights]})"

    def total(self):
        return sum(self.weights)

    def first_moment(self):
        return sum(i * x for i, x in enumerate(self.weights))

    def mean_residual(self, k: int):
        """``sum i*w(i) - (n/k) * sum w(i)``; zero exactly when the mean is n/k."""
        n = self.support_max
        return self.first_moment() - Fraction(n, k) * self.total()

    def has_mean(self, k: int, tol: float = 0.0) -> bool:
        res = self.mean_residual(k)
        if tol == 0:
            return res == 0
        return abs(res) <= tol * max(1.0, float(self.total()))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.weights)

    def normalized(self) -> "ScaledDistribution":
        t = self.total()
        if t == 0:
            raise ValidationError("cannot normalise the zero distribution")
        return ScaledDistribution([x / t for x in self.weights], check=False)

    def scaled(self, c) -> "ScaledDistribution":
        return ScaledDistribution([c * x for x in self.weights], check=False)

    def __add__(self, other: "ScaledDistribution") -> "ScaledDistribution":
        _same_support(self, other)
        return ScaledDistribution([a + b for a, b in zip(self, other)], check=False)

    def __sub__(self, other: "ScaledDistribution") -> "ScaledDistribution":
        _same_support(self, other)
        return ScaledDistribution([a - b for a, b in zip(self, other)], check=False)

    def to_floats(self) -> list[float]:
        return [float(x) for x in self.weights]


def _same_support(a: ScaledDistribution, b: ScaledDistribution) -> None:
    if len(a) != len(b):
        raise ValidationError(f"support mismatch: {a.support_max} vs {b.support_max}")


def gamma_polynomial(m: int, k: int) -> list[int]:
    """Coefficients (constant term first) of ``sum_i (k*i - (m-1)) g^i``."""
    return [k * i - (m - 1) for i in range(m)]


def _poly_eval(coeffs: Sequence[int], x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def gamma_bracket(p: Params, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Exact dyadic bracket ``(lo, hi)`` of the root, with ``hi - lo <= 2**-bits``.

    The polynomial is negative at ``lo`` and non-negative at ``hi``.  If a
    bisection midpoint is an exact root, ``lo == hi``.
    """
    coeffs = gamma_polynomial(p.m, p.k)
    lo, hi = Fraction(0), Fraction(1)
    assert _poly_eval(coeffs, lo) < 0 < _poly_eval(coeffs, hi)
    width = Fraction(1, 2**bits)
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = _poly_eval(coeffs, mid)
        if v == 0:
            return mid, mid
        if v < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def gamma_root(p: Params) -> float:
    # bracket far below tol so downstream means/entropies are limited only by float rounding
    bits = max(64, math.ceil(-math.log2(p.tol)) + 8)
    lo, hi = gamma_bracket(p, bits)
    return float((lo + hi) / 2)


def nu(p: Params) -> ScaledDistribution:
    g = gamma_root(p)
    powers = [g**i for i in range(p.m)]
    s = math.fsum(powers)
    return ScaledDistribution([x / s for x in powers], check=False)


def capacity(p: Params) -> CapacityResult:
    g = gamma_root(p)
    cap = math.fsum(g**i for i in range(p.m)) / g ** ((p.m - 1) / p.k)
    h = entropy(nu(p))
    if abs(h - math.log(cap)) > 10 * max(p.tol, 1e-14):
        raise AssertionError(f"entropy of nu ({h}) disagrees with log capacity ({math.log(cap)})")
    return CapacityResult(gamma=g, capacity=cap, entropy_nu=h)


def entropy_of_masses(masses: Iterable[Real]) -> float:
    """Entropy in nats of a normalised list of masses, with 0 log 0 = 0."""
    h = 0.0
    for x in masses:
        if x < 0:
            raise ValidationError(f"negative mass {x}")
        if x > 0:
            xf = float(x)
            h -= xf * math.log(xf)
    return h


def entropy(d: ScaledDistribution | Sequence[Real], tol: float = 1e-9) -> float:
    w = d.weights if isinstance(d, ScaledDistribution) else tuple(d)
    for x in w:
        if x < 0:
            raise ValidationError(f"negative weight {x}")
    if abs(float(sum(w)) - 1.0) > tol:
        raise ValidationError(f"distribution must be normalised, total mass is {float(sum(w))}")
    return entropy_of_masses(w)


def mean(d: ScaledDistribution | Sequence[Real]):
    w = d.weights if isinstance(d, ScaledDistribution) else tuple(d)
    return sum(i * x for i, x in enumerate(w))
