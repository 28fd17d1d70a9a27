"""Rounding a symmetric tensor to denominator ``n`` and reporting the entropy cost."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from sumfree.compositions import SymmetricTensor, marginal, maxent_with_marginals, orbit_size
from sumfree.distributions import ScaledDistribution, entropy
from sumfree.errors import ValidationError


@dataclass(frozen=True)
class RoundedPair:
    n: int
    tau_tilde: SymmetricTensor
    nu_n: ScaledDistribution
    linf_gap: float

    @property
    def m(self) -> int:
        return self.tau_tilde.r + 1

    @property
    def k(self) -> int:
        return self.tau_tilde.arity

    @property
    def positive(self) -> bool:
        return self.tau_tilde.min_weight() > 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "tau_tilde": self.tau_tilde.to_json(),
            "nu_n": [f"{x.numerator}/{x.denominator}" for x in self.nu_n],
            "linf_gap": self.linf_gap,
            "positive": self.positive,
        }


@dataclass(frozen=True)
class GapReport:
    n: int
    h_tau_tilde: float
    h_tau0: float
    gap: float
    implied_constant: float

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "h_tau_tilde": self.h_tau_tilde,
            "h_tau0": self.h_tau0,
            "gap": self.gap,
            "implied_constant": self.implied_constant,
        }


def round_tau(tau: SymmetricTensor, n: int) -> RoundedPair:
    """Round every orbit except that of ``(m-1, 0, ..., 0)`` down to a multiple of ``k/n``.

    The leftover mass is split evenly over the ``k`` permutations of
    ``(m-1, 0, ..., 0)``; since ``k | n`` each of them is a multiple of ``1/n``.
    """
    k, r = tau.arity, tau.r
    if n <= 0 or n % k:
        raise ValidationError(f"n must be a positive multiple of k={k}, got {n}")
    total = tau.total_mass()
    if abs(float(total) - 1.0) > 1e-9:
        raise ValidationError(f"tau must be normalised, total mass is {float(total)}")
    corner = (r,) + (0,) * (k - 1)
    step = Fraction(k, n)
    rounded: dict[tuple[int, ...], Fraction] = {}
    used = Fraction(0)
    for rep, w in tau.items():
        if rep == corner:
            continue
        v = math.floor(Fraction(w) / step) * step
        rounded[rep] = v
        used += v * orbit_size(rep)
    rounded[corner] = (1 - used) / k
    if rounded[corner] < 0:
        raise AssertionError("rounding produced a negative corner weight")
    tilde = SymmetricTensor(r, k, rounded)
    nu_n = marginal(tilde)
    if tilde.total_mass() != 1:
        raise AssertionError("rounded tensor lost mass")
    if nu_n.first_moment() != Fraction(r, k):
        raise AssertionError("rounded marginal has the wrong mean")
    for rep, v in rounded.items():
        if (v * n).denominator != 1:
            raise AssertionError(f"orbit {rep} weight {v} is not a multiple of 1/{n}")
    gap = max(abs(float(rounded[rep]) - float(w)) for rep, w in tau.items())
    return RoundedPair(n=n, tau_tilde=tilde, nu_n=nu_n, linf_gap=gap)


def entropy_gap_report(pair: RoundedPair, tol: float = 1e-10) -> GapReport:
    """Entropy of the max-entropy tensor with marginal ``nu_n`` minus that of ``tau_tilde``."""
    h_tilde = pair.tau_tilde.entropy()
    tau0 = maxent_with_marginals(pair.nu_n, pair.tau_tilde.r, pair.k, tol=tol)
    h0 = tau0.entropy()
    gap = h0 - h_tilde
    implied = gap * pair.n / math.log(pair.n) if pair.n > 1 else math.inf
    return GapReport(n=pair.n, h_tau_tilde=h_tilde, h_tau0=h0, gap=gap, implied_constant=implied)


def marginal_entropy(pair: RoundedPair) -> float:
    return entropy(pair.nu_n)
