"""Constructive decomposition of tame scaled distributions into simple atoms.

An *n-simple atom* is ``1_{a_1} + ... + 1_{a_k}`` for a composition
``(a_1, ..., a_k)`` of ``n``.  Atoms depend only on the multiset of parts, so a
:class:`SimpleCombination` keys its coefficients by the non-increasing
representative.

Everything here runs in exact ``Fraction`` arithmetic.  Float inputs (such as
``nu_{m,k}``) go through :func:`rationalize` first, which also restores the
mean condition exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from sumfree.compositions import (
    Composition,
    SymmetricTensor,
    canonical,
    orbit_representatives,
    orbit_size,
)
from sumfree.distributions import ScaledDistribution
from sumfree.errors import NotTameError, PrecisionError, ValidationError

RATIONAL_DENOMINATOR = 10**12


@dataclass
class SimpleCombination:
    n: int
    k: int
    coefficients: dict[Composition, Fraction] = field(default_factory=dict)

    def add(self, atom: Sequence[int], coeff) -> None:
        if coeff == 0:
            return
        if coeff < 0:
            raise ValidationError(f"negative coefficient {coeff} for atom {tuple(atom)}")
        if len(atom) != self.k or sum(atom) != self.n or min(atom) < 0:
            raise ValidationError(f"{tuple(atom)} is not a composition of {self.n} into {self.k} parts")
        key = canonical(tuple(atom))
        self.coefficients[key] = self.coefficients.get(key, 0) + coeff

    def extend(self, other: "SimpleCombination", shift: int = 0) -> None:
        for atom, c in other.coefficients.items():
            self.add(tuple(a + shift for a in atom), c)

    def evaluate(self) -> ScaledDistribution:
        w = [Fraction(0)] * (self.n + 1)
        for atom, c in self.coefficients.items():
            for a in atom:
                w[a] += c
        return ScaledDistribution(w, check=False)

    def total(self):
        return sum(self.coefficients.values(), Fraction(0))

    def __len__(self) -> int:
        return len(self.coefficients)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "atoms": [
                {"tuple": list(a), "lambda": f"{Fraction(c).numerator}/{Fraction(c).denominator}"}
                for a, c in sorted(self.coefficients.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SimpleCombination":
        out = cls(int(data["n"]), int(data["k"]))
        for atom in data["atoms"]:
            out.add(tuple(atom["tuple"]), Fraction(atom["lambda"]))
        return out


@dataclass(frozen=True)
class ConditionVerdict:
    applies: bool
    holds: bool
    slack: Fraction | None = None


@dataclass(frozen=True)
class TameReport:
    n: int
    k: int
    mean: ConditionVerdict
    monotone: ConditionVerdict
    boundary: ConditionVerdict
    convexity: ConditionVerdict

    @property
    def tame(self) -> bool:
        return all(v.holds for v in (self.mean, self.monotone, self.boundary, self.convexity))

    def failures(self) -> list[str]:
        names = {"mean": "(i)", "monotone": "(ii)", "boundary": "(iii)", "convexity": "(iv)"}
        return [f"{label} {name}" for name, label in names.items() if not getattr(self, name).holds]

    def __bool__(self) -> bool:
        return self.tame


def _atom(*groups: tuple[int, int]) -> tuple[int, ...]:
    out: list[int] = []
    for value, count in groups:
        out.extend([value] * count)
    return tuple(out)


def _as_exact(psi: ScaledDistribution | Sequence) -> ScaledDistribution:
    w = psi.weights if isinstance(psi, ScaledDistribution) else tuple(psi)
    out = []
    for x in w:
        if isinstance(x, float):
            raise ValidationError("exact decomposition needs rational weights; call rationalize() first")
        out.append(Fraction(x))
    return ScaledDistribution(out)


def boundary_slack(psi: ScaledDistribution, k: int) -> Fraction:
    """``psi(0) - sum_{i=0}^{k-2} (k-1-i) psi(n-i)``; condition (iii) asks for >= 0."""
    n = psi.support_max
    return psi[0] - sum((k - 1 - i) * psi[n - i] for i in range(k - 1))


def convexity_slack(psi: ScaledDistribution, k: int) -> Fraction:
    """``psi(floor-1) + psi(ceil) - 2 psi(floor)`` at ``n/k``; condition (iv) asks for >= 0."""
    n = psi.support_max
    lo, hi = n // k, -(-n // k)
    return psi[lo - 1] + psi[hi] - 2 * psi[lo]


def is_tame(psi: ScaledDistribution, k: int) -> TameReport:
    n = psi.support_max
    res = psi.mean_residual(k)
    mean = ConditionVerdict(True, res == 0, -abs(res))
    if n >= 1:
        gaps = [psi[i] - psi[i + 1] for i in range(1, n)]
        worst = min(gaps) if gaps else Fraction(0)
        monotone = ConditionVerdict(True, worst >= 0, worst)
    else:
        monotone = ConditionVerdict(False, True)
    if n >= k:
        s = boundary_slack(psi, k)
        boundary = ConditionVerdict(True, s >= 0, s)
    else:
        boundary = ConditionVerdict(False, True)
    if n >= 2 * k:
        s = convexity_slack(psi, k)
        convexity = ConditionVerdict(True, s >= 0, s)
    else:
        convexity = ConditionVerdict(False, True)
    return TameReport(n, k, mean, monotone, boundary, convexity)


def alpha(n: int, k: int, j: int) -> tuple[ScaledDistribution, SimpleCombination]:
    """The auxiliary distribution ``alpha_j`` together with its atom witness."""
    if n < 1:
        raise ValidationError(f"alpha needs n >= 1, got n={n}")
    if not 1 <= j <= n:
        raise ValidationError(f"j={j} outside 1..n={n}")
    if k * (j + 1) < 2 * n:
        raise ValidationError(f"j={j} violates j+1 >= 2n/k for n={n}, k={k}")
    ell, r = divmod(n, j)
    ceil_nk = -(-n // k)
    comb = SimpleCombination(n, k)
    if ell == k:
        comb.add(_atom((j, k)), 1)
    elif r != ceil_nk or n < 2 * k:
        for i in range(r, j + 1):
            comb.add(_atom((j, ell - 1), (i, 1), (j + r - i, 1), (0, k - ell - 1)), 1)
    elif ell <= k - 2:
        for i in range(r + 1, j):
            comb.add(_atom((j, ell - 1), (i, 1), (j + r - i, 1), (0, k - ell - 1)), 1)
        c = Fraction(2, r + 1)
        for i in range(r + 1):
            comb.add(_atom((j, ell), (i, 1), (r - i, 1), (0, k - ell - 2)), c)
    else:
        for i in range(r + 1, j):
            comb.add(_atom((j, k - 2), (i, 1), (j + r - i, 1)), 1)
    return comb.evaluate(), comb


def _last_positive(psi: ScaledDistribution) -> int:
    for j in range(psi.support_max, -1, -1):
        if psi[j] > 0:
            return j
    return -1


def _subtract(psi: ScaledDistribution, a: ScaledDistribution, x) -> ScaledDistribution:
    out = [p - x * q for p, q in zip(psi, a)]
    for i, v in enumerate(out):
        if v < 0:
            raise AssertionError(f"negative weight {v} at index {i} after subtraction")
    return ScaledDistribution(out, check=False)


def _support_bound(j: int, n: int, k: int) -> None:
    if k * (j + 1) < 2 * n:
        raise AssertionError(f"support bound j+1 >= 2n/k fails: j={j}, n={n}, k={k}")


def slack_reduce(psi: ScaledDistribution, k: int) -> tuple[ScaledDistribution, SimpleCombination]:
    """Peel ``alpha_j`` atoms until condition (iii) holds with equality."""
    psi = _as_exact(psi)
    n = psi.support_max
    if n < k:
        raise ValidationError(f"slack_reduce needs n >= k, got n={n}, k={k}")
    report = is_tame(psi, k)
    if not report:
        raise NotTameError(f"input is not {n}-tame: {', '.join(report.failures())}", report)
    used = SimpleCombination(n, k)
    while True:
        s = boundary_slack(psi, k)
        if s == 0:
            return psi, used
        j = _last_positive(psi)
        if j < 0:
            raise AssertionError("positive slack on the zero distribution")
        _support_bound(j, n, k)
        a, wit = alpha(n, k, j)
        x = psi[j] / a[j]
        sa = boundary_slack(a, k)
        hit_equality = False
        if sa > 0 and s / sa <= x:
            x = s / sa
            hit_equality = True
        psi = _subtract(psi, a, x)
        for atom, c in wit.coefficients.items():
            used.add(atom, c * x)
        if hit_equality:
            assert boundary_slack(psi, k) == 0
            return psi, used
        assert psi[j] == 0


def _tail_inequality_holds(phi: ScaledDistribution, k: int) -> bool:
    n = phi.support_max
    rhs = sum(i * phi[n - i] for i in range(1, k - 1))
    rhs += sum((k - 1 - i) * phi[n - k + 1 - i] for i in range(k - 1))
    return phi[1] >= rhs


def _base_case(psi: ScaledDistribution, k: int) -> SimpleCombination:
    n = psi.support_max
    out = SimpleCombination(n, k)
    if n == 0:
        out.add((0,) * k, psi[0] / k)
        return out
    while not psi.is_zero():
        if psi[0] == 0:
            # mean n/k <= 1 with no mass at 0 forces n == k and support {1}
            if n != k or any(psi[i] for i in range(2, n + 1)):
                raise AssertionError("mass left off zero in a way the mean forbids")
            out.add((1,) * k, psi[1] / k)
            return out
        j = _last_positive(psi)
        if j == 0:
            raise AssertionError("distribution supported on 0 cannot have mean n/k > 0")
        a, wit = alpha(n, k, j)
        x = psi[j] / a[j]
        if a[0] > 0:
            x = min(x, psi[0] / a[0])
        psi = _subtract(psi, a, x)
        for atom, c in wit.coefficients.items():
            out.add(atom, c * x)
    return out


def tame_decompose(psi: ScaledDistribution, k: int, _level: int = 0) -> SimpleCombination:
    """Write an n-tame scaled distribution as a non-negative combination of n-simple atoms."""
    psi = _as_exact(psi)
    n = psi.support_max
    report = is_tame(psi, k)
    if not report:
        raise NotTameError(
            f"distribution at recursion level {_level} (n={n}) is not tame: {', '.join(report.failures())}",
            report,
            _level,
        )
    out = SimpleCombination(n, k)
    if psi.is_zero():
        return out
    if n <= k:
        return _base_case(psi, k)

    phi, used = slack_reduce(psi, k)
    out.extend(used)
    if n >= 2 * k and not _tail_inequality_holds(phi, k):
        raise AssertionError(f"tail inequality fails at level {_level}")
    theta = list(phi.weights)
    for i in range(k - 1):
        c = phi[n - i]
        if c == 0:
            continue
        atom = _atom((n - i, 1), (1, i), (0, k - 1 - i))
        out.add(atom, c)
        for a in atom:
            theta[a] -= c
    if theta[0] != 0 or any(theta[i] != 0 for i in range(n - k + 2, n + 1)):
        raise AssertionError(f"boundary subtraction left mass outside 1..n-k+1 at level {_level}")
    if min(theta) < 0:
        raise AssertionError(f"boundary subtraction went negative at level {_level}")
    eta = ScaledDistribution(theta[1 : n - k + 2], check=False)
    inner = tame_decompose(eta, k, _level + 1)
    out.extend(inner, shift=1)
    return out


def rationalize(nu: ScaledDistribution, k: int, max_denominator: int = RATIONAL_DENOMINATOR) -> ScaledDistribution:
    """Rational approximation of a float distribution with the mean restored exactly.

    Entries ``1..n`` are approximated with bounded denominators; entry ``0`` is
    then solved from the mean condition, so the result has mean ``n/k``
    exactly (its total mass is within the approximation error of 1).
    """
    n = nu.support_max
    w = [Fraction(x).limit_denominator(max_denominator) for x in nu.weights]
    if n >= 1:
        w[0] = Fraction(k, n) * sum((i - Fraction(n, k)) * w[i] for i in range(1, n + 1))
    if w[0] < 0:
        raise PrecisionError("rationalised distribution has negative mass at 0")
    return ScaledDistribution(w)


def atom_sum_profile(n: int, k: int) -> list[int]:
    """Sum over all ordered compositions of ``n`` into ``k`` parts of their atoms, per index."""
    if k == 1:
        return [0] * n + [1]
    return [k * math.comb(n - i + k - 2, k - 2) for i in range(n + 1)]


def _strict_margin(psi: ScaledDistribution, k: int) -> Fraction:
    n = psi.support_max
    gaps = [psi[i] - psi[i + 1] for i in range(n)] + [psi[n]]
    if n >= k:
        gaps.append(convexity_slack(psi, k))
    return min(gaps)


def _max_safe_x(psi: ScaledDistribution, k: int) -> Fraction:
    n = psi.support_max
    S = atom_sum_profile(n, k)
    bounds = [psi[n] / S[n]]
    for i in range(n):
        d = S[i] - S[i + 1]
        if d > 0:
            bounds.append((psi[i] - psi[i + 1]) / d)
    if n >= k:
        lo, hi = n // k, -(-n // k)
        d = S[lo - 1] + S[hi] - 2 * S[lo]
        if d > 0:
            bounds.append(convexity_slack(psi, k) / d)
    return min(bounds)


def symmetric_marginal_tensor(
    nu: ScaledDistribution,
    k: int,
    tol: float = 1e-12,
    max_denominator: int = RATIONAL_DENOMINATOR,
) -> SymmetricTensor:
    """A strictly positive ``S_k``-symmetric tensor on ``T_{n,k}`` with marginal ``nu``.

    Float inputs are rationalised first; the returned tensor has exact
    rational weights and its marginal is the normalised rationalisation.
    """
    n = nu.support_max
    if any(isinstance(x, float) for x in nu.weights):
        psi = rationalize(nu, k, max_denominator)
    else:
        psi = _as_exact(nu)
        if not psi.has_mean(k):
            raise ValidationError(f"input does not have mean n/k = {n}/{k}")
    if psi.total() <= 0:
        raise ValidationError("input has no mass")
    psi = psi.normalized()
    margin = _strict_margin(psi, k)
    if margin <= 100 * Fraction(tol):
        raise PrecisionError(
            f"strict hypotheses hold with margin {float(margin):.3e}, below 100*tol; supply a more precise input"
        )
    x = _max_safe_x(psi, k) / 2
    S = atom_sum_profile(n, k)
    shifted = ScaledDistribution([p - x * s for p, s in zip(psi, S)])
    comb = tame_decompose(shifted, k)
    lam: dict[Composition, Fraction] = dict(comb.coefficients)
    for rep in orbit_representatives(n, k):
        lam[rep] = lam.get(rep, Fraction(0)) + x * orbit_size(rep)
    total = sum(lam.values())
    return SymmetricTensor(n, k, {rep: c / (orbit_size(rep) * total) for rep, c in lam.items()})
