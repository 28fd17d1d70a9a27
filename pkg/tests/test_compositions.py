import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumfree.compositions import (
    SymmetricTensor,
    coordinate_projection,
    enumerate_compositions,
    marginal,
    maxent_with_marginals,
    multinomial,
    orbit_representatives,
    orbit_size,
    symmetrize,
)
from sumfree.distributions import ScaledDistribution, entropy
from sumfree.errors import ValidationError


def brute_compositions(r, arity):
    return sorted(t for t in itertools.product(range(r + 1), repeat=arity) if sum(t) == r)


def test_small_tables():
    assert enumerate_compositions(1, 3).elements == ((0, 0, 1), (0, 1, 0), (1, 0, 0))
    assert len(enumerate_compositions(2, 3)) == 6
    assert len(enumerate_compositions(4, 4)) == 35


@pytest.mark.parametrize("r", range(0, 6))
@pytest.mark.parametrize("arity", range(2, 5))
def test_enumeration_matches_brute_force(r, arity):
    table = enumerate_compositions(r, arity)
    assert list(table.elements) == brute_compositions(r, arity)
    assert len(table) == math.comb(r + arity - 1, arity - 1)
    assert sum(orbit_size(rep) for rep in orbit_representatives(r, arity)) == len(table)


def test_arity_below_two_rejected():
    with pytest.raises(ValidationError):
        enumerate_compositions(2, 1)


def test_marginal_of_uniform_t13():
    tau = SymmetricTensor(1, 3, {(1, 0, 0): Fraction(1, 3)})
    assert marginal(tau) == ScaledDistribution([Fraction(2, 3), Fraction(1, 3)])


def test_marginal_rejects_asymmetric_mapping():
    with pytest.raises(ValidationError):
        marginal({(1, 0): Fraction(1), (0, 1): Fraction(0)})


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 4), st.integers(2, 4), st.data())
def test_marginal_equals_every_coordinate_projection(r, arity, data):
    reps = orbit_representatives(r, arity)
    w = {rep: Fraction(data.draw(st.integers(0, 9))) for rep in reps}
    if not any(w.values()):
        w[reps[0]] = Fraction(1)
    tau = SymmetricTensor(r, arity, w).normalized()
    dense = tau.to_dense()
    mu = list(marginal(tau))
    for c in range(arity):
        assert coordinate_projection(dense, c) == mu
    assert sum(mu) == 1
    assert sum(i * x for i, x in enumerate(mu)) == Fraction(r, arity)


def test_symmetrize_averages_orbits():
    t = symmetrize({(2, 0): Fraction(1), (0, 2): Fraction(0), (1, 1): Fraction(0)})
    assert t[(2, 0)] == t[(0, 2)] == Fraction(1, 2)


def test_json_roundtrip():
    tau = SymmetricTensor(2, 3, {(2, 0, 0): Fraction(1, 9), (1, 1, 0): Fraction(1, 9)}).normalized()
    assert SymmetricTensor.from_json(tau.to_json()) == tau


def test_maxent_t13_is_uniform():
    tau = maxent_with_marginals(ScaledDistribution([Fraction(2, 3), Fraction(1, 3)]), 1, 3)
    assert float(tau[(1, 0, 0)]) == pytest.approx(1 / 3, abs=1e-12)


def test_maxent_beats_other_tensors_with_same_marginal():
    other = SymmetricTensor(3, 2, {(3, 0): Fraction(1, 8), (2, 1): Fraction(3, 8)})
    mu = marginal(other)
    best = maxent_with_marginals(mu, 3, 2)
    assert best.entropy() >= other.entropy() - 1e-12
    assert [float(x) for x in marginal(best)] == pytest.approx([float(x) for x in mu], abs=1e-9)


def test_maxent_validates_mean():
    with pytest.raises(ValidationError):
        maxent_with_marginals(ScaledDistribution([0.5, 0.5]), 1, 3)


def test_multinomial():
    assert multinomial([2, 1, 1]) == 12
    assert entropy([Fraction(1, 2), Fraction(1, 2)]) == pytest.approx(math.log(2))
