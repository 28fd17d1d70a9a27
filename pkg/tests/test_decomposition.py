import math
from fractions import Fraction as F

import numpy as np
import pytest

from sumfree.compositions import marginal
from sumfree.decomposition import (
    SimpleCombination,
    alpha,
    is_tame,
    rationalize,
    slack_reduce,
    symmetric_marginal_tensor,
    tame_decompose,
)
from sumfree.distributions import Params, ScaledDistribution, nu
from sumfree.errors import NotTameError, PrecisionError, ValidationError
from sumfree.suites import random_tame
from sumfree.verification import admissible_js, alpha_property_failures, simple_cone_member


def test_alpha_examples():
    assert list(alpha(1, 3, 1)[0]) == [4, 2]
    assert list(alpha(3, 3, 1)[0]) == [0, 3, 0, 0]


def test_alpha_rejects_bad_j():
    with pytest.raises(ValidationError):
        alpha(9, 3, 1)
    with pytest.raises(ValidationError):
        alpha(3, 3, 4)


@pytest.mark.parametrize("k", (3, 4, 5, 6))
def test_alpha_properties_grid(k):
    for n in range(1, 25):
        for j in admissible_js(n, k):
            assert alpha_property_failures(n, k, j) == [], (n, k, j)


def test_forced_decomposition_t13():
    comb = tame_decompose(ScaledDistribution([F(2, 3), F(1, 3)]), 3)
    assert comb.coefficients == {(1, 0, 0): F(1, 3)}


def test_decomposition_4321():
    comb = tame_decompose(ScaledDistribution([F(4), F(3), F(2), F(1)]), 3)
    assert comb.coefficients == {(3, 0, 0): 1, (2, 1, 0): 2, (1, 1, 1): F(1, 3)}
    assert comb.evaluate() == ScaledDistribution([4, 3, 2, 1])


def test_not_tame_reports_condition():
    with pytest.raises(NotTameError) as exc:
        tame_decompose(ScaledDistribution([F(1), F(1), F(2), F(0)]), 3)
    assert "(ii)" in str(exc.value)
    assert not is_tame(ScaledDistribution([1, 1, 1, 1]), 3)


def test_float_input_rejected_by_exact_path():
    with pytest.raises(ValidationError):
        tame_decompose(ScaledDistribution([2 / 3, 1 / 3]), 3)


@pytest.mark.parametrize("k", (3, 4))
def test_random_tame_decompositions_agree_with_lp(k):
    rng = np.random.default_rng(11)
    for _ in range(60):
        n = int(rng.integers(0, 11))
        psi = random_tame(rng, n, k)
        comb = tame_decompose(psi, k)
        assert comb.evaluate() == psi
        assert all(c >= 0 for c in comb.coefficients.values())
        assert simple_cone_member(psi.weights, k)


def test_slack_reduce_hits_equality_and_stays_tame():
    rng = np.random.default_rng(5)
    for _ in range(40):
        psi = random_tame(rng, int(rng.integers(3, 12)), 3)
        phi, used = slack_reduce(psi, 3)
        assert is_tame(phi, 3)
        n = phi.support_max
        assert phi[0] == 2 * phi[n] + phi[n - 1]
        assert phi + used.evaluate() == psi


def test_lp_oracle_rejects_non_members():
    assert not simple_cone_member([0, 0, 0, 1], 3)
    assert simple_cone_member([4, 3, 2, 1], 3)


@pytest.mark.parametrize("m", range(2, 9))
@pytest.mark.parametrize("k", (3, 4, 5))
def test_symmetric_marginal_tensor(m, k):
    target = nu(Params(m, k))
    tau = symmetric_marginal_tensor(target, k)
    assert tau.min_weight() > 0
    assert tau.total_mass() == 1
    mu = marginal(tau)
    assert sum(abs(float(a) - b) for a, b in zip(mu, target.to_floats())) < 1e-9


def test_symmetric_marginal_tensor_exact_input():
    tau = symmetric_marginal_tensor(ScaledDistribution([F(2, 3), F(1, 3)]), 3)
    assert tau[(1, 0, 0)] == F(1, 3)


def test_precision_guard():
    # (1/2, 1/4, 1/4) on {0,1,2} with k=4 has mean 3/4 != 2/4
    with pytest.raises(ValidationError):
        symmetric_marginal_tensor(ScaledDistribution([F(1, 2), F(1, 4), F(1, 4)]), 4)
    # equal tail entries: strict monotonicity fails, so no positive tensor is guaranteed
    with pytest.raises(PrecisionError):
        symmetric_marginal_tensor(ScaledDistribution([F(5, 9), F(2, 9), F(2, 9)]), 3)


def test_rationalize_restores_mean():
    r = rationalize(nu(Params(5, 4)), 4)
    assert r.has_mean(4)
    assert abs(float(r.total()) - 1) < 1e-11


def test_simple_combination_json_roundtrip():
    c = SimpleCombination(3, 3)
    c.add((2, 1, 0), F(1, 2))
    assert SimpleCombination.from_json(c.to_json()).coefficients == c.coefficients
    with pytest.raises(ValidationError):
        c.add((2, 2, 0), 1)
