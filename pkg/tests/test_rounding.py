import math
from fractions import Fraction

import pytest

from sumfree.compositions import marginal
from sumfree.decomposition import symmetric_marginal_tensor
from sumfree.distributions import Params, nu
from sumfree.errors import ValidationError
from sumfree.rounding import entropy_gap_report, round_tau


@pytest.fixture(scope="module")
def taus():
    return {(m, k): symmetric_marginal_tensor(nu(Params(m, k)), k) for m in range(2, 6) for k in (3, 4)}


@pytest.mark.parametrize("m", range(2, 6))
@pytest.mark.parametrize("k,n", [(3, 9), (3, 12), (3, 30), (4, 8), (4, 20)])
def test_rounding_exactness(taus, m, k, n):
    pair = round_tau(taus[(m, k)], n)
    for _, w in pair.tau_tilde.items():
        assert (Fraction(w) * n).denominator == 1
    assert pair.tau_tilde.total_mass() == 1
    assert marginal(pair.tau_tilde) == pair.nu_n
    assert pair.nu_n.first_moment() == Fraction(m - 1, k)
    assert pair.linf_gap <= m**k / n


def test_rounding_needs_multiple_of_k(taus):
    with pytest.raises(ValidationError):
        round_tau(taus[(2, 3)], 7)


def test_gap_report_is_nonnegative(taus):
    for n in (30, 60, 120):
        rep = entropy_gap_report(round_tau(taus[(3, 3)], n))
        assert rep.gap >= -1e-9
        assert math.isfinite(rep.implied_constant)
