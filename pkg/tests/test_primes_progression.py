import sympy
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumfree.errors import ValidationError
from sumfree.primes import is_prime, next_prime, primes_up_to
from sumfree.progression import (
    FieldSetup,
    brute_force_nontrivial,
    colored_line,
    count_solutions,
    has_only_trivial_solutions,
    is_colored_sum_free_mod,
    progression_free_set,
)


def test_is_prime_matches_sympy_small():
    assert [p for p in range(3000) if is_prime(p)] == list(sympy.primerange(0, 3000))
    assert primes_up_to(3000) == list(sympy.primerange(0, 3001))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**64 - 1))
def test_is_prime_matches_sympy_64bit(n):
    assert is_prime(n) == sympy.isprime(n)


def test_next_prime():
    assert next_prime(16) == 17
    assert next_prime(17) == 17
    assert next_prime(1) == 2
    assert next_prime(0) == 2


def test_strong_pseudoprimes_rejected():
    # 3215031751 is a strong pseudoprime to bases 2, 3, 5, 7
    assert not is_prime(3215031751)
    assert not is_prime(3825123056546413051)


def test_small_sets():
    fs = progression_free_set(31, 3)
    assert set(fs.Y) >= {1, 2, 4, 5, 10} and fs.R >= 5
    assert progression_free_set(7, 3).Y == (1, 2)
    assert brute_force_nontrivial(fs.Y, 3) == []


@pytest.mark.parametrize("method", ["greedy", "behrend"])
@pytest.mark.parametrize("k", [3, 4, 5])
def test_sets_are_progression_free(method, k):
    for P in primes_up_to(400):
        if P < k:
            continue
        fs = progression_free_set(P, k, method)
        assert fs.Y and max(fs.Y) <= P // k and min(fs.Y) >= 1
        assert has_only_trivial_solutions(fs.Y, k)
        if fs.R <= 12:
            assert brute_force_nontrivial(fs.Y, k) == []


def test_convolution_count_matches_brute_force():
    Y = [1, 2, 3, 5, 8]
    for k in (3, 4):
        assert count_solutions(Y, k) - len(Y) == len(brute_force_nontrivial(Y, k))


def test_validation():
    with pytest.raises(ValidationError):
        progression_free_set(15, 3)
    with pytest.raises(ValidationError):
        progression_free_set(2, 3)
    with pytest.raises(ValidationError):
        progression_free_set(7, 3, "other")


def test_colored_line_examples():
    assert colored_line(FieldSetup(7, 3, (1,))) == [(1, 1, 5)]
    line = colored_line(FieldSetup(7, 3, (1, 2)))
    assert all(sum(t) % 7 == 0 for t in line)
    assert is_colored_sum_free_mod(line, 7)


@pytest.mark.parametrize("P,k", [(31, 3), (37, 4), (53, 5)])
def test_colored_line_is_sum_free(P, k):
    assert is_colored_sum_free_mod(colored_line(progression_free_set(P, k)), P)
