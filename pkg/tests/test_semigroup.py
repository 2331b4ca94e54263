"""Semigroup combinatorics against a brute-force sieve oracle."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trigjac.errors import ValidationError
from trigjac.semigroup import (
    GapProfile,
    Semigroup,
    conjugate_partition,
    family_generators,
    family_semigroup,
    from_generators,
    gap_profile,
    is_non_symmetric_family,
    validate_family,
)


def sieve_gaps(generators: tuple[int, ...], bound: int = 400) -> list[int]:
    """Independent oracle: mark reachable sums below a bound."""
    reachable = [False] * (bound + 1)
    reachable[0] = True
    for n in range(1, bound + 1):
        reachable[n] = any(g <= n and reachable[n - g] for g in generators)
    return [n for n in range(1, bound + 1) if not reachable[n]]


def test_known_gap_sets():
    assert from_generators((3, 4, 5)).gaps == (1, 2)
    assert from_generators((3, 7, 8)).gaps == (1, 2, 4, 5)
    assert from_generators((3, 5, 7)).gaps == (1, 2, 4)
    assert from_generators((2, 3)).gaps == (1,)


def test_family_generators_formula():
    assert family_generators(1, 2) == (3, 4, 5)
    assert family_generators(2, 3) == (3, 7, 8)
    assert family_generators(1, 3) == (3, 5, 7)
    # the raw tuple keeps the (3, 2r+s, 2s+r) writing order; Semigroup sorts
    assert family_generators(3, 1) == (3, 7, 5)
    assert family_semigroup(3, 1).generators == (3, 5, 7)


@pytest.mark.parametrize("r,s", [(1, 2), (2, 3), (1, 3), (2, 4), (3, 4), (1, 5), (0, 4), (0, 2)])
def test_gaps_match_sieve(r, s):
    sg = family_semigroup(r, s)
    assert list(sg.gaps) == sieve_gaps(sg.generators)


@pytest.mark.parametrize("r,s,genus", [(1, 2, 2), (2, 3, 4), (1, 3, 3), (0, 4, 3)])
def test_genus_formula(r, s, genus):
    sg = family_semigroup(r, s)
    assert sg.genus == genus == r + s - 1
    assert len(sg.gaps) == genus


def test_symmetry_classification():
    # non-symmetric exactly when r, s >= 1 and r != s mod 3
    assert not family_semigroup(1, 2).is_symmetric()
    assert not family_semigroup(2, 3).is_symmetric()
    assert family_semigroup(0, 4).is_symmetric()
    assert family_semigroup(0, 2).is_symmetric()
    assert is_non_symmetric_family(1, 2)
    assert not is_non_symmetric_family(0, 4)


def test_validate_family_rejects_divisible():
    with pytest.raises(ValidationError):
        validate_family(1, 1)   # s + 2r = 3
    with pytest.raises(ValidationError):
        validate_family(2, 5)   # s + 2r = 9
    with pytest.raises(ValidationError):
        validate_family(-1, 2)


def test_gap_profile_known_values():
    prof = gap_profile(family_semigroup(1, 2))
    assert prof.gaps == (1, 2)
    assert prof.alphas == (0, 0)
    assert prof.lambdas == (1, 1)

    prof = gap_profile(family_semigroup(2, 3))
    assert prof.gaps == (1, 2, 4, 5)
    assert prof.alphas == (0, 0, 1, 1)
    assert prof.lambdas == (2, 2, 1, 1)


def test_conjugate_partition_involution():
    assert conjugate_partition((3, 1, 1)) == (3, 1, 1)
    assert conjugate_partition((2, 2, 1, 1)) == (4, 2)
    assert conjugate_partition(conjugate_partition((4, 2, 1))) == (4, 2, 1)


valid_pairs = st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(
    lambda p: (p[1] + 2 * p[0]) % 3 != 0 and p[0] + p[1] >= 2
)


@given(valid_pairs)
@settings(max_examples=60, deadline=None)
def test_property_gaps_sieve(pair):
    r, s = pair
    sg = family_semigroup(r, s)
    assert list(sg.gaps) == sieve_gaps(sg.generators, bound=max(300, sg.conductor + 10))


@given(valid_pairs)
@settings(max_examples=60, deadline=None)
def test_property_semigroup_axioms(pair):
    r, s = pair
    sg = family_semigroup(r, s)
    g = sg.genus
    assert g == r + s - 1
    # conductor: everything from the conductor on is a non-gap
    assert sg.conductor not in sg.gaps
    assert all(gap < sg.conductor for gap in sg.gaps)
    # symmetric iff 2g - 1 is a gap
    assert sg.is_symmetric() == ((2 * g - 1) in sg.gaps)
    if g > 0:
        assert max(sg.gaps) <= 2 * g - 1
    # closure under addition up to the conductor region
    elems = set(sg.elements_upto(2 * sg.conductor + 6))
    small = [e for e in elems if e <= sg.conductor]
    for a in small:
        for b in small:
            assert a + b in elems


@given(valid_pairs)
@settings(max_examples=60, deadline=None)
def test_property_gap_profile_identities(pair):
    r, s = pair
    sg = family_semigroup(r, s)
    prof: GapProfile = gap_profile(sg)
    g = sg.genus
    nongaps = [n for n in sg.elements_upto(3 * g + 3)]
    # alpha_i counts non-gaps below the (i+1)-th gap: l_i = gap_i, alpha_i = l_i - (i+1)
    for i, gap in enumerate(prof.gaps):
        assert prof.alphas[i] == gap - (i + 1)
        assert prof.alphas[i] == sum(1 for n in nongaps if 0 < n < gap)
    # lambdas are the alphas reversed plus one... exactly the partition rows
    assert prof.lambdas == tuple(prof.alphas[g - 1 - i] + 1 for i in range(g))
    # partition rows weakly decreasing, total size = sum of alphas + g
    assert all(a >= b for a, b in zip(prof.lambdas, prof.lambdas[1:]))
    assert sum(prof.lambdas) == sum(prof.alphas) + g
    # Young rows agree with lambdas and conjugation is an involution
    assert prof.young_rows == prof.lambdas
    assert conjugate_partition(conjugate_partition(prof.lambdas)) == prof.lambdas


@given(st.sets(st.integers(2, 40), min_size=2, max_size=4).map(tuple))
@settings(max_examples=80, deadline=None)
def test_property_from_generators_arbitrary(gens):
    import math

    if math.gcd(*gens) != 1:
        with pytest.raises(ValidationError):
            from_generators(gens)
        return
    sg = from_generators(gens)
    assert list(sg.gaps) == sieve_gaps(sg.generators, bound=max(1700, sg.conductor + 10))
    assert sg.multiplicity == min(sg.generators)
