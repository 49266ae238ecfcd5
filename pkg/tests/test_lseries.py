import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticeforms.discriminant import discriminant_group, q_disc
from latticeforms.errors import (
    CoefficientZero,
    IndexIncongruent,
    MisalignedTruncation,
    NotInDual,
    RangeInsufficient,
    TableIncomplete,
)
from latticeforms.lattice import direct_sum, validate_lattice
from latticeforms.lseries import (
    LSeriesQuery,
    SyntheticTable,
    definite_sublattice,
    inclusion_exclusion_check,
    isolating_modulus,
    lseries_by_inclusion_exclusion,
    lseries_eval,
    lseries_sublattice,
    prime_factors,
    primes_up_to,
    primitivity_check,
    represent_index,
    split_from_full,
    split_lattice,
    symmetry_gate,
    witt_limit_sequence,
)
from latticeforms.theta import CoefficientTable, theta_coefficients

from conftest import A1, A2, H

ONE = SyntheticTable((), Fraction(10**6), lambda lam, n: 1, 1.0)
ZERO = SyntheticTable((), Fraction(10**6), lambda lam, n: 0, 0.0)


def random_table(seed, divisors=(2,), max_norm=2500):
    rng = random.Random(seed)
    cache = {}

    def fn(lam, n):
        key = (lam, n)
        if key not in cache:
            cache[key] = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        return cache[key]

    return SyntheticTable(divisors, Fraction(max_norm), fn, 1.5)


def test_helpers():
    assert prime_factors(360) == (2, 3, 5)
    assert prime_factors(math.factorial(12)) == primes_up_to(12) == (2, 3, 5, 7, 11)
    assert prime_factors(1) == ()
    assert primes_up_to(1) == ()


# -- truncated series -----------------------------------------------------------------


def test_zero_and_zeta():
    assert lseries_eval(ZERO, LSeriesQuery((), 1, 4, 1, 50)).value == 0
    res = lseries_eval(ONE, LSeriesQuery((), 1, 4, 1, 1000))
    assert res.value == sum(n**-4.0 for n in range(1, 1001))
    zeta4 = math.pi**4 / 90
    assert 0 <= zeta4 - res.value.real <= res.tail_bound


def test_euler_factor_on_truncations():
    for p in (2, 3, 5):
        full = lseries_eval(ONE, LSeriesQuery((), 1, 4, 1, 1000)).value
        restricted = lseries_eval(ONE, LSeriesQuery((), 1, 4, p, 1000)).value
        assert restricted == sum(n**-4.0 for n in range(1, 1001) if n % p)
        inner = lseries_eval(ONE, LSeriesQuery((), 1, 4, 1, 1000 // p)).value
        assert abs(restricted - (full - p**-4 * inner)) < 1e-12


def test_table_incomplete():
    t = theta_coefficients(A1, 10)
    with pytest.raises(TableIncomplete):
        lseries_eval(t, LSeriesQuery((0,), 1, 3, 1, 4))


def test_radical_invariance():
    t = random_table(0)
    for N, p in [(6, 2), (6, 3), (10, 5), (15, 3)]:
        a = lseries_eval(t, LSeriesQuery((1,), Fraction(1, 4), 2.5, N, 40)).value
        b = lseries_eval(t, LSeriesQuery((1,), Fraction(1, 4), 2.5, N * p, 40)).value
        assert a == b


def test_theta_series_monotone():
    t = theta_coefficients(A2, 400)
    vals = [lseries_eval(t, LSeriesQuery((0,), 1, 3, 1, n)).value.real for n in range(1, 20)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5, 7]), st.sampled_from([1, 2, 3, 5, 6, 7, 10]))
def test_inclusion_exclusion_random(seed, p, N):
    if N % p == 0:
        return
    t = random_table(seed)
    assert inclusion_exclusion_check(t, (1,), Fraction(1, 4), N, p, 2.0 + 0.5j, 45) < 1e-12


def test_inclusion_exclusion_examples():
    assert inclusion_exclusion_check(ONE, (), 1, 1, 2, 4, 1000) < 1e-12
    assert inclusion_exclusion_check(ZERO, (), 1, 1, 2, 4, 1000) == 0
    with pytest.raises(MisalignedTruncation):
        inclusion_exclusion_check(ONE, (), 1, 1, 2, 4, 1000, n_max_p=499)
    with pytest.raises(ValueError):
        inclusion_exclusion_check(ONE, (), 1, 2, 2, 4, 100)


@pytest.mark.parametrize("N", [1, 2, 6, 10, 15, 30])
def test_cascade_matches_direct(N):
    t = random_table(N)
    direct = lseries_eval(t, LSeriesQuery((1,), Fraction(1, 4), 3, N, 45)).value
    assert abs(lseries_by_inclusion_exclusion(t, (1,), Fraction(1, 4), N, 3, 45) - direct) < 1e-12


def test_witt_sequence():
    seq = witt_limit_sequence(ONE, LSeriesQuery((), 1, 3, 1, 200), 2, steps=4)
    assert [s for s, _ in seq] == [2.5, 2.25, 2.125, 2.0625]
    vals = [r.value.real for _, r in seq]
    assert vals == sorted(vals)


# -- sublattice series ------------------------------------------------------------------


def test_sublattice_rank_one():
    L1 = definite_sublattice(H, [[1, 1]])
    assert L1.lattice.gram == ((2,),)
    got = lseries_sublattice(ONE, L1, (), 1, 2, 100)
    assert abs(got - 2 * sum(n**-4.0 for n in range(1, 11))) < 1e-14
    assert lseries_sublattice(ZERO, L1, (), 1, 2, 100) == 0


def test_sublattice_rank_one_pairing():
    # parent A1 + H, L1 = Z(e1 + e2); l runs over n(e1 + e2), class 0, q = n^2
    L = direct_sum(A1, H)
    t = theta_coefficients(A1, 40)
    tab = SyntheticTable((2,), Fraction(40), lambda lam, n: t(lam, n), 2.0)
    L1 = definite_sublattice(L, [[0, 1, 1]])
    got = lseries_sublattice(tab, L1, (0,), 1, 1.5, 36)
    want = 2 * sum(t((0,), n * n) / (n * n) ** 1.5 for n in range(1, 7))
    assert abs(got - want) < 1e-14


def test_sublattice_negative_definite():
    L1 = definite_sublattice(H, [[1, -1]])
    # q(l) < 0 never meets a holomorphic table
    assert lseries_sublattice(ONE, L1, (), 1, 2, 100) == 0


# -- hyperbolic splitting -----------------------------------------------------------


def test_represent_examples():
    SL = split_lattice(A1)
    assert represent_index(SL, (1,), Fraction(1, 4)) == (Fraction(1, 2), 0, 1)
    assert represent_index(SL, (0,), 1) == (0, 1, 1)
    assert represent_index(SL, (0,), 0) == (0, 0, 1)
    with pytest.raises(IndexIncongruent):
        represent_index(SL, (1,), 1)


def test_primitivity_examples():
    L = split_lattice(A1).full
    assert primitivity_check(L, (0, 0, 1))
    assert not primitivity_check(L, (0, 0, 2))
    assert primitivity_check(L, (Fraction(1, 2), 0, 1))
    with pytest.raises(NotInDual):
        primitivity_check(L, (Fraction(1, 3), 0, 1))


@pytest.mark.parametrize("K", [A1, A2, H], ids=["A1", "A2", "H"])
def test_represent_exhaustive(K):
    SL = split_lattice(K)
    D = SL.disc
    for lam in D.elements:
        q = q_disc(D, lam)
        for m in range(-21, 21):
            n = q + m
            if abs(n) > 20:
                continue
            v = represent_index(SL, lam, n)
            assert SL.full.q(v) == n
            assert D.reduce(v) == lam
            assert primitivity_check(SL.full, v)


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=-20, max_value=20, max_denominator=24))
def test_represent_rejects_incongruent(n):
    SL = split_lattice(A2)
    D = SL.disc
    for lam in D.elements:
        if (n - q_disc(D, lam)) % 1:
            with pytest.raises(IndexIncongruent):
                represent_index(SL, lam, n)
        else:
            assert SL.full.q(represent_index(SL, lam, n)) == n


def test_split_from_full():
    full = direct_sum(A2, H)
    SL = split_from_full(full, 2)
    assert SL.K.gram == A2.gram and (SL.e1_index, SL.e2_index) == (2, 3)
    with pytest.raises(ValueError):
        split_from_full(direct_sum(H, A2), 2)


def test_symmetry_gate():
    for p in range(1, 8):
        L = validate_lattice([[-2 if i == j and i >= p else (2 if i == j else 0) for j in range(p + 2)] for i in range(p + 2)])
        assert L.signature == (p, 2)
        assert symmetry_gate(L, Fraction(2 + p, 2))
    assert symmetry_gate(A1, Fraction(1, 2))
    assert not symmetry_gate(A2, 0)


# -- isolating modulus ---------------------------------------------------------------------


def test_isolation_examples():
    iso_tab = SyntheticTable((), Fraction(10**4), lambda lam, n: 1 if n == 1 else 0, 1.0)
    res = isolating_modulus(iso_tab, (), 1, 4.0)
    assert (res.M, res.N) == (1, 1) and res.value == 1
    res = isolating_modulus(ONE, (), 1, 4.0, margin=1.0)
    assert res.M == 1
    cubic = SyntheticTable((), Fraction(10**4), lambda lam, n: round(float(n) ** 1.5), 10**6)
    with pytest.raises(RangeInsufficient):
        isolating_modulus(cubic, (), 1, 4.0, margin=0.3)
    with pytest.raises(CoefficientZero):
        isolating_modulus(ZERO, (), 1, 4.0)


def theta_difference_table(bound=400):
    """Theta_{x^2 + 14y^2} - Theta_{3x^2 + 2xy + 5y^2}: two classes of one genus, coset 0."""
    Q1 = validate_lattice([[2, 0], [0, 28]])
    Q2 = validate_lattice([[6, 2], [2, 10]])
    t1, t2 = theta_coefficients(Q1, bound), theta_coefficients(Q2, bound)
    z1, z2 = t1.disc.zero(), t2.disc.zero()
    return CoefficientTable((), Fraction(bound), {((), Fraction(n)): t1(z1, n) - t2(z2, n) for n in range(bound + 1)})


def test_isolation_theta_difference():
    tab = theta_difference_table()
    for t in (1, 3, 5):
        res = isolating_modulus(tab, (), t, 4.0)
        assert res.N == math.factorial(res.M)
        assert res.radical == primes_up_to(res.M)
        assert abs(res.value - res.leading) < abs(res.leading)
        assert abs(res.value - res.leading) <= res.remainder_bound
