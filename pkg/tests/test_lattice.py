import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticeforms.errors import (
    BoundNegative,
    Degenerate,
    NotEven,
    NotInDual,
    NotPositiveDefinite,
    NotSymmetric,
    SingularBasis,
)
from latticeforms.lattice import (
    congruence_diagonal,
    determinant,
    direct_sum,
    enumerate_vectors,
    matmul,
    rational_inverse,
    rescale,
    signature_of,
    smith_normal_form,
    sublattice,
    validate_lattice,
    zero_lattice,
)

from conftest import A1, A1A1, A1H, A2, A3, D4, H, random_even_lattices

int_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


# -- Smith normal form ---------------------------------------------------------


def test_snf_identity():
    snf = smith_normal_form([[1, 0], [0, 1]])
    assert snf.D == ((1, 0), (0, 1))
    assert snf.U == ((1, 0), (0, 1)) and snf.V == ((1, 0), (0, 1))


def test_snf_diagonal_and_swap():
    assert smith_normal_form([[2, 0], [0, 2]]).diagonal == (2, 2)
    assert smith_normal_form([[0, 1], [1, 0]]).diagonal == (1, 1)


@settings(max_examples=150, deadline=None)
@given(int_matrices)
def test_snf_decomposition(A):
    snf = smith_normal_form(A)
    assert matmul(matmul(snf.U, A), snf.V) == snf.D
    assert abs(determinant(snf.U)) == 1 and abs(determinant(snf.V)) == 1
    diag = [x for x in snf.diagonal if x]
    assert all(x > 0 for x in diag)
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))
    # zeros trail the nonzero entries
    d = list(snf.diagonal)
    assert d == diag + [0] * (len(d) - len(diag))
    assert snf == smith_normal_form(A)


# -- validation ---------------------------------------------------------------


def test_validate_examples():
    assert (A1.rank, A1.signature, A1.determinant) == (1, (1, 0), 2)
    assert (H.signature, H.determinant) == ((1, 1), -1)
    with pytest.raises(NotEven):
        validate_lattice([[1]])
    with pytest.raises(NotSymmetric):
        validate_lattice([[2, 1], [0, 2]])
    with pytest.raises(Degenerate):
        validate_lattice([[2, 2], [2, 2]])


def test_signature_invariants_random():
    for L in random_even_lattices(60, seed=3):
        bp, bm = L.signature
        assert bp + bm == L.rank
        assert (L.determinant > 0) == (bm % 2 == 0)


def test_congruence_diagonal_matches_determinant():
    for L in random_even_lattices(30, seed=5):
        diag = congruence_diagonal(L.gram)
        prod = Fraction(1)
        for x in diag:
            prod *= x
        assert prod == L.determinant


def test_rational_inverse():
    G = A3.gram
    Ginv = rational_inverse(G)
    assert matmul(G, Ginv) == tuple(tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3))


# -- constructions -------------------------------------------------------------


def test_rescale():
    assert rescale(A1, 1).gram == ((2,),)
    assert rescale(A1, 2).gram == ((4,),)
    L = rescale(H, 3)
    assert L.gram == ((0, 3), (3, 0)) and L.determinant == -9
    assert rescale(rescale(A2, 2), 3).gram == rescale(A2, 6).gram


def test_direct_sum():
    assert A1A1.gram == ((2, 0), (0, 2)) and A1A1.signature == (2, 0)
    assert (A1H.rank, A1H.signature, A1H.determinant) == (3, (2, 1), -2)
    assert direct_sum(A2, zero_lattice()).gram == A2.gram
    assert direct_sum(zero_lattice(), A2).determinant == A2.determinant


def test_sublattice():
    M = sublattice(A1, [[2]])
    assert M.index == 2 and M.lattice.gram == ((8,),)
    assert sublattice(A2, [[1, 0], [0, 1]]).index == 1
    assert sublattice(H, [[1, 0], [0, 2]]).index == 2
    with pytest.raises(SingularBasis):
        sublattice(A2, [[1, 1], [1, 1]])


def test_dual_coordinates():
    assert A1.dual_coordinates([Fraction(1, 2)]) == (1,)
    with pytest.raises(NotInDual):
        A1.dual_coordinates([Fraction(1, 3)])


# -- enumeration ---------------------------------------------------------------


def brute_force(L, bound, shift):
    """Scan the box |x_i| <= sqrt(2 bound (G^-1)_ii), which contains every solution."""
    Ginv = rational_inverse(L.gram)
    box = [math.isqrt(int(2 * bound * Ginv[i][i])) + 2 for i in range(L.rank)]
    out = []
    for k in itertools.product(*[range(-b, b + 1) for b in box]):
        x = tuple(Fraction(s) + c for s, c in zip(shift, k))
        if L.q(x) <= bound:
            out.append(x)
    return sorted(out)


def test_enumerate_examples():
    assert enumerate_vectors(A1, 1) == [(-1,), (0,), (1,)]
    assert len(enumerate_vectors(A2, 1)) == 7
    assert enumerate_vectors(A1, Fraction(1, 4), [Fraction(1, 2)]) == [(Fraction(-1, 2),), (Fraction(1, 2),)]
    assert enumerate_vectors(zero_lattice(), 3) == [()]


def test_enumerate_errors():
    with pytest.raises(NotPositiveDefinite):
        enumerate_vectors(H, 1)
    with pytest.raises(BoundNegative):
        enumerate_vectors(A1, -1)
    with pytest.raises(NotInDual):
        enumerate_vectors(A1, 1, [Fraction(1, 3)])


@pytest.mark.parametrize("L", [A1, A2, A3, D4, A1A1, validate_lattice([[4, 1], [1, 6]])], ids=lambda L: L.name or str(L.gram))
def test_enumerate_matches_brute_force(L):
    from latticeforms.discriminant import discriminant_group

    D = discriminant_group(L)
    bound = 10 if L.rank <= 2 else 4
    for lam in D.elements[:4]:
        shift = D.lift(lam)
        got = enumerate_vectors(L, bound, shift)
        assert got == brute_force(L, bound, shift)
        assert len(set(got)) == len(got)
