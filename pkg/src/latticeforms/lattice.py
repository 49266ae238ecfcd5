"""Even lattices with exact integer and rational linear algebra.

Matrices are tuples of row tuples of Python ints (or :class:`fractions.Fraction`
where rational). Nothing in this module touches floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from .errors import (
    BoundNegative,
    Degenerate,
    NotEven,
    NotInDual,
    NotPositiveDefinite,
    NotSymmetric,
    OddInducedGram,
    SingularBasis,
)

IntMatrix = tuple[tuple[int, ...], ...]
RatVector = tuple[Fraction, ...]


def as_int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(A):
    if not A:
        return ()
    return tuple(zip(*A))


def matmul(A, B):
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, x):
    return tuple(sum(a * b for a, b in zip(row, x)) for row in A)


def determinant(A) -> int:
    """Determinant of a square integer matrix by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rational_inverse(A) -> tuple[tuple[Fraction, ...], ...]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise Degenerate("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    The nonzero diagonal entries form a divisibility chain ``d1 | d2 | ...`` and
    are followed by zeros.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithDecomposition:
    A = as_int_matrix(A)
    m = len(A)
    n = len(A[0]) if m else 0
    M = [list(r) for r in A]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row_dst += f * row_src
        M[dst] = [a + f * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for row in M:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block, first in row-major order
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if M[i][j] != 0 and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
                    dirty = dirty or M[i][t] != 0
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
                    dirty = dirty or M[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if M[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and M[t][t] < 0:
            M[t] = [-x for x in M[t]]
            U[t] = [-x for x in U[t]]
    return SmithDecomposition(as_int_matrix(U), as_int_matrix(M), as_int_matrix(V))


# ---------------------------------------------------------------------------
# Signature by congruence diagonalisation over Q
# ---------------------------------------------------------------------------


def congruence_diagonal(gram) -> list[Fraction]:
    """Diagonal entries of a rational congruence diagonalisation of ``gram``.

    Zero pivots are resolved by the first nonzero pivot in row order; if none
    is available a row/column combination creates one.
    """
    n = len(gram)
    M = [[Fraction(x) for x in row] for row in gram]
    diag = []
    for k in range(n):
        if M[k][k] == 0:
            j = next((j for j in range(k + 1, n) if M[j][j] != 0), None)
            if j is not None:
                M[k], M[j] = M[j], M[k]
                for row in M:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if M[k][j] != 0), None)
                if j is not None:
                    # e_k <- e_k + e_j; pivot becomes 2*M[k][j]
                    M[k] = [a + b for a, b in zip(M[k], M[j])]
                    for row in M:
                        row[k] += row[j]
        p = M[k][k]
        diag.append(p)
        if p == 0:
            continue
        for i in range(k + 1, n):
            f = M[i][k] / p
            if f:
                # simultaneous row and column operation keeps M symmetric
                M[i] = [a - f * b for a, b in zip(M[i], M[k])]
                for row in M:
                    row[i] -= f * row[k]
    return diag


def signature_of(gram) -> tuple[int, int]:
    d = congruence_diagonal(gram)
    return sum(1 for x in d if x > 0), sum(1 for x in d if x < 0)


def is_positive_definite(gram) -> bool:
    return all(x > 0 for x in congruence_diagonal(gram))


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvenLattice:
    """A non-degenerate even lattice given by its Gram matrix."""

    gram: IntMatrix
    signature: tuple[int, int]
    determinant: int
    name: str | None = None

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_positive_definite(self) -> bool:
        return self.signature == (self.rank, 0)

    @cached_property
    def gram_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        return rational_inverse(self.gram)

    def beta(self, x, y) -> Fraction:
        return sum((Fraction(a) * b * g for row_x, a in zip(self.gram, x) for g, b in zip(row_x, y)), Fraction(0))

    def q(self, x) -> Fraction:
        return self.beta(x, x) / 2

    def in_dual(self, x) -> bool:
        return all(Fraction(v).denominator == 1 for v in matvec(self.gram, x))

    def dual_coordinates(self, x) -> tuple[int, ...]:
        """Coordinates of ``x`` in the basis of L' given by the columns of the inverse Gram."""
        y = matvec(self.gram, [Fraction(v) for v in x])
        if any(v.denominator != 1 for v in y):
            raise NotInDual(f"{[str(v) for v in x]} is not in the dual lattice")
        return tuple(int(v) for v in y)


def validate_lattice(gram: Sequence[Sequence[int]], name: str | None = None) -> EvenLattice:
    G = as_int_matrix(gram)
    n = len(G)
    if any(len(r) != n for r in G):
        raise NotSymmetric("Gram matrix is not square")
    for i in range(n):
        for j in range(i + 1, n):
            if G[i][j] != G[j][i]:
                raise NotSymmetric(f"gram[{i}][{j}] != gram[{j}][{i}]")
    for i in range(n):
        if G[i][i] % 2:
            raise NotEven(f"gram[{i}][{i}] = {G[i][i]} is odd")
    det = determinant(G)
    if det == 0:
        raise Degenerate("Gram matrix is singular")
    return EvenLattice(G, signature_of(G), det, name)


def rescale(L: EvenLattice, n: int) -> EvenLattice:
    """L(n): same module, quadratic form multiplied by ``n``."""
    if n < 1:
        raise ValueError("rescaling factor must be positive")
    G = tuple(tuple(n * x for x in row) for row in L.gram)
    return EvenLattice(G, L.signature, L.determinant * n**L.rank, L.name)


def direct_sum(L1: EvenLattice, L2: EvenLattice) -> EvenLattice:
    r1, r2 = L1.rank, L2.rank
    rows = [tuple(row) + (0,) * r2 for row in L1.gram] + [(0,) * r1 + tuple(row) for row in L2.gram]
    sig = (L1.signature[0] + L2.signature[0], L1.signature[1] + L2.signature[1])
    return EvenLattice(tuple(rows), sig, L1.determinant * L2.determinant)


def zero_lattice() -> EvenLattice:
    return EvenLattice((), (0, 0), 1, "0")


@dataclass(frozen=True)
class Sublattice:
    """A full-rank sublattice M <= L; columns of ``basis`` are M's basis in L-coordinates."""

    parent: EvenLattice
    basis: IntMatrix
    index: int
    lattice: EvenLattice

    def to_parent(self, x) -> tuple:
        return matvec(self.basis, x)


def sublattice(L: EvenLattice, basis: Sequence[Sequence[int]]) -> Sublattice:
    B = as_int_matrix(basis)
    if len(B) != L.rank or any(len(r) != L.rank for r in B):
        raise SingularBasis(f"basis must be {L.rank}x{L.rank}")
    det = determinant(B)
    if det == 0:
        raise SingularBasis("basis is singular")
    G = matmul(matmul(transpose(B), L.gram), B)
    if any(G[i][i] % 2 for i in range(len(G))):
        raise OddInducedGram("induced Gram has odd diagonal")
    M = EvenLattice(as_int_matrix(G), L.signature, L.determinant * det * det)
    return Sublattice(L, B, abs(det), M)


# ---------------------------------------------------------------------------
# Enumeration of short vectors
# ---------------------------------------------------------------------------


def _ldl(gram) -> tuple[list[Fraction], list[list[Fraction]]]:
    """q(x) = sum_i d[i] * (x_i + sum_{j>i} mu[i][j] x_j)^2 for q = x^T G x / 2.

    Exact rational Cholesky without square roots. Requires positive definiteness.
    """
    n = len(gram)
    A = [[Fraction(x) / 2 for x in row] for row in gram]
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = A[i][i] - sum(d[k] * mu[k][i] ** 2 for k in range(i))
        if d[i] <= 0:
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        for j in range(i + 1, n):
            mu[i][j] = (A[i][j] - sum(d[k] * mu[k][i] * mu[k][j] for k in range(i))) / d[i]
    return d, mu


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def enumerate_vectors(L: EvenLattice, bound, shift=None) -> list[RatVector]:
    """All x in L + shift with q(x) <= bound, sorted lexicographically.

    ``shift`` is a rational coordinate vector of an element of L'. The search is
    a Fincke-Pohst recursion on the exact LDL form, last coordinate outermost.
    """
    bound = Fraction(bound)
    if bound < 0:
        raise BoundNegative(f"bound {bound} < 0")
    n = L.rank
    shift = tuple(Fraction(s) for s in shift) if shift is not None else (Fraction(0),) * n
    if len(shift) != n:
        raise ValueError("shift has wrong length")
    if not L.in_dual(shift):
        raise NotInDual("shift is not an element of the dual lattice")
    if n == 0:
        return [()]
    if not L.is_positive_definite:
        raise NotPositiveDefinite("enumeration requires a positive definite lattice")
    d, mu = _ldl(L.gram)
    out: list[RatVector] = []
    x = [Fraction(0)] * n

    def recurse(i: int, budget: Fraction) -> None:
        centre = -sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        # nearest admissible point to the centre, then walk outwards
        k0 = _floor(centre - shift[i] + Fraction(1, 2))
        for step in (1, -1):
            k = k0 if step == 1 else k0 - 1
            while True:
                xi = shift[i] + k
                rest = budget - d[i] * (xi - centre) ** 2
                if rest < 0:
                    break
                x[i] = xi
                if i == 0:
                    out.append(tuple(x))
                else:
                    recurse(i - 1, rest)
                k += step

    recurse(n - 1, bound)
    out.sort()
    return out
