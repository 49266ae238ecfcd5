"""Discriminant forms L'/L with their Q/Z-valued quadratic and bilinear forms.

Elements are residue vectors against the elementary divisors of the Smith
normal form of the Gram matrix. Internally all form values are stored as
integers modulo the level ``N``: ``q(x) = q_num(x) / N mod 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Sequence

import numpy as np

from .errors import GaussSumInconsistent, OrderCapExceeded
from .lattice import EvenLattice, matvec, smith_normal_form

DEFAULT_ORDER_CAP = 100_000

Residues = tuple[int, ...]


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def lattice_level(L: EvenLattice) -> int:
    """Smallest N with N*q(x) in Z and N*beta(x, y) in Z for all x, y in L'."""
    Ginv = L.gram_inverse
    n = L.rank
    N = 1
    for i in range(n):
        N = _lcm(N, (Ginv[i][i] / 2).denominator)
        for j in range(i + 1, n):
            N = _lcm(N, Ginv[i][j].denominator)
    return N


@dataclass(frozen=True, eq=False)
class DiscriminantGroup:
    source: EvenLattice
    divisors: tuple[int, ...]
    generators: tuple[tuple[Fraction, ...], ...]
    level: int
    signature_mod8: int
    # rows of the Smith transform U that produce the residues
    _reducer: tuple[tuple[int, ...], ...]
    # N*q(g_i) mod N and N*beta(g_i, g_j) mod N
    q_gen: tuple[int, ...]
    b_gen: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return math.prod(self.divisors)

    def __len__(self) -> int:
        return self.order

    def zero(self) -> Residues:
        return (0,) * len(self.divisors)

    # -- element arithmetic ------------------------------------------------

    def normalize(self, x: Sequence[int]) -> Residues:
        if len(x) != len(self.divisors):
            raise ValueError(f"expected {len(self.divisors)} residues, got {len(x)}")
        return tuple(int(a) % d for a, d in zip(x, self.divisors))

    def add(self, x: Residues, y: Residues) -> Residues:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.divisors))

    def neg(self, x: Residues) -> Residues:
        return tuple(-a % d for a, d in zip(x, self.divisors))

    def scale(self, n: int, x: Residues) -> Residues:
        return tuple(n * a % d for a, d in zip(x, self.divisors))

    def lift(self, x: Residues) -> tuple[Fraction, ...]:
        """A representative of ``x`` in L' (coordinates in the basis of L)."""
        n = self.source.rank
        out = [Fraction(0)] * n
        for r, g in zip(x, self.generators):
            if r:
                for i in range(n):
                    out[i] += r * g[i]
        return tuple(out)

    def reduce(self, v: Sequence) -> Residues:
        """Class in L'/L of a dual-lattice vector ``v``."""
        y = self.source.dual_coordinates(v)
        return tuple(sum(u * c for u, c in zip(row, y)) % d for row, d in zip(self._reducer, self.divisors))

    # -- enumeration -------------------------------------------------------

    @cached_property
    def elements_array(self) -> np.ndarray:
        k = len(self.divisors)
        if k == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(d, dtype=np.int64) for d in self.divisors], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    @cached_property
    def elements(self) -> list[Residues]:
        return [tuple(int(a) for a in row) for row in self.elements_array]

    def index(self, x: Residues) -> int:
        i = 0
        for a, d in zip(x, self.divisors):
            i = i * d + a % d
        return i

    @cached_property
    def q_numerators(self) -> np.ndarray:
        """``N*q(x) mod N`` for every element in canonical order."""
        N = self.level
        R = self.elements_array
        out = np.zeros(len(R), dtype=np.int64)
        k = len(self.divisors)
        for i in range(k):
            out = (out + (R[:, i] * R[:, i] % N) * self.q_gen[i]) % N
            for j in range(i + 1, k):
                out = (out + (R[:, i] * R[:, j] % N) * self.b_gen[i][j]) % N
        return out

    def bilinear_numerators(self) -> np.ndarray:
        """Matrix ``N*beta(x, y) mod N`` over all pairs in canonical order."""
        N = self.level
        R = self.elements_array
        B = np.array(self.b_gen, dtype=np.int64).reshape(len(self.divisors), len(self.divisors))
        RB = (R @ B) % N if len(self.divisors) else np.zeros_like(R)
        return (RB @ R.T) % N if len(self.divisors) else np.zeros((1, 1), dtype=np.int64)

    # -- forms -------------------------------------------------------------

    def q(self, x: Residues) -> Fraction:
        return q_disc(self, x)

    def b(self, x: Residues, y: Residues) -> Fraction:
        return b_disc(self, x, y)


def discriminant_group(L: EvenLattice, cap: int = DEFAULT_ORDER_CAP) -> DiscriminantGroup:
    if abs(L.determinant) > cap:
        raise OrderCapExceeded(f"|det| = {abs(L.determinant)} exceeds cap {cap}")
    n = L.rank
    snf = smith_normal_form(L.gram) if n else None
    divisors, gens, reducer = [], [], []
    for i in range(n):
        d = snf.D[i][i]
        if d == 1:
            continue
        divisors.append(d)
        # lift of the i-th cyclic generator: (column i of V) / d
        gens.append(tuple(Fraction(snf.V[r][i], d) for r in range(n)))
        reducer.append(snf.U[i])
    N = lattice_level(L)
    k = len(gens)
    q_gen = tuple(int(L.q(g) * N) % N for g in gens)
    b_gen = tuple(tuple(int(L.beta(gens[i], gens[j]) * N) % N for j in range(k)) for i in range(k))
    sig = (L.signature[0] - L.signature[1]) % 8
    return DiscriminantGroup(L, tuple(divisors), tuple(gens), N, sig, tuple(reducer), q_gen, b_gen)


def q_disc(D: DiscriminantGroup, x: Residues) -> Fraction:
    x = D.normalize(x)
    N = D.level
    k = len(x)
    num = 0
    for i in range(k):
        num += x[i] * x[i] * D.q_gen[i]
        for j in range(i + 1, k):
            num += x[i] * x[j] * D.b_gen[i][j]
    return Fraction(num % N, N)


def b_disc(D: DiscriminantGroup, x: Residues, y: Residues) -> Fraction:
    x, y = D.normalize(x), D.normalize(y)
    N = D.level
    num = sum(a * c * D.b_gen[i][j] for i, a in enumerate(x) for j, c in enumerate(y))
    return Fraction(num % N, N)


def gauss_sum(D: DiscriminantGroup) -> complex:
    phases = np.exp(2j * np.pi * D.q_numerators.astype(np.float64) / D.level)
    return complex(phases.sum())


def milgram_signature(D: DiscriminantGroup, tol: float = 1e-9) -> int:
    """Signature mod 8 read off from the Gauss sum of the quadratic form."""
    G = gauss_sum(D)
    root = math.sqrt(D.order)
    if abs(abs(G) - root) > tol * max(1.0, root):
        raise GaussSumInconsistent(f"|G| = {abs(G)!r}, expected sqrt({D.order})")
    s = round(cmath.phase(G / root) * 4 / math.pi) % 8
    if abs(G / root - cmath.exp(1j * math.pi * s / 4)) > 1e-6:
        raise GaussSumInconsistent(f"Gauss sum phase {cmath.phase(G)} is not a multiple of pi/4")
    return s


def torsion_and_multiples(D: DiscriminantGroup, n: int) -> tuple[list[Residues], list[Residues]]:
    """(n-torsion, n-multiples) of D, each sorted in canonical order."""
    if n < 1:
        raise ValueError("n must be positive")
    zero = D.zero()
    torsion = [x for x in D.elements if D.scale(n, x) == zero]
    multiples = sorted({D.scale(n, x) for x in D.elements})
    assert len(torsion) * len(multiples) == D.order
    return torsion, multiples


def isotropic_elements(D: DiscriminantGroup, cap: int = DEFAULT_ORDER_CAP) -> list[Residues]:
    if D.order > cap:
        raise OrderCapExceeded(f"|D| = {D.order} exceeds cap {cap}")
    qn = D.q_numerators
    return [x for x, v in zip(D.elements, qn) if v == 0]


def direct_sum_residues(D: DiscriminantGroup, D1: DiscriminantGroup, D2: DiscriminantGroup, x1, x2) -> Residues:
    """Class in D of (lift x1, lift x2), where D belongs to the direct sum of the sources."""
    return D.reduce(D1.lift(x1) + D2.lift(x2))
