"""Symmetric-square L-series attached to coefficient tables.

For a table a(lambda, n) and an index (lambda, t),

    L^N_{(lambda, t)}(s) = sum over n >= 1 with gcd(n, N) = 1 of a(n lambda, n^2 t) / n^s.

Everything is a finite truncation with an explicit tail bound. The module also
holds the hyperbolic-split constructor that realises any admissible index by a
primitive dual vector, and the isolating-modulus step that picks N = M! so that
the coprime-restricted series is dominated by its first coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Sequence

from .discriminant import DiscriminantGroup, Residues, discriminant_group, q_disc
from .errors import (
    CoefficientZero,
    IndexIncongruent,
    MisalignedTruncation,
    NotPositiveDefinite,
    RangeInsufficient,
    TableIncomplete,
)
from .lattice import (
    EvenLattice,
    Sublattice,
    as_int_matrix,
    direct_sum,
    enumerate_vectors,
    matmul,
    transpose,
    validate_lattice,
)

HYPERBOLIC = validate_lattice([[0, 1], [1, 0]], "H")


# ---------------------------------------------------------------------------
# Small arithmetic helpers
# ---------------------------------------------------------------------------


def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct primes dividing ``n`` (trial division; n = M! factors instantly)."""
    n = abs(int(n))
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


def primes_up_to(m: int) -> tuple[int, ...]:
    if m < 2:
        return ()
    sieve = bytearray([1]) * (m + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(m) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, m + 1, p)))
    return tuple(i for i, f in enumerate(sieve) if f)


def is_prime(p: int) -> bool:
    return p >= 2 and prime_factors(p) == (p,)


def radical(n: int) -> int:
    return math.prod(prime_factors(n))


# ---------------------------------------------------------------------------
# Tables defined by a formula
# ---------------------------------------------------------------------------


@dataclass
class SyntheticTable:
    """Coefficient table given by a function, for tables too large to store.

    ``sup`` bounds |a| on the whole range and is used for tail estimates.
    """

    divisors: tuple[int, ...]
    max_norm: Fraction
    fn: Callable[[Residues, Fraction], complex]
    sup: float

    def reduce(self, lam: Sequence[int]) -> Residues:
        return tuple(int(a) % d for a, d in zip(lam, self.divisors))

    def __call__(self, lam: Sequence[int], n) -> complex:
        n = Fraction(n)
        if n < 0:
            return 0
        if n > self.max_norm:
            raise TableIncomplete(f"index n = {n} beyond table bound {self.max_norm}")
        return self.fn(self.reduce(lam), n)

    def max_abs(self) -> float:
        return self.sup


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LSeriesQuery:
    coset: Residues
    t: Fraction
    s: complex
    coprime_to: int = 1
    n_max: int = 100

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        object.__setattr__(self, "s", complex(self.s))
        object.__setattr__(self, "coset", tuple(int(x) for x in self.coset))
        if self.coprime_to < 1 or self.n_max < 1:
            raise ValueError("coprime_to and n_max must be positive")

    @property
    def radical(self) -> tuple[int, ...]:
        return prime_factors(self.coprime_to)


@dataclass
class LSeriesResult:
    value: complex
    tail_bound: float
    n_max: int
    radical: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "tail_bound": self.tail_bound,
            "n_max": self.n_max,
            "N_radical": list(self.radical),
        }


def zeta_tail(n_max: int, sigma: float) -> float:
    """Integral-comparison bound for sum_{n > n_max} n^{-sigma}."""
    if sigma <= 1:
        return math.inf
    return n_max ** (1 - sigma) / (sigma - 1)


def _partial_sum(table, lam: Sequence[int], t: Fraction, s: complex, N: int, n_max: int) -> complex:
    total = 0j
    for n in range(1, n_max + 1):
        if N == 1 or math.gcd(n, N) == 1:
            a = table([n * x for x in lam], n * n * t)
            if a:
                total += a * n ** (-s)
    return total


def lseries_eval(table, query: LSeriesQuery) -> LSeriesResult:
    value = _partial_sum(table, query.coset, query.t, query.s, query.coprime_to, query.n_max)
    tail = float(table.max_abs()) * zeta_tail(query.n_max, query.s.real)
    return LSeriesResult(value, tail, query.n_max, query.radical)


def witt_limit_sequence(table, query: LSeriesQuery, b_plus: int, steps: int = 6) -> list[tuple[float, LSeriesResult]]:
    """Values at s = b_plus + 2^-j, j = 1..steps; reported as-is, no extrapolation."""
    out = []
    for j in range(1, steps + 1):
        s = b_plus + 2.0**-j
        q = LSeriesQuery(query.coset, query.t, s, query.coprime_to, query.n_max)
        out.append((s, lseries_eval(table, q)))
    return out


def inclusion_exclusion_check(
    table, lam: Sequence[int], t, N: int, p: int, s: complex, n_max: int, n_max_p: int | None = None
) -> float:
    """|L^{pN}(lam, t) - (L^N(lam, t) - p^-s L^N(p lam, p^2 t))| on aligned truncations.

    With p coprime to N, the n <= n_max divisible by p are exactly p*m with
    m <= n_max // p, so both sides run over the same index set.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if N % p == 0:
        raise ValueError(f"p = {p} divides N = {N}")
    if n_max_p is None:
        n_max_p = n_max // p
    if n_max_p != n_max // p:
        raise MisalignedTruncation(f"inner truncation {n_max_p} != n_max // p = {n_max // p}")
    t = Fraction(t)
    s = complex(s)
    lhs = _partial_sum(table, lam, t, s, p * N, n_max)
    rhs = _partial_sum(table, lam, t, s, N, n_max) - p ** (-s) * _partial_sum(
        table, [p * x for x in lam], p * p * t, s, N, n_max_p
    )
    return abs(lhs - rhs)


def lseries_by_inclusion_exclusion(table, lam: Sequence[int], t, N: int, s: complex, n_max: int) -> complex:
    """L^N built from L^1 by peeling off one prime of rad(N) at a time."""
    primes = prime_factors(N)
    t = Fraction(t)
    s = complex(s)

    def go(primes: tuple[int, ...], lam, t, n_max) -> complex:
        if not primes:
            return _partial_sum(table, lam, t, s, 1, n_max)
        *rest, p = primes
        rest = tuple(rest)
        return go(rest, lam, t, n_max) - p ** (-s) * go(rest, [p * x for x in lam], p * p * t, n_max // p)

    return go(primes, list(lam), t, n_max)


# ---------------------------------------------------------------------------
# Sum over a definite sublattice
# ---------------------------------------------------------------------------


def lseries_sublattice(table, L1: Sublattice, eta: Sequence[int], t, s, bound, D: DiscriminantGroup | None = None) -> complex:
    """sum over 0 != l in L1' cap L' with |q(l)| <= bound of a(l + eta, t q(l)) / q(l)^s.

    ``L1`` is a (not necessarily full rank) sublattice of L whose span is
    definite; ``basis`` columns give its generators in L-coordinates. Classes
    and ``eta`` live in L'/L.
    """
    L = L1.parent
    D = discriminant_group(L) if D is None else D
    t, bound, s = Fraction(t), Fraction(bound), complex(s)
    K = L1.lattice
    sign = 1
    if not K.is_positive_definite:
        if K.signature != (0, K.rank):
            raise NotPositiveDefinite("sublattice span is not definite")
        sign = -1
        K = validate_lattice([[-x for x in row] for row in K.gram])
    KD = discriminant_group(K)
    eta = D.normalize(eta)
    total = 0j
    for c in KD.elements:
        for x in enumerate_vectors(K, bound, KD.lift(c)):
            y = L1.to_parent(x)
            if not any(y) or not L.in_dual(y):
                continue
            qy = sign * K.q(x)
            lam = D.add(D.reduce(y), eta)
            a = table(lam, t * qy)
            if a:
                total += a * complex(qy) ** (-s)
    return total


def definite_sublattice(L: EvenLattice, vectors: Sequence[Sequence[int]]) -> Sublattice:
    """Sublattice spanned by integer ``vectors`` of L (any rank); index is left as 0."""
    cols = as_int_matrix(vectors)
    B = transpose(cols)
    G = matmul(matmul(cols, L.gram), B)
    return Sublattice(L, B, 0, validate_lattice(G))


# ---------------------------------------------------------------------------
# Hyperbolic splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitLattice:
    K: EvenLattice
    full: EvenLattice
    e1_index: int
    e2_index: int
    disc: DiscriminantGroup = field(compare=False)

    @property
    def k_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.full.rank) if i not in (self.e1_index, self.e2_index))


def split_lattice(K: EvenLattice) -> SplitLattice:
    full = direct_sum(K, HYPERBOLIC)
    return SplitLattice(K, full, K.rank, K.rank + 1, discriminant_group(full))


def split_from_full(full: EvenLattice, k_rank: int) -> SplitLattice:
    """Interpret ``full`` as K + H with K on the first ``k_rank`` coordinates."""
    G = full.gram
    r = k_rank
    if full.rank != r + 2:
        raise ValueError(f"rank {full.rank} != k_rank + 2 = {r + 2}")
    if [list(G[r][r:]), list(G[r + 1][r:])] != [[0, 1], [1, 0]]:
        raise ValueError("coordinates (e1, e2) do not span a hyperbolic plane")
    if any(G[i][j] for i in range(r) for j in (r, r + 1)):
        raise ValueError("hyperbolic plane is not orthogonal to K")
    K = validate_lattice([row[:r] for row in G[:r]]) if r else EvenLattice((), (0, 0), 1)
    return SplitLattice(K, full, r, r + 1, discriminant_group(full))


def represent_index(SL: SplitLattice, lam: Sequence[int], n) -> tuple[Fraction, ...]:
    """Primitive l in L' with class lam and q(l) = n.

    Lift lam to L', keep the K-part l_K and set the hyperbolic part to
    (n - q(l_K)) e1 + e2.
    """
    D = SL.disc
    lam = D.normalize(lam)
    n = Fraction(n)
    if (n - q_disc(D, lam)) % 1:
        raise IndexIncongruent(f"n = {n} is not congruent to q(lambda) = {q_disc(D, lam)} mod 1")
    x = list(D.lift(lam))
    kpart = [Fraction(0)] * SL.full.rank
    for i in SL.k_indices:
        kpart[i] = x[i]
    x = kpart
    x[SL.e1_index] = n - SL.full.q(kpart)
    x[SL.e2_index] = Fraction(1)
    return tuple(x)


def primitivity_check(L: EvenLattice, v: Sequence) -> bool:
    """True iff v is primitive in L' (gcd of its dual-basis coordinates is 1)."""
    y = L.dual_coordinates(v)
    return reduce(math.gcd, y, 0) == 1


def symmetry_gate(L: EvenLattice, k) -> bool:
    """2k = b+ - b- mod 4; otherwise the symmetric-square series vanishes identically."""
    two_k = 2 * Fraction(k)
    if two_k.denominator != 1:
        raise ValueError(f"k = {k} is not a half-integer")
    return (int(two_k) - (L.signature[0] - L.signature[1])) % 4 == 0


# ---------------------------------------------------------------------------
# Isolating modulus
# ---------------------------------------------------------------------------


@dataclass
class Isolation:
    M: int
    N: int
    radical: tuple[int, ...]
    remainder_bound: float
    value: complex
    leading: complex
    n_max: int

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "N": str(self.N),
            "N_radical": list(self.radical),
            "remainder_bound": self.remainder_bound,
            "value": [self.value.real, self.value.imag],
            "leading": [complex(self.leading).real, complex(self.leading).imag],
            "n_max": self.n_max,
        }


def isolating_modulus(table, lam: Sequence[int], t, s_eval: float, margin: float = 1.0) -> Isolation:
    """Smallest M with sum_{d > M} |a(d lam, d^2 t)| / d^s + tail < |a(lam, t)| * margin.

    Every n > 1 coprime to M! exceeds M, so for N = M! the restricted series
    differs from a(lam, t) by at most that remainder. The sum runs over the
    table's range d <= sqrt(max_norm / t); beyond it the tail uses max |a|.
    """
    t = Fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    if s_eval <= 1:
        raise ValueError("s_eval must exceed 1")
    lam = list(lam)
    lead = table(lam, t)
    if lead == 0:
        raise CoefficientZero(f"a({lam}, {t}) = 0")
    d_max = math.isqrt(int(Fraction(table.max_norm) / t))
    mags = [0.0] * (d_max + 1)
    for d in range(2, d_max + 1):
        mags[d] = abs(table([d * x for x in lam], d * d * t)) / d**s_eval
    tail = float(table.max_abs()) * zeta_tail(d_max, s_eval)
    target = abs(lead) * margin
    remainder = sum(mags) + tail
    for M in range(1, d_max + 1):
        remainder -= mags[M] if M > 1 else 0.0
        if remainder < target:
            N = math.factorial(M)
            value = _partial_sum(table, lam, t, complex(s_eval), N, d_max)
            return Isolation(M, N, primes_up_to(M), remainder, value, lead, d_max)
    raise RangeInsufficient(
        f"remainder {remainder:.3g} never drops below |a| * margin = {target:.3g} within d <= {d_max}"
    )
