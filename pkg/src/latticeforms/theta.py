"""Vector-valued theta series.

Exact Fourier coefficients (representation numbers) for positive definite
lattices, numerical Siegel theta functions built from the standard majorant
for indefinite lattices, and numerical checks of the transformation law.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _accel
from .discriminant import DiscriminantGroup, Residues, discriminant_group, q_disc
from .errors import (
    DegenerateProjection,
    IncompatibleBounds,
    IndexIncompatible,
    NotPositiveDefinite,
    TableIncomplete,
    TailBoundFailure,
)
from .lattice import EvenLattice, congruence_diagonal, direct_sum, enumerate_vectors, rational_inverse, transpose
from .weil import SL2Matrix, principal_sqrt_j, rho_standard_lift

Index = tuple[Residues, Fraction]


# ---------------------------------------------------------------------------
# Coefficient tables
# ---------------------------------------------------------------------------


def table_indices(D: DiscriminantGroup, max_norm) -> Iterator[Index]:
    """Every (coset, n) with n = q(coset) mod 1 and 0 <= n <= max_norm, canonical order."""
    max_norm = Fraction(max_norm)
    for lam in D.elements:
        n = q_disc(D, lam)
        while n <= max_norm:
            yield lam, n
            n += 1


@dataclass
class CoefficientTable:
    """Fourier coefficients a(lambda, n) of a vector-valued form, complete up to ``max_norm``.

    Coefficients at negative ``n`` read as zero (holomorphic forms); a lookup
    beyond ``max_norm`` raises :class:`TableIncomplete`.
    """

    divisors: tuple[int, ...]
    max_norm: Fraction
    entries: dict[Index, complex] = field(default_factory=dict)
    disc: DiscriminantGroup | None = None

    @classmethod
    def zeros(cls, D: DiscriminantGroup, max_norm) -> "CoefficientTable":
        return cls.from_function(D, max_norm, lambda lam, n: 0)

    @classmethod
    def from_function(cls, D: DiscriminantGroup, max_norm, fn: Callable[[Residues, Fraction], complex]):
        max_norm = Fraction(max_norm)
        entries = {(lam, n): fn(lam, n) for lam, n in table_indices(D, max_norm)}
        return cls(D.divisors, max_norm, entries, D)

    def reduce(self, lam: Sequence[int]) -> Residues:
        return tuple(int(a) % d for a, d in zip(lam, self.divisors))

    def __call__(self, lam: Sequence[int], n) -> complex:
        lam = self.reduce(lam)
        n = Fraction(n)
        if n < 0:
            return 0
        if n > self.max_norm:
            raise TableIncomplete(f"index n = {n} beyond table bound {self.max_norm}")
        try:
            return self.entries[(lam, n)]
        except KeyError:
            if self.disc is not None and q_disc(self.disc, lam) != n % 1:
                return 0
            raise TableIncomplete(f"missing entry a({list(lam)}, {n})") from None

    def max_abs(self) -> float:
        return max((abs(v) for v in self.entries.values()), default=0.0)

    def is_integral(self) -> bool:
        return all(isinstance(v, int) or (complex(v).imag == 0 and float(complex(v).real).is_integer())
                   for v in self.entries.values())

    def validate(self) -> None:
        if self.disc is None:
            return
        for lam, n in self.entries:
            if q_disc(self.disc, lam) != n % 1:
                raise IndexIncompatible(f"index ({list(lam)}, {n}) violates n = q(lambda) mod 1")

    def truncate(self, max_norm) -> "CoefficientTable":
        max_norm = Fraction(max_norm)
        return CoefficientTable(
            self.divisors, max_norm, {k: v for k, v in self.entries.items() if k[1] <= max_norm}, self.disc
        )

    def nonzero(self) -> dict[Index, complex]:
        return {k: v for k, v in self.entries.items() if v != 0}

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientTable):
            return NotImplemented
        return (
            self.divisors == other.divisors
            and self.max_norm == other.max_norm
            and self.nonzero() == other.nonzero()
        )


def theta_coefficients(L: EvenLattice, bound) -> CoefficientTable:
    """a(lambda, n) = #{x in L + lambda : q(x) = n} for all n <= bound."""
    bound = Fraction(bound)
    if not L.is_positive_definite:
        raise NotPositiveDefinite("theta coefficients need a positive definite lattice")
    D = discriminant_group(L)
    table = CoefficientTable.from_function(D, bound, lambda lam, n: 0)
    for lam in D.elements:
        for x in enumerate_vectors(L, bound, D.lift(lam)):
            table.entries[(lam, L.q(x))] += 1
    return table


def theta_tensor(t1: CoefficientTable, t2: CoefficientTable) -> CoefficientTable:
    """Coefficient table of Theta_{L1} (x) Theta_{L2}, indexed by the discriminant form of L1 + L2."""
    if t1.disc is None or t2.disc is None:
        raise ValueError("tensor product needs tables attached to lattices")
    bound = min(t1.max_norm, t2.max_norm)
    if t1.max_norm != t2.max_norm:
        warnings.warn(f"tables complete to {t1.max_norm} and {t2.max_norm}; truncating to {bound}", IncompatibleBounds)
    D1, D2 = t1.disc, t2.disc
    D = discriminant_group(direct_sum(D1.source, D2.source))
    out = CoefficientTable.from_function(D, bound, lambda lam, n: 0)
    image = {(l1, l2): D.reduce(D1.lift(l1) + D2.lift(l2)) for l1 in D1.elements for l2 in D2.elements}
    by_coset2: dict[Residues, list[tuple[Fraction, complex]]] = {}
    for (l2, n2), a2 in t2.entries.items():
        if a2 and n2 <= bound:
            by_coset2.setdefault(l2, []).append((n2, a2))
    for (l1, n1), a1 in t1.entries.items():
        if not a1 or n1 > bound:
            continue
        for l2, terms in by_coset2.items():
            lam = image[(l1, l2)]
            for n2, a2 in terms:
                if n1 + n2 <= bound:
                    out.entries[(lam, n1 + n2)] += a1 * a2
    return out


# ---------------------------------------------------------------------------
# Standard majorant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrassmannPoint:
    """A negative definite subspace z of V, given by ``b^-`` rational spanning vectors."""

    lattice: EvenLattice
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_vectors(cls, L: EvenLattice, vectors: Sequence[Sequence]) -> "GrassmannPoint":
        basis = tuple(tuple(Fraction(x) for x in v) for v in vectors)
        if len(basis) != L.signature[1]:
            raise ValueError(f"need {L.signature[1]} vectors, got {len(basis)}")
        if any(len(v) != L.rank for v in basis):
            raise ValueError("vector length differs from lattice rank")
        gram = [[L.beta(a, b) for b in basis] for a in basis]
        if basis and not all(p < 0 for p in congruence_diagonal(gram)):
            raise DegenerateProjection("spanning vectors do not span a negative definite subspace")
        return cls(L, basis)

    @classmethod
    def empty(cls, L: EvenLattice) -> "GrassmannPoint":
        return cls.from_vectors(L, [])


def majorant_matrix(L: EvenLattice, z: GrassmannPoint) -> tuple[tuple[Fraction, ...], ...]:
    """Matrix P with x^T P x = 2 q_z^+(x)."""
    G = [[Fraction(a) for a in row] for row in L.gram]
    n = L.rank
    if not z.basis:
        return tuple(tuple(r) for r in G)
    Z = z.basis  # rows are spanning vectors
    GZ = [[sum(G[i][k] * v[k] for k in range(n)) for v in Z] for i in range(n)]  # n x m
    ZGZ = [[sum(a[k] * GZ[k][j] for k in range(n)) for j in range(len(Z))] for a in Z]
    inv = rational_inverse(ZGZ)
    m = len(Z)
    return tuple(
        tuple(
            G[i][j] - 2 * sum(GZ[i][a] * inv[a][b] * GZ[j][b] for a in range(m) for b in range(m))
            for j in range(n)
        )
        for i in range(n)
    )


def majorant_value(L: EvenLattice, z: GrassmannPoint, x: Sequence) -> Fraction:
    """q(x_{z-perp}) - q(x_z), computed exactly."""
    P = majorant_matrix(L, z)
    x = [Fraction(a) for a in x]
    val = sum(x[i] * P[i][j] * x[j] for i in range(len(x)) for j in range(len(x))) / 2
    assert val >= 0
    return val


def min_eigenvalue_lower_bound(P, iterations: int = 48) -> Fraction:
    """Rational t <= smallest eigenvalue of the symmetric positive definite P.

    Bisection on t with the exact test 'P - t I is positive definite'.
    """
    n = len(P)
    lo = Fraction(0)
    hi = min(Fraction(P[i][i]) for i in range(n))
    for _ in range(iterations):
        mid = (lo + hi) / 2
        shifted = [[Fraction(P[i][j]) - (mid if i == j else 0) for j in range(n)] for i in range(n)]
        if all(p > 0 for p in congruence_diagonal(shifted)):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass
class SiegelThetaResult:
    value: np.ndarray
    radius: float
    tail_bound: float
    terms: int

    def to_json(self) -> dict:
        return {
            "value": [[float(z.real), float(z.imag)] for z in self.value],
            "radius": self.radius,
            "tail_bound": self.tail_bound,
            "terms": self.terms,
        }


def truncation_radius(n: int, mu: float, v: float, eps: float) -> tuple[float, float]:
    """Radius R and tail bound for sum_{q+ > R} exp(-2 pi v q+) over a shifted lattice.

    Uses exp(-2 pi v q+) <= exp(-pi v R) exp(-pi v q+) on the tail, q+(x) >= mu |x|^2 / 2,
    and sum_{m in Z + c} exp(-a m^2) <= 1 + sqrt(pi / a).
    """
    per_axis = 1.0 + math.sqrt(2.0 / (v * mu))
    R = (n * math.log(per_axis) + math.log(1.0 / eps)) / (math.pi * v)
    R = max(R, 0.0)
    return R, math.exp(-math.pi * v * R) * per_axis**n


def siegel_theta_value(
    L: EvenLattice,
    tau: complex,
    z: GrassmannPoint | None = None,
    eps: float = 1e-10,
    radius_cap: float = 1e4,
    D: DiscriminantGroup | None = None,
) -> SiegelThetaResult:
    """sum_{x in L'} e(u q(x) + i v q_z^+(x)) e_{x+L}, truncated at q_z^+ <= R."""
    tau = complex(tau)
    u, v = tau.real, tau.imag
    if v <= 0:
        raise ValueError("tau must lie in the upper half plane")
    if eps <= 0:
        raise ValueError("eps must be positive")
    z = GrassmannPoint.empty(L) if z is None else z
    D = discriminant_group(L) if D is None else D
    n = L.rank
    if n == 0:
        return SiegelThetaResult(np.ones(1, dtype=complex), 0.0, 0.0, 1)
    P = majorant_matrix(L, z)
    mu = min_eigenvalue_lower_bound(P)
    if mu <= 0:
        raise DegenerateProjection("majorant is not positive definite")
    R, tail = truncation_radius(n, float(mu), v, eps)
    if R > radius_cap:
        raise TailBoundFailure(f"truncation radius {R:.3g} exceeds cap {radius_cap}")
    Pinv = rational_inverse(P)
    radii = np.array([math.sqrt(2 * R * float(Pinv[i][i])) for i in range(n)]) + 1e-9
    centers = np.array([[float(c) for c in D.lift(lam)] for lam in D.elements], dtype=np.float64)
    Gf = np.array(L.gram, dtype=np.float64)
    Pf = np.array([[float(a) for a in row] for row in P], dtype=np.float64)
    vals, counts = _accel.theta_sum(Gf, Pf, centers, radii, u, v, R)
    return SiegelThetaResult(vals, R, tail, int(counts.sum()))


def theta_modularity_residual(L: EvenLattice, M: SL2Matrix, tau: complex, eps: float = 1e-10) -> float:
    """max-norm of Theta(M tau) - sqrt(c tau + d)^{rank} rho(M~) Theta(tau)."""
    if not L.is_positive_definite:
        raise NotPositiveDefinite("the transformation law check is for positive definite lattices")
    if M.as_tuple() == (1, 0, 0, 1):
        return 0.0
    D = discriminant_group(L)
    lhs = siegel_theta_value(L, M.act(tau), eps=eps, D=D).value
    base = siegel_theta_value(L, tau, eps=eps, D=D).value
    rhs = principal_sqrt_j(M, tau) ** L.rank * (rho_standard_lift(D, M) @ base)
    return float(np.max(np.abs(lhs - rhs)))
