"""Truncated non-holomorphic vector-valued Eisenstein series.

    E(tau, s) = 1/2 * sum over (c, d) of (v^s e_lambda) |_k M~

The sum runs over coprime bottom rows (c, d) of both signs, each completed to a
matrix M and lifted to Mp2(Z) by the principal square root of c*tau + d. The
cutoff window for ``C`` is ``c^2 + d^2 < C^2`` together with the identity rows
``(0, +-1)``, so that ``C = 1`` keeps only the identity coset.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import _accel
from .discriminant import DiscriminantGroup, Residues, discriminant_group, q_disc
from .errors import ConvergenceWarning, NotIsotropic
from .lattice import EvenLattice
from .weil import SL2Matrix, principal_sqrt_j, rho_standard_lift, weil_engine


@dataclass(frozen=True)
class EisensteinSpec:
    lattice: EvenLattice
    coset: Residues
    weight: Fraction
    s: complex
    disc: DiscriminantGroup

    @property
    def k(self) -> float:
        return float(self.weight)


def eisenstein_spec(L: EvenLattice, coset: Sequence[int], weight, s, D: DiscriminantGroup | None = None) -> EisensteinSpec:
    D = discriminant_group(L) if D is None else D
    lam = D.normalize(coset)
    if q_disc(D, lam) != 0:
        raise NotIsotropic(f"q({list(lam)}) = {q_disc(D, lam)} is not 0 mod 1")
    k = Fraction(weight)
    if (2 * k).denominator != 1 or (int(2 * k) - L.rank) % 2:
        raise ValueError(f"weight {k} incompatible with rank {L.rank} (need 2k = rank mod 2)")
    return EisensteinSpec(L, lam, k, complex(s), D)


@dataclass(frozen=True)
class TruncationPolicy:
    cutoff: int
    base_tolerance: float = 1e-10

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")


@dataclass
class EisensteinResult:
    value: np.ndarray
    last_shell: float
    cutoff: int
    terms: int

    def to_json(self) -> dict:
        return {
            "value": [[float(z.real), float(z.imag)] for z in self.value],
            "last_shell": self.last_shell,
            "cutoff": self.cutoff,
        }


# ---------------------------------------------------------------------------
# Coset representatives
# ---------------------------------------------------------------------------


def complete_row(c: int, d: int) -> SL2Matrix:
    """SL2(Z) matrix with bottom row (c, d) and 0 <= a < |c| (a = d when c = 0)."""
    if c == 0:
        if abs(d) != 1:
            raise ValueError(f"({c}, {d}) is not a coprime pair")
        return SL2Matrix(d, 0, 0, d)
    a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
    b, r = divmod(a * d - 1, c)
    assert r == 0
    return SL2Matrix(a, b, c, d)


def in_window(c: int, d: int, C: int) -> bool:
    return c * c + d * d < C * C or (c == 0 and abs(d) == 1)


def coset_rows(C: int) -> list[tuple[int, int]]:
    """All coprime (c, d) of both signs in the window of cutoff C, sorted."""
    rows = []
    for c in range(-C, C + 1):
        for d in range(-C, C + 1):
            if (c or d) and math.gcd(c, d) == 1 and in_window(c, d, C):
                rows.append((c, d))
    return rows


def coset_vectors(D: DiscriminantGroup, lam: Residues, rows: Sequence[tuple[int, int]]) -> np.ndarray:
    """rho(M~)^{-1} e_lambda for each completed row, stacked as rows."""
    if D.order == 1:
        return np.ones((len(rows), 1), dtype=complex)
    eng = weil_engine(D)
    e_lam = np.zeros(D.order, dtype=complex)
    e_lam[D.index(lam)] = 1
    return np.array([eng.standard_lift_inverse_apply(complete_row(c, d), e_lam) for c, d in rows])


@lru_cache(maxsize=32)
def _window(D: DiscriminantGroup, lam: Residues, C: int):
    rows = coset_rows(C)
    cs = np.array([r[0] for r in rows], dtype=np.float64)
    ds = np.array([r[1] for r in rows], dtype=np.float64)
    W = coset_vectors(D, lam, rows)
    norms = np.array([r[0] ** 2 + r[1] ** 2 for r in rows])
    shell = norms >= (C - 1) ** 2 if C > 1 else np.ones(len(rows), dtype=bool)
    return rows, cs, ds, W, shell


def _check_region(spec: EisensteinSpec) -> None:
    if spec.s.real <= 1 - spec.k / 2:
        warnings.warn(
            f"Re(s) = {spec.s.real} <= 1 - k/2 = {1 - spec.k / 2}: outside the region of normal convergence; "
            "the truncated sum is reported without analytic continuation",
            ConvergenceWarning,
            stacklevel=3,
        )


def _evaluate(spec: EisensteinSpec, taus: np.ndarray, C: int) -> tuple[np.ndarray, np.ndarray]:
    rows, cs, ds, W, shell = _window(spec.disc, spec.coset, C)
    inner = ~shell
    total = np.zeros((len(taus), spec.disc.order), dtype=complex)
    shell_val = 0.5 * _accel.coset_series(cs[shell], ds[shell], W[shell], taus, spec.k, spec.s)
    if inner.any():
        total += 0.5 * _accel.coset_series(cs[inner], ds[inner], W[inner], taus, spec.k, spec.s)
    return total + shell_val, shell_val


def eisenstein_value(spec: EisensteinSpec, tau: complex, policy: TruncationPolicy) -> EisensteinResult:
    _check_region(spec)
    value, shell = _evaluate(spec, np.array([complex(tau)]), policy.cutoff)
    terms = len(_window(spec.disc, spec.coset, policy.cutoff)[0])
    return EisensteinResult(value[0], float(np.max(np.abs(shell[0]))), policy.cutoff, terms)


def slash(f, k, M: SL2Matrix, tau: complex, D: DiscriminantGroup) -> np.ndarray:
    """(f |_k M~)(tau) = sqrt(c tau + d)^{-2k} rho(M~)^{-1} f(M tau).

    ``f`` is either a callable on the upper half plane or the value f(M tau).
    """
    val = np.asarray(f(M.act(tau)) if callable(f) else f, dtype=complex)
    phi = principal_sqrt_j(M, tau)
    R = rho_standard_lift(D, M)
    return phi ** (-2 * float(k)) * (R.conj().T @ val)


def laplacian_residual(spec: EisensteinSpec, tau: complex, policy: TruncationPolicy, h: float = 1e-3) -> float:
    """Relative residual of the eigenvalue equation, by central differences.

    The weight-k Laplacian is taken with the sign v^2 (d_uu + d_vv) - i k v (d_u + i d_v),
    for which v^s has eigenvalue s (s + k - 1).
    """
    _check_region(spec)
    tau = complex(tau)
    v = tau.imag
    taus = np.array([tau, tau + h, tau - h, tau + 1j * h, tau - 1j * h])
    E, _ = _evaluate(spec, taus, policy.cutoff)
    E0, Eup, Eum, Evp, Evm = E
    E_uu = (Eup - 2 * E0 + Eum) / h**2
    E_vv = (Evp - 2 * E0 + Evm) / h**2
    E_u = (Eup - Eum) / (2 * h)
    E_v = (Evp - Evm) / (2 * h)
    k, s = spec.k, spec.s
    lap = v**2 * (E_uu + E_vv) - 1j * k * v * (E_u + 1j * E_v)
    resid = lap - s * (s + k - 1) * E0
    return float(np.max(np.abs(resid)) / np.max(np.abs(E0)))


@dataclass
class GrowthSample:
    v: float
    ratio: float
    unstable: bool


def growth_probe(spec: EisensteinSpec, v_list: Sequence[float], policy: TruncationPolicy) -> list[GrowthSample]:
    """||E(iv, s)||_inf / v^sigma with sigma = max(Re s, Re(1 - k - s)); diagnostic only."""
    if any(b <= a for a, b in zip(v_list, v_list[1:])) or min(v_list) < 1:
        raise ValueError("v_list must be increasing with v >= 1")
    sigma = max(spec.s.real, (1 - spec.k - spec.s).real)
    out = []
    for v in v_list:
        res = eisenstein_value(spec, 1j * v, policy)
        size = float(np.max(np.abs(res.value)))
        out.append(GrowthSample(float(v), size / v**sigma, res.last_shell > 0.1 * size))
    return out


@dataclass
class ModularityCheck:
    residual: float
    bound: float
    predicted: float


def eisenstein_modularity_check(spec: EisensteinSpec, M: SL2Matrix, tau: complex, policy: TruncationPolicy) -> ModularityCheck:
    """Compare E_C(M tau) with sqrt(j)^{2k} rho(M~) E_C(tau).

    Slashing the truncated sum by M permutes coset terms, so the discrepancy is
    carried by rows in the symmetric difference of the window W and W*M.
    ``bound`` is the sum of those term magnitudes; ``predicted`` is the residual
    left after adding the symmetric-difference terms back in (zero up to rounding).
    """
    C = policy.cutoff
    tau = complex(tau)
    rows = coset_rows(C)
    moved = {(c * M.a + d * M.c, c * M.b + d * M.d) for c, d in rows}
    window = set(rows)
    entering = sorted(moved - window)
    leaving = sorted(window - moved)
    lhs, _ = _evaluate(spec, np.array([M.act(tau)]), C)
    base, _ = _evaluate(spec, np.array([tau]), C)
    phi = principal_sqrt_j(M, tau)
    R = rho_standard_lift(spec.disc, M)
    rhs = phi ** (2 * spec.k) * (R @ base[0])
    residual = float(np.max(np.abs(lhs[0] - rhs)))

    def terms(pairs):
        if not pairs:
            return np.zeros(spec.disc.order, dtype=complex), 0.0
        c = np.array([p[0] for p in pairs], dtype=np.float64)
        d = np.array([p[1] for p in pairs], dtype=np.float64)
        W = coset_vectors(spec.disc, spec.coset, pairs)
        val = 0.5 * _accel.coset_series(c, d, W, np.array([tau]), spec.k, spec.s)[0]
        mags = 0.5 * np.abs(c * tau + d) ** (-spec.k) * (tau.imag / np.abs(c * tau + d) ** 2) ** spec.s.real
        return val, float(mags.sum())

    v_in, m_in = terms(entering)
    v_out, m_out = terms(leaving)
    scale = abs(phi) ** (2 * spec.k)
    corrected = phi ** (2 * spec.k) * (R @ (base[0] + v_in - v_out))
    return ModularityCheck(residual, scale * (m_in + m_out), float(np.max(np.abs(lhs[0] - corrected))))


def adelic_parameter(s_adelic: complex, l) -> complex:
    """Classical spectral parameter (s + 1 - l) / 2 matching the adelic normalisation."""
    return (complex(s_adelic) + 1 - float(Fraction(l))) / 2


def adelic_parameter_inverse(s_classical: complex, l) -> complex:
    return 2 * complex(s_classical) + float(Fraction(l)) - 1
