"""Weil representation of Mp2(Z) on C[L'/L].

Metaplectic elements are handled as words in T and S. The square root of the
automorphy factor carried by a word is tracked numerically at the base point
``tau0 = 2i`` so that the standard lift ``(M, sqrt(c*tau + d))`` of an
SL2(Z) matrix can be told apart from its partner ``(M, -sqrt(c*tau + d))``.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import numpy as np

from .discriminant import DiscriminantGroup
from .errors import OrderCapExceeded, PhaseAmbiguous, TrivialityViolated

WEIL_ORDER_CAP = 4096
TAU0 = 2j
_LETTERS = {"T": ("T", 1), "t": ("T", -1), "S": ("S", 1), "s": ("S", -1)}


def e(x):
    return np.exp(2j * np.pi * x)


# ---------------------------------------------------------------------------
# SL2(Z) and words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SL2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __matmul__(self, o: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "SL2Matrix":
        return SL2Matrix(self.d, -self.b, -self.c, self.a)

    def act(self, tau: complex) -> complex:
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def j(self, tau: complex) -> complex:
        return self.c * tau + self.d

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


SL2_I = SL2Matrix(1, 0, 0, 1)
SL2_T = SL2Matrix(1, 1, 0, 1)
SL2_S = SL2Matrix(0, -1, 1, 0)


def _gen_power(g: str, n: int) -> SL2Matrix:
    if g == "T":
        return SL2Matrix(1, n, 0, 1)
    m = n % 4
    out = SL2_I
    for _ in range(m):
        out = out @ SL2_S
    return out


@dataclass(frozen=True)
class MetaplecticWord:
    """Free word in T, S and their inverses, stored as runs ``(generator, exponent)``."""

    runs: tuple[tuple[str, int], ...] = ()

    @classmethod
    def from_runs(cls, runs: Iterable[tuple[str, int]]) -> "MetaplecticWord":
        out: list[list] = []
        for g, n in runs:
            if g not in ("T", "S"):
                raise ValueError(f"unknown generator {g!r}")
            if n == 0:
                continue
            if out and out[-1][0] == g:
                out[-1][1] += n
                if out[-1][1] == 0:
                    out.pop()
            else:
                out.append([g, n])
        return cls(tuple((g, n) for g, n in out))

    @classmethod
    def parse(cls, text: str) -> "MetaplecticWord":
        try:
            return cls.from_runs(_LETTERS[ch] for ch in text if not ch.isspace())
        except KeyError as exc:
            raise ValueError(f"invalid letter {exc.args[0]!r} in word {text!r}") from None

    def __str__(self) -> str:
        parts = []
        for g, n in self.runs:
            parts.append((g if n > 0 else g.lower()) * abs(n))
        return "".join(parts)

    def __len__(self) -> int:
        return sum(abs(n) for _, n in self.runs)

    def __mul__(self, other: "MetaplecticWord") -> "MetaplecticWord":
        return MetaplecticWord.from_runs(self.runs + other.runs)

    def inverse(self) -> "MetaplecticWord":
        return MetaplecticWord.from_runs((g, -n) for g, n in reversed(self.runs))

    def project(self) -> SL2Matrix:
        M = SL2_I
        for g, n in self.runs:
            M = M @ _gen_power(g, n)
        return M


def decompose_sl2(M: SL2Matrix) -> MetaplecticWord:
    """Word in T, S whose projection to SL2(Z) is ``M``.

    Euclidean reduction on the first column: ``M = T^q S M'`` with
    ``q = a // c`` until the lower-left entry vanishes.
    """
    runs: list[tuple[str, int]] = []
    a, b, c, d = M.as_tuple()
    while c != 0:
        q = a // c
        runs.append(("T", q))
        runs.append(("S", 1))
        a, b = a - q * c, b - q * d
        # S^{-1} [[a, b], [c, d]] = [[c, d], [-a, -b]]
        a, b, c, d = c, d, -a, -b
    if a == 1:
        runs.append(("T", b))
    else:
        runs.append(("S", 2))
        runs.append(("T", -b))
    return MetaplecticWord.from_runs(runs)


def _tau0_image(M: SL2Matrix) -> complex:
    # exact real part avoids cancellation when the entries are large
    den = 4 * M.c * M.c + M.d * M.d
    return complex(float(Fraction(4 * M.a * M.c + M.b * M.d, den)), float(Fraction(2, den)))


def word_phase(w: MetaplecticWord) -> complex:
    """Value at ``tau0`` of the automorphy square root carried by the word."""
    P = SL2_I
    phase = 1 + 0j
    for g, n in reversed(w.runs):
        if g == "T":
            P = SL2Matrix(1, n, 0, 1) @ P
            continue
        step = 1 if n > 0 else -1
        for _ in range(abs(n) % 8):
            t = _tau0_image(P)
            if step == 1:
                phase *= cmath.sqrt(t)
                P = SL2_S @ P
            else:
                phase *= cmath.sqrt(-t)
                P = SL2_S.inverse() @ P
    return phase


def principal_sqrt_j(M: SL2Matrix, tau: complex = TAU0) -> complex:
    return cmath.sqrt(complex(M.c * tau + M.d))


def lift_sign(w: MetaplecticWord, tol: float = 1e-6) -> int:
    """+1 if the word equals the standard lift of its projection, -1 if it differs by Z^2."""
    M = w.project()
    ratio = word_phase(w) / principal_sqrt_j(M)
    if abs(ratio - 1) < tol:
        return 1
    if abs(ratio + 1) < tol:
        return -1
    raise PhaseAmbiguous(f"tracked phase ratio {ratio} for {M} matches neither branch")


# ---------------------------------------------------------------------------
# Representation matrices
# ---------------------------------------------------------------------------


def _check_cap(D: DiscriminantGroup, cap: int) -> None:
    if D.order > cap:
        raise OrderCapExceeded(f"|D| = {D.order} exceeds cap {cap}")


class WeilEngine:
    """Precomputed generator data for one discriminant form."""

    def __init__(self, D: DiscriminantGroup):
        self.D = D
        self.dim = D.order
        self.sig = D.signature_mod8
        N = D.level
        self.q_num = D.q_numerators
        self.t_diag = e(self.q_num / N)
        B = D.bilinear_numerators()
        self.S = e(-self.sig / 8) / math.sqrt(self.dim) * e(-B / N)
        self.S_inv = self.S.conj().T
        neg = np.array([D.index(D.neg(x)) for x in D.elements], dtype=np.intp)
        self.neg = neg
        Z = np.zeros((self.dim, self.dim), dtype=complex)
        Z[neg, np.arange(self.dim)] = e(-self.sig / 4)
        self.Z = Z

    def t_power(self, n: int) -> np.ndarray:
        N = self.D.level
        return e((n % N) * self.q_num % N / N)

    def s_power(self, n: int) -> np.ndarray:
        m = n % 8
        return np.linalg.matrix_power(self.S, m)

    def word_matrix(self, w: MetaplecticWord) -> np.ndarray:
        out = np.eye(self.dim, dtype=complex)
        for g, n in w.runs:
            if g == "T":
                out = out * self.t_power(n)[None, :]
            else:
                G = self.S if n > 0 else self.S_inv
                for _ in range(abs(n) % 8):
                    out = out @ G
        return out

    def apply_inverse(self, w: MetaplecticWord, v: np.ndarray) -> np.ndarray:
        """rho(w)^{-1} v, applied letter by letter."""
        out = np.array(v, dtype=complex)
        for g, n in w.runs:
            if g == "T":
                out = self.t_power(-n) * out
            else:
                G = self.S_inv if n > 0 else self.S
                for _ in range(abs(n) % 8):
                    out = G @ out
        return out

    def z_squared_scalar(self) -> complex:
        return complex(e(-self.sig / 2))

    def standard_lift_inverse_apply(self, M: SL2Matrix, v: np.ndarray) -> np.ndarray:
        w = decompose_sl2(M)
        out = self.apply_inverse(w, v)
        if lift_sign(w) == -1:
            # rho(M~)^{-1} = rho(Z^2) rho(w)^{-1}
            out = out * self.z_squared_scalar()
        return out


@lru_cache(maxsize=64)
def weil_engine(D: DiscriminantGroup, cap: int = WEIL_ORDER_CAP) -> WeilEngine:
    _check_cap(D, cap)
    return WeilEngine(D)


def rho_T(D: DiscriminantGroup, cap: int = WEIL_ORDER_CAP) -> np.ndarray:
    return np.diag(weil_engine(D, cap).t_diag)


def rho_S(D: DiscriminantGroup, cap: int = WEIL_ORDER_CAP) -> np.ndarray:
    return weil_engine(D, cap).S.copy()


def rho_Z(D: DiscriminantGroup, cap: int = WEIL_ORDER_CAP) -> np.ndarray:
    return weil_engine(D, cap).Z.copy()


def rho_word(D: DiscriminantGroup, w: MetaplecticWord | str, cap: int = WEIL_ORDER_CAP) -> np.ndarray:
    if isinstance(w, str):
        w = MetaplecticWord.parse(w)
    return weil_engine(D, cap).word_matrix(w)


def rho_standard_lift(D: DiscriminantGroup, M: SL2Matrix, cap: int = WEIL_ORDER_CAP) -> np.ndarray:
    """rho of (M, principal sqrt(c*tau + d))."""
    eng = weil_engine(D, cap)
    w = decompose_sl2(M)
    R = eng.word_matrix(w)
    if lift_sign(w) == -1:
        # w = M~ * Z^2
        R = R / eng.z_squared_scalar()
    return R


def dual_weil(R: np.ndarray) -> np.ndarray:
    return R.conj()


# ---------------------------------------------------------------------------
# Congruence subgroups
# ---------------------------------------------------------------------------


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extended to n <= 0 and even n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def theta_multiplier_sign(M: SL2Matrix) -> complex:
    """eps_d^{-1} * (c/d) for the section of Gamma(4) into Mp2(Z)."""
    eps = 1 if M.d % 4 == 1 else 1j
    return kronecker(M.c, M.d) / eps


def sample_gamma_n(N: int, count: int, seed: int = 0, depth: int = 12) -> list[SL2Matrix]:
    """Pseudo-random elements of Gamma(N): products of elementary matrices I + N*x*E."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        M = SL2_I
        for _ in range(rng.randint(1, depth)):
            x = N * rng.choice((-2, -1, 1, 2))
            E = SL2Matrix(1, x, 0, 1) if rng.random() < 0.5 else SL2Matrix(1, 0, x, 1)
            M = M @ E
        out.append(M)
    return out


@dataclass
class CongruenceReport:
    modulus: int
    odd_rank: bool
    samples: int
    max_deviation: float
    matrices: list[tuple[int, int, int, int]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "odd_rank": self.odd_rank,
            "samples": self.samples,
            "max_deviation": self.max_deviation,
            "trivial": True,
        }


def section_rho(D: DiscriminantGroup, M: SL2Matrix, cap: int = WEIL_ORDER_CAP) -> np.ndarray:
    """rho of the Gamma(4) section (M, eps_d^{-1} (c/d) sqrt(j(M, tau)))."""
    R = rho_standard_lift(D, M, cap)
    u = theta_multiplier_sign(M)
    if u == 1:
        return R
    if u == -1:
        return R * weil_engine(D, cap).z_squared_scalar()
    raise ValueError(f"{M} is not in Gamma(4)")


def verify_congruence_trivial(
    D: DiscriminantGroup,
    sample_count: int = 100,
    modulus: int | None = None,
    seed: int = 0,
    tol: float = 1e-8,
    cap: int = WEIL_ORDER_CAP,
) -> CongruenceReport:
    N = D.level if modulus is None else modulus
    odd = D.source.rank % 2 == 1
    if odd and N % 4:
        raise ValueError(f"odd rank requires 4 | N, got N = {N}")
    eye = np.eye(D.order)
    worst = 0.0
    mats = [SL2Matrix(1, N, 0, 1), SL2Matrix(1, 0, N, 1)] + sample_gamma_n(N, sample_count, seed)
    for M in mats:
        R = section_rho(D, M, cap) if odd else rho_standard_lift(D, M, cap)
        dev = float(np.max(np.abs(R - eye)))
        worst = max(worst, dev)
        if dev > tol:
            raise TrivialityViolated(f"rho{M.as_tuple()} deviates from identity by {dev:.3g}")
    return CongruenceReport(N, odd, len(mats), worst, [M.as_tuple() for M in mats])
