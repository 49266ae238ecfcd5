"""Induction to a sublattice (up) and its adjoint (down).

For M <= L <= L' <= M' the group L'/M sits inside M'/M and projects onto L'/L
with fibres L/M. ``up`` copies components along the projection, ``down`` sums
over fibres.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

import numpy as np

from .discriminant import DEFAULT_ORDER_CAP, DiscriminantGroup, Residues, discriminant_group
from .errors import DimensionMismatch, IndexIncompatible, OrderCapExceeded
from .lattice import EvenLattice, Sublattice
from .theta import CoefficientTable

MATERIALIZE_LIMIT = 4096


@dataclass(frozen=True, eq=False)
class CosetCorrespondence:
    L_disc: DiscriminantGroup
    M_disc: DiscriminantGroup
    sub: Sublattice
    # indices into M_disc.elements
    subgroup: tuple[int, ...]
    kernel: tuple[int, ...]
    # M-index -> L-index for members of the subgroup
    projection: dict
    # canonical lift per L-class: smallest residue vector in the fibre
    lifts: tuple[int, ...]

    @property
    def index(self) -> int:
        return self.sub.index

    @cached_property
    def up_matrix(self) -> np.ndarray:
        if self.M_disc.order > MATERIALIZE_LIMIT:
            raise OrderCapExceeded(f"|M'/M| = {self.M_disc.order} too large to materialise")
        U = np.zeros((self.M_disc.order, self.L_disc.order), dtype=np.int64)
        for mu, lam in self.projection.items():
            U[mu, lam] = 1
        return U

    @cached_property
    def down_matrix(self) -> np.ndarray:
        if self.M_disc.order > MATERIALIZE_LIMIT:
            raise OrderCapExceeded(f"|M'/M| = {self.M_disc.order} too large to materialise")
        Dm = np.zeros((self.L_disc.order, self.M_disc.order), dtype=np.int64)
        MD = self.M_disc
        for lam, mu in enumerate(self.lifts):
            x = MD.elements[mu]
            for nu in self.kernel:
                Dm[lam, MD.index(MD.add(x, MD.elements[nu]))] += 1
        return Dm


def build_correspondence(L: EvenLattice, M: Sublattice, cap: int = DEFAULT_ORDER_CAP) -> CosetCorrespondence:
    if M.parent.gram != L.gram:
        raise ValueError("sublattice does not belong to this lattice")
    LD = discriminant_group(L, cap)
    MD = discriminant_group(M.lattice, cap)
    subgroup, kernel, proj = [], [], {}
    for i, mu in enumerate(MD.elements):
        x = M.to_parent(MD.lift(mu))  # coordinates in L's basis
        if not L.in_dual(x):
            continue
        subgroup.append(i)
        proj[i] = LD.index(LD.reduce(x))
        if all(Fraction(c).denominator == 1 for c in x):
            kernel.append(i)
    lifts = [None] * LD.order
    for i in subgroup:  # canonical order => first hit is lexicographically smallest
        if lifts[proj[i]] is None:
            lifts[proj[i]] = i
    assert len(kernel) == M.index
    assert len(subgroup) == LD.order * M.index
    assert all(x is not None for x in lifts)
    return CosetCorrespondence(LD, MD, M, tuple(subgroup), tuple(kernel), proj, tuple(lifts))


def up(corr: CosetCorrespondence, f) -> np.ndarray:
    f = np.asarray(f)
    if f.shape != (corr.L_disc.order,):
        raise DimensionMismatch(f"expected {corr.L_disc.order} components, got {f.shape}")
    out = np.zeros(corr.M_disc.order, dtype=np.result_type(f, np.int64))
    for mu, lam in corr.projection.items():
        out[mu] = f[lam]
    return out


def down(corr: CosetCorrespondence, g, lifts=None) -> np.ndarray:
    """(down g)_{lam} = sum over nu in L/M of g_{mu + nu} for a fixed lift mu of lam.

    ``lifts`` overrides the canonical lift choice (one M'/M index per L-class).
    """
    g = np.asarray(g)
    MD = corr.M_disc
    if g.shape != (MD.order,):
        raise DimensionMismatch(f"expected {MD.order} components, got {g.shape}")
    lifts = corr.lifts if lifts is None else lifts
    out = np.zeros(corr.L_disc.order, dtype=np.result_type(g, np.int64))
    for lam, mu in enumerate(lifts):
        if corr.projection.get(mu) != lam:
            raise ValueError(f"index {mu} is not a lift of class {lam}")
        x = MD.elements[mu]
        out[lam] = sum(g[MD.index(MD.add(x, MD.elements[nu]))] for nu in corr.kernel)
    return out


def _check_source(corr: CosetCorrespondence, t: CoefficientTable, D: DiscriminantGroup) -> None:
    if t.divisors != D.divisors:
        raise DimensionMismatch(f"table divisors {t.divisors} do not match {D.divisors}")


def table_up(corr: CosetCorrespondence, t: CoefficientTable) -> CoefficientTable:
    LD, MD = corr.L_disc, corr.M_disc
    _check_source(corr, t, LD)
    out = CoefficientTable.from_function(MD, t.max_norm, lambda mu, n: 0)
    by_coset: dict[Residues, list] = {}
    for (lam, n), a in t.entries.items():
        by_coset.setdefault(lam, []).append((n, a))
    for i, lam in corr.projection.items():
        mu = MD.elements[i]
        for n, a in by_coset.get(LD.elements[lam], ()):
            if (mu, n) not in out.entries:
                raise IndexIncompatible(f"index ({list(mu)}, {n}) violates n = q(mu) mod 1")
            out.entries[(mu, n)] = a
    return out


def table_down(corr: CosetCorrespondence, t: CoefficientTable) -> CoefficientTable:
    LD, MD = corr.L_disc, corr.M_disc
    _check_source(corr, t, MD)
    out = CoefficientTable.from_function(LD, t.max_norm, lambda lam, n: 0)
    members = {}
    for lam_i, mu_i in enumerate(corr.lifts):
        x = MD.elements[mu_i]
        members[lam_i] = {MD.add(x, MD.elements[nu]) for nu in corr.kernel}
    owner = {mu: lam for lam, mus in members.items() for mu in mus}
    for (mu, n), a in t.entries.items():
        lam_i = owner.get(mu)
        if lam_i is None or not a:
            continue
        key = (LD.elements[lam_i], n)
        if key not in out.entries:
            raise IndexIncompatible(f"index ({list(key[0])}, {n}) violates n = q(lambda) mod 1")
        out.entries[key] += a
    return out
