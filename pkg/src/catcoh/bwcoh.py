"""The Baues-Wirsching cochain complex on the nerve of a finite category.

A degree-n cochain assigns to each n-simplex σ = (λ1, ..., λn) an element of
D(λn ∘ ... ∘ λ1). For a forward chain σ = (λ1, ..., λ(n+1)) the coboundary is

    (δc)(σ) = λ1^* c(λ2, ..., λ(n+1))
              + Σ_{i=1..n} (-1)^i c(λ1, ..., λ(i+1)∘λi, ..., λ(n+1))
              + (-1)^(n+1) λ(n+1)_* c(λ1, ..., λn)

In the normalized complex only nondegenerate simplices carry cochains and
faces landing on degenerate simplices contribute nothing.
"""

from __future__ import annotations

import numpy as np

from .abgrp import AbHom, CompositionError, FpAbGroup, Homology, direct_sum, zeros
from .fincat import (FiniteCategory, Vertex, face, is_degenerate, nerve_simplices,
                     partial_max)
from .natsys import NaturalSystem

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    def __init__(self, degree: int, size: int, budget: int):
        super().__init__(f"degree {degree} basis has {size} cells, budget is {budget}")
        self.degree = degree
        self.size = size
        self.budget = budget


class ConventionError(RuntimeError):
    """δδ != 0: the coboundary conventions are inconsistent."""


class _Complex:
    """Shared assembly of a cochain complex from per-cell face data.

    Subclasses provide ``_cells(n)``, ``_arrow(cell)`` (the arrow whose
    coefficient group the cell carries) and ``_faces(n, cell)``: the list of
    ``(sign, face_cell, structure_hom_or_None)`` making up δ^(n)(·)(cell) for
    an (n+1)-cell.
    """

    lowest_degree = 0

    def __init__(self, cat: FiniteCategory, ns: NaturalSystem,
                 budget: int | None = DEFAULT_BUDGET):
        if ns.base is not cat and len(ns.base) != len(cat):
            raise ValueError("natural system lives on a different category")
        self.cat = cat
        self.ns = ns
        self.budget = budget
        self._basis: dict[int, list] = {}
        self._groups: dict[int, FpAbGroup] = {}
        self._offsets: dict[int, dict] = {}
        self._delta: dict[int, AbHom] = {}
        self._homology: dict[int, Homology] = {}

    def basis(self, n: int) -> list:
        if n not in self._basis:
            cells = self._cells(n) if n >= self.lowest_degree else []
            if self.budget is not None and len(cells) > self.budget:
                raise BudgetExceeded(n, len(cells), self.budget)
            self._basis[n] = cells
        return self._basis[n]

    def coefficient(self, cell) -> FpAbGroup:
        return self.ns.value[self._arrow(cell)]

    def group(self, n: int) -> FpAbGroup:
        if n not in self._groups:
            self._groups[n] = direct_sum(self.coefficient(c) for c in self.basis(n))
        return self._groups[n]

    def offsets(self, n: int) -> dict:
        if n not in self._offsets:
            off, pos = {}, 0
            for c in self.basis(n):
                off[c] = pos
                pos += self.coefficient(c).rank
            self._offsets[n] = off
        return self._offsets[n]

    def delta(self, n: int) -> AbHom:
        """The coboundary from degree n to degree n+1."""
        if n not in self._delta:
            src, tgt = self.group(n), self.group(n + 1)
            m = zeros(tgt.rank, src.rank)
            if n >= self.lowest_degree:
                src_off = self.offsets(n)
                for cell, row in self.offsets(n + 1).items():
                    r = self.coefficient(cell).rank
                    if r == 0:
                        continue
                    for sign, fc, hom in self._faces(n, cell):
                        col = src_off.get(fc)
                        if col is None:
                            continue
                        c = self.coefficient(fc).rank
                        if hom is None:
                            for k in range(r):
                                m[row + k, col + k] += sign
                        else:
                            m[row:row + r, col:col + c] += sign * hom.matrix
            self._delta[n] = AbHom(src, tgt, m)
        return self._delta[n]

    def check_dd(self, n: int) -> bool:
        """True iff δ^(n+1) ∘ δ^(n) vanishes on cosets."""
        return self.delta(n + 1).compose(self.delta(n)).is_zero()

    def homology(self, n: int) -> Homology:
        if n not in self._homology:
            try:
                self._homology[n] = Homology(self.delta(n - 1), self.delta(n))
            except CompositionError as exc:
                raise ConventionError(f"δδ != 0 at degree {n}: {exc}") from exc
        return self._homology[n]

    def cohomology(self, n: int) -> tuple[int, list[int]]:
        return self.homology(n).invariant_factors()

    def evaluate(self, n: int, cochain) -> dict:
        """Split an ambient degree-n vector into per-cell values."""
        cochain = np.asarray(cochain, dtype=object).reshape(-1)
        return {c: cochain[o:o + self.coefficient(c).rank]
                for c, o in self.offsets(n).items()}

    def assemble(self, n: int, values: dict) -> np.ndarray:
        """Inverse of :meth:`evaluate`; cells missing from ``values`` get 0."""
        v = zeros(self.group(n).rank, 1).reshape(-1)
        for c, o in self.offsets(n).items():
            if c in values:
                x = np.asarray(values[c], dtype=object).reshape(-1)
                v[o:o + len(x)] = x
        return v


class BWComplex(_Complex):
    """The (normalized by default) Baues-Wirsching complex on the nerve."""

    def __init__(self, cat, ns, normalized: bool = True, budget=DEFAULT_BUDGET):
        super().__init__(cat, ns, budget)
        self.normalized = normalized

    def _cells(self, n):
        return nerve_simplices(self.cat, n, nondegenerate_only=self.normalized)

    def _arrow(self, cell):
        return partial_max(self.cat, cell)

    def _faces(self, n, tau):
        cat, ns = self.cat, self.ns
        k = n + 1
        out = []
        first = face(cat, tau, 0)
        out.append((1, first, ns.pre_map(partial_max(cat, first), tau[0])))
        for i in range(1, k):
            s = face(cat, tau, i)
            if self.normalized and is_degenerate(cat, s):
                continue
            out.append(((-1) ** i, s, None))
        last = face(cat, tau, k)
        out.append(((-1) ** k, last, ns.post_map(tau[-1], partial_max(cat, last))))
        return out


def cochain_group(cat, ns, n, normalized=True) -> FpAbGroup:
    """⊕ over n-simplices σ of D(∂max σ)."""
    return BWComplex(cat, ns, normalized=normalized, budget=None).group(n)


def coboundary(cat, ns, n, normalized=True) -> AbHom:
    return BWComplex(cat, ns, normalized=normalized, budget=None).delta(n)


def bw_cohomology(cat, ns, n, normalized=True, budget=DEFAULT_BUDGET):
    """Invariant factors ``(free_rank, torsion)`` of H^n_BW(K; D)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return BWComplex(cat, ns, normalized=normalized, budget=budget).cohomology(n)


# independent ground truth, re-exported for callers of this module
from .oracle import oracle_group_cohomology  # noqa: E402

__all__ = [
    "BWComplex", "BudgetExceeded", "ConventionError", "DEFAULT_BUDGET",
    "bw_cohomology", "coboundary", "cochain_group", "oracle_group_cohomology", "Vertex",
]
