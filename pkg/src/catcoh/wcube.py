"""Cubical cochains from the Boardman-Vogt W-construction.

An n-cube is a composable sequence f = (f1, ..., f(n+1)) read right to left,
a(n+1) --f(n+1)--> a(n) --> ... --f1--> a0, carrying the coefficient group
D(f1 ∘ ... ∘ f(n+1)). The coboundary of a cochain κ on (n-1)-cubes uses the
two extremal product facets and the n composition facets d_i^0:

    (δκ)(f) = (-1)^(n+1) (f1)_* κ(f2, ..., f(n+1))
              + Σ_{j=1..n} (-1)^(n+1-j) κ(f1, ..., fj∘f(j+1), ..., f(n+1))
              + (f(n+1))^* κ(f1, ..., fn)

The interior product facets d_i^1 (1 < i < n) never enter. Signs are fixed so
that reversing each sequence identifies this complex with the nerve complex
one degree up, matrix for matrix.
"""

from __future__ import annotations

import numpy as np

from .abgrp import AbHom
from .bwcoh import DEFAULT_BUDGET, BWComplex, _Complex
from .fincat import FiniteCategory


def cubes(cat: FiniteCategory, n: int, nondegenerate_only: bool = True):
    """Composable (n+1)-sequences (f1, ..., f(n+1)), lexicographic by id."""
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    pool = [f for f in range(len(cat))
            if not (nondegenerate_only and cat.is_identity(f))]
    # f(j+1) must end where f(j) starts
    ending_at = {o: [f for f in pool if cat.tgt(f) == o] for o in cat.objects}
    out = []
    stack = [(f,) for f in reversed(pool)]
    while stack:
        seq = stack.pop()
        if len(seq) == n + 1:
            out.append(seq)
            continue
        for f in reversed(ending_at[cat.src(seq[-1])]):
            stack.append(seq + (f,))
    return out


def cube_arrow(cat: FiniteCategory, c) -> int:
    """f1 ∘ f2 ∘ ... ∘ f(n+1)."""
    acc = c[-1]
    for f in reversed(c[:-1]):
        acc = cat.compose(f, acc)
    return acc


def composition_facet(cat: FiniteCategory, c, j: int):
    """d_j^0: carry out the j-th composition fj ∘ f(j+1) (1-based)."""
    return c[:j - 1] + (cat.compose(c[j - 1], c[j]),) + c[j + 1:]


def cube_to_simplex(c) -> tuple:
    return tuple(reversed(c))


def cube_simplex_bijection(cat: FiniteCategory, n: int):
    """Pairs (n-cube, (n+1)-simplex) of nondegenerate cells."""
    if n < 1:
        raise ValueError("the correspondence starts at n = 1")
    return [(c, cube_to_simplex(c)) for c in cubes(cat, n)]


class CubicalComplex(_Complex):
    """Normalized cubical cochain complex; degree n lives on n-cubes."""

    def _cells(self, n):
        return cubes(self.cat, n)

    def _arrow(self, cell):
        return cube_arrow(self.cat, cell)

    def _faces(self, n, c):
        # c is an (n+1)-cube (n+2 arrows); faces are n-cubes
        cat, ns = self.cat, self.ns
        k = n + 1
        out = []
        rest = c[1:]
        out.append(((-1) ** (k + 1), rest, ns.post_map(c[0], cube_arrow(cat, rest))))
        for j in range(1, k + 1):
            fc = composition_facet(cat, c, j)
            if any(cat.is_identity(f) for f in fc):
                continue
            out.append(((-1) ** (k + 1 - j), fc, None))
        head = c[:-1]
        out.append((1, head, ns.pre_map(cube_arrow(cat, head), c[-1])))
        return out


def cubical_coboundary(cat, ns, n) -> AbHom:
    """Coboundary from cochains on (n-1)-cubes to cochains on n-cubes."""
    if n < 1:
        raise ValueError("cubical coboundary is defined for n >= 1")
    return CubicalComplex(cat, ns, budget=None).delta(n - 1)


def cubical_cohomology(cat, ns, n, budget=DEFAULT_BUDGET):
    """Invariant factors of the cubical complex in degree n (n >= 0).

    For n >= 1 this agrees with H^(n+1)_BW; degree 0 is not augmented.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    return CubicalComplex(cat, ns, budget=budget).cohomology(n)


def matrices_correspond(cube_cx: CubicalComplex, bw_cx: BWComplex, n: int) -> bool:
    """Entrywise equality of cubical δ (degree n-1 -> n) and BW δ^n.

    Rows and columns of the cubical matrix are permuted along the bijection
    cube -> reversed simplex before comparing.
    """
    cm = cube_cx.delta(n - 1).matrix
    bm = bw_cx.delta(n).matrix
    if cm.shape != bm.shape:
        return False
    row_perm = _permutation(cube_cx, bw_cx, n, n + 1)
    col_perm = _permutation(cube_cx, bw_cx, n - 1, n)
    if row_perm is None or col_perm is None:
        return False
    return bool(np.all(cm[np.ix_(row_perm, col_perm)] == bm))


def _permutation(cube_cx, bw_cx, cube_deg, bw_deg):
    """Index list p with cube ambient coordinate p[i] matching BW coordinate i."""
    cube_off = cube_cx.offsets(cube_deg)
    perm = []
    for s in bw_cx.basis(bw_deg):
        c = cube_to_simplex(s)
        if c not in cube_off:
            return None
        o = cube_off[c]
        perm.extend(range(o, o + cube_cx.coefficient(c).rank))
    if len(perm) != len(cube_off) and sum(
            cube_cx.coefficient(c).rank for c in cube_off) != len(perm):
        return None
    return perm
