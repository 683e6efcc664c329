"""Group cohomology from the normalized bar resolution.

Independent ground truth for one-object categories: cochains are functions
on n-tuples of non-identity group elements, with the textbook coboundary

    (δf)(g1, ..., g(n+1)) = g1·f(g2, ..., g(n+1))
                            + Σ (-1)^i f(..., gi·g(i+1), ...)
                            + (-1)^(n+1) f(g1, ..., gn)

Only the integer linear algebra of ``abgrp`` is shared with the other complexes.
"""

from __future__ import annotations

import itertools

import numpy as np

from .abgrp import AbHom, FpAbGroup, Homology, direct_sum, identity, intmat, zeros
from .fincat import FiniteCategory


class GroupData:
    def __init__(self, cat: FiniteCategory):
        if not cat.is_one_object():
            raise ValueError(f"{cat.name or 'category'} has {len(cat.objects)} objects; "
                             "group cohomology needs exactly one")
        self.elements = list(range(len(cat)))
        self.unit = cat.identity(cat.objects[0])
        self.mul = {(a, b): cat.compose(a, b) for a in self.elements for b in self.elements}
        for a in self.elements:
            if not any(self.mul[(a, b)] == self.unit for b in self.elements):
                raise ValueError(f"{cat.mname(a)} has no inverse; not a group")
        self.proper = [g for g in self.elements if g != self.unit]


def _tuples(gd: GroupData, n: int):
    return list(itertools.product(gd.proper, repeat=n))


def _bar_differential(gd, module, act, n):
    dom, cod = _tuples(gd, n), _tuples(gd, n + 1)
    r = module.rank
    idx = {t: k for k, t in enumerate(dom)}
    m = zeros(r * len(cod), r * len(dom))
    eye = identity(r)
    for row, t in enumerate(cod):
        rs = slice(row * r, (row + 1) * r)

        def add(sign, args, mat):
            if gd.unit in args:
                return
            col = idx[tuple(args)]
            m[rs, col * r:(col + 1) * r] += sign * mat

        add(1, t[1:], act[t[0]])
        for i in range(1, n + 1):
            merged = t[:i - 1] + (gd.mul[(t[i - 1], t[i])],) + t[i + 1:]
            add((-1) ** i, merged, eye)
        add((-1) ** (n + 1), t[:-1], eye)
    src = direct_sum([module] * len(dom))
    tgt = direct_sum([module] * len(cod))
    return AbHom(src, tgt, m)


def oracle_group_cohomology(cat: FiniteCategory, module: FpAbGroup, action, n: int):
    """H^n(G; M) as ``(free_rank, torsion)``.

    ``action[g]`` is the matrix of g acting on the generators of ``module``;
    missing elements act trivially.
    """
    gd = GroupData(cat)
    act = {}
    for g in gd.elements:
        a = action.get(g) if action else None
        act[g] = identity(module.rank) if a is None else np.asarray(
            intmat(a) if not isinstance(a, np.ndarray) else a, dtype=object)
    if n < 0:
        raise ValueError("degree must be nonnegative")
    d_out = _bar_differential(gd, module, act, n)
    if n == 0:
        d_in = AbHom(FpAbGroup.trivial(), d_out.source, zeros(d_out.source.rank, 0))
    else:
        d_in = _bar_differential(gd, module, act, n - 1)
    return Homology(d_in, d_out).invariant_factors()
