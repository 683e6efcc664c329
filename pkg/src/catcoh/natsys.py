"""Natural systems of abelian groups on a finite category.

A natural system D assigns a presented group D(f) to every arrow f, with
g_*: D(f) -> D(g∘f) and h^*: D(f) -> D(f∘h). The action of a general square
(α, β): f -> β∘f∘α of Fac K is derived as β_* ∘ α^*.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .abgrp import AbHom, FpAbGroup, identity, intmat
from .fincat import FiniteCategory, ValidationReport


class FunctorialityError(ValueError):
    pass


def _mat(m) -> np.ndarray:
    if isinstance(m, np.ndarray) and m.dtype == object:
        return m
    return intmat(m) if len(m) else np.zeros((0, 0), dtype=object)


class NaturalSystem:
    """Values per arrow plus post/pre structure maps on generators.

    ``post[(g, f)]`` is the matrix of g_*: D(f) -> D(g∘f); ``pre[(f, h)]`` the
    matrix of h^*: D(f) -> D(f∘h). Entries for identity g or h may be omitted
    and then mean the identity.
    """

    def __init__(self, base: FiniteCategory, value, post=None, pre=None, name=""):
        self.base = base
        self.name = name
        self.value: dict[int, FpAbGroup] = dict(value)
        self.post: dict[tuple[int, int], np.ndarray] = {
            k: _mat(v) for k, v in (post or {}).items()}
        self.pre: dict[tuple[int, int], np.ndarray] = {
            k: _mat(v) for k, v in (pre or {}).items()}

    def post_map(self, g: int, f: int) -> AbHom:
        """g_*: D(f) -> D(g∘f)."""
        cat = self.base
        src, tgt = self.value[f], self.value[cat.compose(g, f)]
        m = self.post.get((g, f))
        if m is None:
            if cat.is_identity(g):
                return AbHom(src, tgt, identity(src.rank))
            raise KeyError(f"no post map for ({cat.mname(g)}, {cat.mname(f)})")
        return AbHom(src, tgt, m)

    def pre_map(self, f: int, h: int) -> AbHom:
        """h^*: D(f) -> D(f∘h)."""
        cat = self.base
        src, tgt = self.value[f], self.value[cat.compose(f, h)]
        m = self.pre.get((f, h))
        if m is None:
            if cat.is_identity(h):
                return AbHom(src, tgt, identity(src.rank))
            raise KeyError(f"no pre map for ({cat.mname(f)}, {cat.mname(h)})")
        return AbHom(src, tgt, m)

    def square_map(self, alpha: int, beta: int, f: int) -> AbHom:
        """D(α, β) = β_* ∘ α^*: D(f) -> D(β∘f∘α)."""
        a = self.pre_map(f, alpha)
        fa = self.base.compose(f, alpha)
        return self.post_map(beta, fa).compose(a)

    def is_zero(self) -> bool:
        return all(g.is_trivial() for g in self.value.values())

    def __repr__(self):
        return f"NaturalSystem({self.name!r} on {self.base.name!r})"


def constant_system(cat: FiniteCategory, group: FpAbGroup, name="") -> NaturalSystem:
    """D(f) = A for all f, every structure map the identity."""
    value = {f: group for f in range(len(cat))}
    ident = identity(group.rank)
    post, pre = {}, {}
    for f in range(len(cat)):
        for g in cat.outgoing[cat.tgt(f)]:
            if not cat.is_identity(g):
                post[(g, f)] = ident
        for h in range(len(cat)):
            if cat.tgt(h) == cat.src(f) and not cat.is_identity(h):
                pre[(f, h)] = ident
    return NaturalSystem(cat, value, post, pre, name=name or f"const {group}")


@dataclass
class Bimodule:
    """A functor M: K^op × K -> Ab given on generators.

    ``groups[(X, Y)]`` is M(X, Y). ``covariant[(g, X)]`` is M(X, g): M(X, Y) ->
    M(X, Y') for g: Y -> Y'. ``contravariant[(h, Y)]`` is M(h, Y): M(X, Y) ->
    M(X', Y) for h: X' -> X. Missing entries for identities mean identity.
    """

    groups: dict
    covariant: dict
    contravariant: dict

    def cov(self, cat, g, x):
        m = self.covariant.get((g, x))
        if m is None:
            if cat.is_identity(g):
                return identity(self.groups[(x, cat.src(g))].rank)
            raise KeyError((g, x))
        return _mat(m)

    def contra(self, cat, h, y):
        m = self.contravariant.get((h, y))
        if m is None:
            if cat.is_identity(h):
                return identity(self.groups[(cat.tgt(h), y)].rank)
            raise KeyError((h, y))
        return _mat(m)


def _check_bimodule(cat: FiniteCategory, bm: Bimodule) -> None:
    n = len(cat)

    def hom(m, x1, y1, x2, y2):
        return AbHom(bm.groups[(x1, y1)], bm.groups[(x2, y2)], m)

    def fail(msg):
        raise FunctorialityError(msg)

    for x in cat.objects:
        for y in cat.objects:
            if (x, y) not in bm.groups:
                fail(f"bimodule has no group at ({x}, {y})")
    for g in range(n):
        y, y2 = cat.src(g), cat.tgt(g)
        for x in cat.objects:
            h = hom(bm.cov(cat, g, x), x, y, x, y2)
            if not h.is_well_defined():
                fail(f"covariant map of {cat.mname(g)} at {x} is not well defined")
            if cat.is_identity(g) and not h.equals(AbHom.identity(bm.groups[(x, y)])):
                fail(f"covariant map of identity {cat.mname(g)} at {x} is not identity")
        for y_ in cat.objects:
            h = hom(bm.contra(cat, g, y_), y2, y_, y, y_)
            if not h.is_well_defined():
                fail(f"contravariant map of {cat.mname(g)} at {y_} is not well defined")
            if cat.is_identity(g) and not h.equals(AbHom.identity(bm.groups[(y2, y_)])):
                fail(f"contravariant map of identity {cat.mname(g)} at {y_} "
                     f"is not identity")
    for g in range(n):
        for g2 in cat.outgoing[cat.tgt(g)]:
            gg = cat.compose(g2, g)
            for x in cat.objects:
                lhs = bm.cov(cat, gg, x)
                rhs = bm.cov(cat, g2, x).dot(bm.cov(cat, g, x))
                if not hom(lhs - rhs, x, cat.src(g), x, cat.tgt(g2)).is_zero():
                    fail(f"covariant functoriality fails at pair "
                         f"({cat.mname(g2)}, {cat.mname(g)}) on {x}")
            for y in cat.objects:
                # M(g2∘g, Y) = M(g, Y) ∘ M(g2, Y)
                lhs = bm.contra(cat, gg, y)
                rhs = bm.contra(cat, g, y).dot(bm.contra(cat, g2, y))
                if not hom(lhs - rhs, cat.tgt(g2), y, cat.src(g), y).is_zero():
                    fail(f"contravariant functoriality fails at pair "
                         f"({cat.mname(g2)}, {cat.mname(g)}) on {y}")
    for g in range(n):
        for h in range(n):
            # M(h, Y') ∘ M(X, g) = M(X', g) ∘ M(h, Y) as maps M(X, Y) -> M(X', Y')
            x, x2 = cat.tgt(h), cat.src(h)
            y, y2 = cat.src(g), cat.tgt(g)
            lhs = bm.contra(cat, h, y2).dot(bm.cov(cat, g, x))
            rhs = bm.cov(cat, g, x2).dot(bm.contra(cat, h, y))
            if not hom(lhs - rhs, x, y, x2, y2).is_zero():
                fail(f"bimodule actions do not commute at pair "
                     f"({cat.mname(g)}, {cat.mname(h)})")


def from_bimodule(cat: FiniteCategory, bm: Bimodule, name="") -> NaturalSystem:
    """D(f: X -> Y) = M(X, Y), g_* = M(id, g), h^* = M(h, id)."""
    _check_bimodule(cat, bm)
    value = {f: bm.groups[(cat.src(f), cat.tgt(f))] for f in range(len(cat))}
    post, pre = {}, {}
    for f in range(len(cat)):
        x, y = cat.src(f), cat.tgt(f)
        for g in cat.outgoing[y]:
            if not cat.is_identity(g):
                post[(g, f)] = bm.cov(cat, g, x)
        for h in range(len(cat)):
            if cat.tgt(h) == x and not cat.is_identity(h):
                pre[(f, h)] = bm.contra(cat, h, y)
    return NaturalSystem(cat, value, post, pre, name=name or "bimodule")


def from_group_module(cat: FiniteCategory, module: FpAbGroup, action,
                      name="") -> NaturalSystem:
    """Coefficients in a G-module: g_* acts through ``action[g]``, h^* trivially.

    Elements missing from ``action`` act as the identity.
    """
    if not cat.is_one_object():
        raise ValueError("group-module coefficients need a one-object category")
    act = {}
    for g in range(len(cat)):
        m = action.get(g)
        if m is None:
            m = identity(module.rank)
        act[g] = AbHom(module, module, _mat(m))
        if not act[g].is_well_defined():
            raise FunctorialityError(f"action of {cat.mname(g)} is not well defined")
    for g in range(len(cat)):
        if cat.is_identity(g) and not act[g].equals(AbHom.identity(module)):
            raise FunctorialityError("identity does not act trivially")
        for f in range(len(cat)):
            if not act[cat.compose(g, f)].equals(act[g].compose(act[f])):
                raise FunctorialityError(
                    f"action not multiplicative at ({cat.mname(g)}, {cat.mname(f)})")
    value = {f: module for f in range(len(cat))}
    ident = identity(module.rank)
    post, pre = {}, {}
    for f in range(len(cat)):
        for g in range(len(cat)):
            if not cat.is_identity(g):
                post[(g, f)] = act[g].matrix
                pre[(f, g)] = ident
    return NaturalSystem(cat, value, post, pre, name=name or f"module {module}")


def validate_functoriality(ns: NaturalSystem) -> ValidationReport:
    """Exhaustive check of every natural-system law over composable pairs/triples."""
    rep = ValidationReport()
    cat = ns.base
    n = len(cat)
    nm = cat.mname
    for f in range(n):
        if f not in ns.value:
            rep.add(f"no value for arrow {nm(f)}")
    if rep:
        return rep
    for (g, f) in ns.post:
        if not cat.composable(g, f):
            rep.add(f"post map stored for non-composable ({nm(g)}, {nm(f)})")
    for (f, h) in ns.pre:
        if not cat.composable(f, h):
            rep.add(f"pre map stored for non-composable ({nm(f)}, {nm(h)})")
    if rep:
        return rep
    post, pre = {}, {}
    for f in range(n):
        for g in cat.outgoing[cat.tgt(f)]:
            try:
                post[(g, f)] = ns.post_map(g, f)
            except (KeyError, ValueError) as exc:
                rep.add(f"post map ({nm(g)}, {nm(f)}): {exc}")
        for h in range(n):
            if cat.tgt(h) == cat.src(f):
                try:
                    pre[(f, h)] = ns.pre_map(f, h)
                except (KeyError, ValueError) as exc:
                    rep.add(f"pre map ({nm(f)}, {nm(h)}): {exc}")
    if rep:
        return rep
    for key, h in list(post.items()) + list(pre.items()):
        if not h.is_well_defined():
            rep.add(f"structure map at {tuple(nm(k) for k in key)} is not well defined")
    for (g, f), h in post.items():
        if cat.is_identity(g) and not h.equals(AbHom.identity(ns.value[f])):
            rep.add(f"(id)_* != id at ({nm(g)}, {nm(f)})")
    for (f, k), h in pre.items():
        if cat.is_identity(k) and not h.equals(AbHom.identity(ns.value[f])):
            rep.add(f"(id)^* != id at ({nm(f)}, {nm(k)})")
    for f in range(n):
        for g in cat.outgoing[cat.tgt(f)]:
            gf = cat.compose(g, f)
            for g2 in cat.outgoing[cat.tgt(g)]:
                lhs = post[(cat.compose(g2, g), f)]
                rhs = post[(g2, gf)].compose(post[(g, f)])
                if not lhs.equals(rhs):
                    rep.add(f"({nm(g2)}∘{nm(g)})_* != {nm(g2)}_*∘{nm(g)}_* on D({nm(f)})")
    for f in range(n):
        for h in range(n):
            if cat.tgt(h) != cat.src(f):
                continue
            fh = cat.compose(f, h)
            for h2 in range(n):
                if cat.tgt(h2) != cat.src(h):
                    continue
                lhs = pre[(f, cat.compose(h, h2))]
                rhs = pre[(fh, h2)].compose(pre[(f, h)])
                if not lhs.equals(rhs):
                    rep.add(f"({nm(h)}∘{nm(h2)})^* != {nm(h2)}^*∘{nm(h)}^* on D({nm(f)})")
    for f in range(n):
        for g in cat.outgoing[cat.tgt(f)]:
            gf = cat.compose(g, f)
            for h in range(n):
                if cat.tgt(h) != cat.src(f):
                    continue
                fh = cat.compose(f, h)
                lhs = post[(g, fh)].compose(pre[(f, h)])
                rhs = pre[(gf, h)].compose(post[(g, f)])
                if not lhs.equals(rhs):
                    rep.add(f"{nm(g)}_*∘{nm(h)}^* != {nm(h)}^*∘{nm(g)}_* on D({nm(f)})")
    return rep
