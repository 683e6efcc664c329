"""Finite track categories, linear track extensions and their 3-cocycle.

Two concrete track categories share one duck-typed interface:

* :class:`TableTrackCategory` stores every 2-cell and operation explicitly
  (crossed modules and hand-written files end up here);
* :class:`FreeTrackCategory` realizes a 3-cocycle on the free category over
  the non-identity arrows of K. Its 1-cells are words, and a 2-cell w => w'
  between words with equal composite is a label in D([w]). Its operations
  are closed formulas, so only validation needs a finite window of words.

The interface: ``one_cells(max_len)``, ``src1/tgt1``, ``compose1(v, u)`` (v
after u, None when undefined), ``identity1(obj)``, ``cells(f, g)``,
``source/target`` of a 2-cell, ``vcomp(K, H)`` (H first), ``identity_cell``,
``inverse``, ``post(k, H)`` (k_* H) and ``pre(H, h)`` (h^* H).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .abgrp import AbHom, FpAbGroup, in_image
from .bwcoh import BWComplex
from .fincat import FiniteCategory, ValidationReport, nerve_simplices, validate
from .natsys import NaturalSystem


class TrackError(ValueError):
    pass


# ---------------------------------------------------------------- tables

@dataclass(frozen=True)
class Cell:
    """A named 2-cell of a table track category."""

    id: int
    name: str
    source: int
    target: int


class TableTrackCategory:
    """Track category over a finite E0 with explicit 2-cell tables.

    ``vcomp[(K, H)]`` is K □ H (H first), ``post[(k, H)]`` is k_* H for a
    1-cell k and ``pre[(H, h)]`` is h^* H. ``identity_cells[f]`` is the identity
    2-cell of f.
    """

    def __init__(self, base: FiniteCategory, cells, identity_cells, vcomp, post, pre,
                 name=""):
        self.base = base
        self.name = name
        self.cell_list: list[Cell] = [
            c if isinstance(c, Cell) else Cell(i, *c) for i, c in enumerate(cells)]
        self.identity_cells: dict[int, int] = dict(identity_cells)
        self.vcomp_table: dict[tuple[int, int], int] = dict(vcomp)
        self.post_table: dict[tuple[int, int], int] = dict(post)
        self.pre_table: dict[tuple[int, int], int] = dict(pre)
        self._hom: dict[tuple[int, int], list[int]] = {}
        for c in self.cell_list:
            self._hom.setdefault((c.source, c.target), []).append(c.id)

    # 1-cells
    def one_cells(self, max_len=None):
        return list(range(len(self.base)))

    def src1(self, f):
        return self.base.src(f)

    def tgt1(self, f):
        return self.base.tgt(f)

    def compose1(self, g, f):
        return self.base.compose_table.get((g, f))

    def identity1(self, obj):
        return self.base.identity(obj)

    def name1(self, f):
        return self.base.mname(f)

    # 2-cells
    def cells(self, f, g):
        return list(self._hom.get((f, g), []))

    def all_cells(self):
        return [c.id for c in self.cell_list]

    def source(self, h):
        return self.cell_list[h].source

    def target(self, h):
        return self.cell_list[h].target

    def name2(self, h):
        return self.cell_list[h].name

    def vcomp(self, k, h):
        return self.vcomp_table[(k, h)]

    def identity_cell(self, f):
        return self.identity_cells[f]

    def inverse(self, h):
        f, g = self.source(h), self.target(h)
        idf = self.identity_cell(f)
        for k in self.cells(g, f):
            if self.vcomp_table.get((k, h)) == idf:
                return k
        raise TrackError(f"2-cell {self.name2(h)} has no inverse")

    def post(self, k, h):
        return self.post_table[(k, h)]

    def pre(self, h, k):
        return self.pre_table[(h, k)]


def from_crossed_module(mult_m, elements_m, elements_c, add_c, boundary, act,
                        name="", label=str):
    """Strict one-object track category of a crossed module C -> M.

    1-cells are elements of M (composition g ∘ f = g·f); a 2-cell (m, c) goes
    m => ∂(c)·m. ``act(m, c)`` is the action of M on C and ``add_c`` the group
    law of C (written additively). ``label`` renders elements in names.
    """
    ms = list(elements_m)
    cs = list(elements_c)
    mid = {m: i for i, m in enumerate(ms)}
    unit = [e for e in ms if all(mult_m(e, x) == x == mult_m(x, e) for x in ms)][0]
    zero_c = [z for z in cs if all(add_c(z, x) == x for x in cs)][0]
    base = FiniteCategory(
        ["*"], [(label(m), "*", "*") for m in ms], {"*": mid[unit]},
        {(mid[g], mid[f]): mid[mult_m(g, f)] for g in ms for f in ms},
        name=name + " E0")
    cells, cid = [], {}
    for m in ms:
        for c in cs:
            cid[(m, c)] = len(cells)
            cells.append((f"{label(m)}:{label(c)}", mid[m], mid[mult_m(boundary(c), m)]))
    vcomp, post, pre = {}, {}, {}
    for m in ms:
        for c in cs:
            m2 = mult_m(boundary(c), m)
            for c2 in cs:
                vcomp[(cid[(m2, c2)], cid[(m, c)])] = cid[(m, add_c(c2, c))]
            for k in ms:
                post[(mid[k], cid[(m, c)])] = cid[(mult_m(k, m), act(k, c))]
                pre[(cid[(m, c)], mid[k])] = cid[(mult_m(m, k), c)]
    ident = {mid[m]: cid[(m, zero_c)] for m in ms}
    return TableTrackCategory(base, cells, ident, vcomp, post, pre, name=name)


# ---------------------------------------------------------------- free

@dataclass(frozen=True, order=True)
class Word:
    """A 1-cell of the free category: arrows of K applied left to right."""

    src: str
    arrows: tuple[int, ...] = ()


@dataclass(frozen=True, order=True)
class Track:
    """A 2-cell source => target of a free track category."""

    source: Word
    target: Word
    label: tuple[int, ...]


class FreeTrackCategory:
    """The linear track extension of (K, D) determined by a normalized 3-cocycle.

    ``cocycle`` maps nondegenerate 3-simplices (φ1, φ2, φ3) of K to elements of
    D(φ3φ2φ1). Whiskering a 2-cell by a word picks up the defect ``assoc``
    computed from the cocycle, which makes the chosen composition tracks
    reproduce the cocycle exactly.
    """

    def __init__(self, cat: FiniteCategory, ns: NaturalSystem, cocycle: dict,
                 window: int = 4, name=""):
        self.cat = cat
        self.ns = ns
        self.cocycle = {k: tuple(int(x) for x in v) for k, v in cocycle.items()}
        self.window = window
        self.name = name
        self._assoc: dict = {}

    # 1-cells
    def composite(self, w: Word) -> int:
        cat = self.cat
        acc = cat.identity(w.src)
        for a in w.arrows:
            acc = cat.compose(a, acc)
        return acc

    def src1(self, w: Word):
        return w.src

    def tgt1(self, w: Word):
        return self.cat.tgt(w.arrows[-1]) if w.arrows else w.src

    def compose1(self, v: Word, u: Word):
        if self.tgt1(u) != v.src:
            return None
        return Word(u.src, u.arrows + v.arrows)

    def identity1(self, obj):
        return Word(obj)

    def name1(self, w: Word):
        if not w.arrows:
            return f"1_{w.src}"
        return "·".join(self.cat.mname(a) for a in w.arrows)

    def one_cells(self, max_len=None):
        """All words of length <= max_len (default: the validation window)."""
        max_len = self.window if max_len is None else max_len
        cat = self.cat
        out = [Word(o) for o in cat.objects]
        frontier = list(out)
        for _ in range(max_len):
            nxt = []
            for w in frontier:
                end = self.tgt1(w)
                for a in cat.non_identities:
                    if cat.src(a) == end:
                        nxt.append(Word(w.src, w.arrows + (a,)))
            out.extend(nxt)
            frontier = nxt
        return out

    def words_over(self, phi: int, max_len: int):
        return [w for w in self.one_cells(max_len)
                if w.src == self.cat.src(phi) and self.composite(w) == phi]

    # coefficient helpers
    def _group(self, f: int) -> FpAbGroup:
        return self.ns.value[f]

    def _c(self, a, b, c):
        cat = self.cat
        if cat.is_identity(a) or cat.is_identity(b) or cat.is_identity(c):
            return None
        return self.cocycle.get((a, b, c))

    def assoc(self, u: Word, v: Word) -> np.ndarray:
        """Defect A(u, v) in D([v][u]) of composing u then v."""
        key = (u, v)
        if key in self._assoc:
            return self._assoc[key]
        fu = self.composite(u)
        if not v.arrows or not u.arrows:
            val = np.array(self._group(self.cat.compose(self.composite(v), fu)).zero(),
                           dtype=object)
        else:
            head = Word(v.src, v.arrows[:-1])
            b = v.arrows[-1]
            fh = self.composite(head)
            prev = self.assoc(u, head)
            val = self.ns.post_map(b, self.cat.compose(fh, fu))(prev)
            c = self._c(fu, fh, b)
            if c is not None:
                val = val + np.array(c, dtype=object)
        self._assoc[key] = val
        return val

    def _track(self, s: Word, t: Word, label) -> Track:
        g = self._group(self.composite(s))
        return Track(s, t, g.normalize(label))

    # 2-cells
    def cells(self, f: Word, g: Word, free_bound: int = 1):
        phi = self.composite(f)
        if f.src != g.src or phi != self.composite(g):
            return []
        return [Track(f, g, x) for x in self._group(phi).elements(free_bound)]

    def source(self, h: Track):
        return h.source

    def target(self, h: Track):
        return h.target

    def name2(self, h: Track):
        return f"{self.name1(h.source)}=>{self.name1(h.target)}{list(h.label)}"

    def vcomp(self, k: Track, h: Track) -> Track:
        if h.target != k.source:
            raise TrackError("vertical composition of non-adjacent 2-cells")
        return self._track(h.source, k.target,
                           np.array(h.label, dtype=object) + np.array(k.label, dtype=object))

    def identity_cell(self, f: Word) -> Track:
        return self._track(f, f, self._group(self.composite(f)).zero())

    def inverse(self, h: Track) -> Track:
        return self._track(h.target, h.source, -np.array(h.label, dtype=object))

    def post(self, k: Word, h: Track) -> Track:
        """k_* H for H: w => w'; k is applied after w."""
        w, w2 = h.source, h.target
        fw, fk = self.composite(w), self.composite(k)
        x = self.ns.post_map(fk, fw)(h.label) if h.label else np.zeros(0, dtype=object)
        x = x + self.assoc(w2, k) - self.assoc(w, k)
        return self._track(self.compose1(k, w), self.compose1(k, w2), x)

    def pre(self, h: Track, k: Word) -> Track:
        """k^* H for H: w => w'; k is applied before w."""
        w, w2 = h.source, h.target
        fw, fk = self.composite(w), self.composite(k)
        x = self.ns.pre_map(fw, fk)(h.label) if h.label else np.zeros(0, dtype=object)
        x = x + self.assoc(k, w2) - self.assoc(k, w)
        return self._track(self.compose1(w, k), self.compose1(w2, k), x)


# ---------------------------------------------------------------- validation

def validate_track(tc, window: int | None = None) -> ValidationReport:
    """Check groupoid, whiskering and interchange laws on every instance.

    For a free track category the instances are those whose 1-cells are words
    of length at most ``window``.
    """
    rep = ValidationReport()
    if isinstance(tc, TableTrackCategory):
        base_rep = validate(tc.base)
        for e in base_rep:
            rep.add(f"E0: {e}")
        if rep:
            return rep
    ones = tc.one_cells(window)
    in_window = set(ones)
    n1 = tc.name1
    n2 = tc.name2

    def comp(v, u):
        r = tc.compose1(v, u)
        return r if r in in_window else None

    hom = {}
    for f in ones:
        for g in ones:
            if tc.src1(f) == tc.src1(g) and tc.tgt1(f) == tc.tgt1(g):
                cs = tc.cells(f, g)
                if cs:
                    hom[(f, g)] = cs

    def safe(fn, *args):
        try:
            return fn(*args)
        except (KeyError, TrackError) as exc:
            rep.add(f"undefined operation {fn.__name__}: {exc}")
            return None

    # groupoid structure
    for f in ones:
        i = safe(tc.identity_cell, f)
        if i is None:
            continue
        if (tc.source(i), tc.target(i)) != (f, f):
            rep.add(f"identity 2-cell of {n1(f)} has wrong ends")
    if rep:
        return rep
    for (f, g), cs in hom.items():
        for h in cs:
            if (tc.source(h), tc.target(h)) != (f, g):
                rep.add(f"2-cell {n2(h)} listed under wrong hom pair")
            if safe(tc.vcomp, h, tc.identity_cell(f)) != h or \
                    safe(tc.vcomp, tc.identity_cell(g), h) != h:
                rep.add(f"groupoid identity law fails at {n2(h)}")
            try:
                inv = tc.inverse(h)
            except TrackError as exc:
                rep.add(f"groupoid failure: {exc}")
                continue
            if tc.vcomp(h, inv) != tc.identity_cell(g):
                rep.add(f"groupoid failure: {n2(h)} is not invertible")
    if rep:
        return rep
    for (f, g), hs in hom.items():
        for (g2, k2), ks in hom.items():
            if g2 != g:
                continue
            for h in hs:
                for k in ks:
                    kh = safe(tc.vcomp, k, h)
                    if kh is None or (tc.source(kh), tc.target(kh)) != (f, k2):
                        rep.add(f"vertical composite {n2(k)}□{n2(h)} has wrong ends")
                        continue
                    for (k3, m3), ls in hom.items():
                        if k3 != k2:
                            continue
                        for l in ls:
                            if tc.vcomp(l, kh) != tc.vcomp(tc.vcomp(l, k), h):
                                rep.add(f"□ not associative at "
                                        f"({n2(l)}, {n2(k)}, {n2(h)})")
    if rep:
        return rep
    # whiskering: functorial in 2-cells and in 1-cells
    for (f, g), hs in hom.items():
        y, x = tc.tgt1(f), tc.src1(f)
        posts = [k for k in ones if tc.src1(k) == y and comp(k, f) and comp(k, g)]
        pres = [k for k in ones if tc.tgt1(k) == x and comp(f, k) and comp(g, k)]
        for k in posts:
            if safe(tc.post, k, tc.identity_cell(f)) != tc.identity_cell(comp(k, f)):
                rep.add(f"{n1(k)}_* does not preserve the identity of {n1(f)}")
            for h in hs:
                kh = safe(tc.post, k, h)
                if kh is None:
                    continue
                if (tc.source(kh), tc.target(kh)) != (comp(k, f), comp(k, g)):
                    rep.add(f"{n1(k)}_*{n2(h)} has wrong ends")
                    continue
                for k2 in ones:
                    kk = comp(k2, k) if tc.src1(k2) == tc.tgt1(k) else None
                    if kk is None or not comp(kk, f) or not comp(kk, g):
                        continue
                    if tc.post(kk, h) != tc.post(k2, kh):
                        rep.add(f"post whiskering not functorial at "
                                f"({n1(k2)}, {n1(k)}, {n2(h)})")
                for q in pres:
                    if not comp(comp(k, f), q) or not comp(comp(k, g), q):
                        continue
                    if tc.pre(kh, q) != tc.post(k, tc.pre(h, q)):
                        rep.add(f"pre and post whiskering do not commute at "
                                f"({n1(k)}, {n2(h)}, {n1(q)})")
        for q in pres:
            if safe(tc.pre, tc.identity_cell(f), q) != tc.identity_cell(comp(f, q)):
                rep.add(f"{n1(q)}^* does not preserve the identity of {n1(f)}")
            for h in hs:
                hq = safe(tc.pre, h, q)
                if hq is None:
                    continue
                if (tc.source(hq), tc.target(hq)) != (comp(f, q), comp(g, q)):
                    rep.add(f"{n1(q)}^*{n2(h)} has wrong ends")
                    continue
                for q2 in ones:
                    qq = comp(q, q2) if tc.tgt1(q2) == tc.src1(q) else None
                    if qq is None or not comp(f, qq) or not comp(g, qq):
                        continue
                    if tc.pre(h, qq) != tc.pre(hq, q2):
                        rep.add(f"pre whiskering not functorial at "
                                f"({n2(h)}, {n1(q)}, {n1(q2)})")
        for h in hs:
            for h2s in [hom.get((g, g3), []) for g3 in ones]:
                for h2 in h2s:
                    for k in posts:
                        if not comp(k, tc.target(h2)):
                            continue
                        lhs = tc.post(k, tc.vcomp(h2, h))
                        rhs = tc.vcomp(tc.post(k, h2), tc.post(k, h))
                        if lhs != rhs:
                            rep.add(f"{n1(k)}_* does not preserve □ at "
                                    f"({n2(h2)}, {n2(h)})")
                    for q in pres:
                        if not comp(tc.target(h2), q):
                            continue
                        lhs = tc.pre(tc.vcomp(h2, h), q)
                        rhs = tc.vcomp(tc.pre(h2, q), tc.pre(h, q))
                        if lhs != rhs:
                            rep.add(f"{n1(q)}^* does not preserve □ at "
                                    f"({n2(h2)}, {n2(h)})")
        # identity 1-cells act trivially
        ix, iy = tc.identity1(x), tc.identity1(y)
        for h in hs:
            if ix in in_window and tc.pre(h, ix) != h:
                rep.add(f"pre whiskering by identity moves {n2(h)}")
            if iy in in_window and tc.post(iy, h) != h:
                rep.add(f"post whiskering by identity moves {n2(h)}")
    # interchange is still checked after law failures, as long as every
    # operation it needs is defined with the right ends
    if any("undefined" in e or "wrong ends" in e for e in rep):
        return rep
    # interchange: H: f => g in E(X, Y), K: k => l in E(Y, Z)
    for (f, g), hs in hom.items():
        for (k, l), ks in hom.items():
            if tc.src1(k) != tc.tgt1(f):
                continue
            if not all(comp(a, b) for a in (k, l) for b in (f, g)):
                continue
            for h in hs:
                for kk in ks:
                    try:
                        lhs = tc.vcomp(tc.post(l, h), tc.pre(kk, f))
                        rhs = tc.vcomp(tc.pre(kk, g), tc.post(k, h))
                    except (KeyError, TrackError) as exc:
                        rep.add(f"interchange undefined at ({n2(kk)}, {n2(h)}): {exc}")
                        continue
                    if lhs != rhs:
                        rep.add(f"interchange violated at ({n2(kk)}, {n2(h)})")
    return rep


def homotopy_category(tc, window: int | None = None):
    """Quotient of E0 by 2-cell connectivity.

    Returns ``(category, projection)`` where ``projection`` maps each 1-cell
    (within the window, for free track categories) to a morphism id.
    """
    ones = tc.one_cells(window)
    parent = {f: f for f in ones}

    def find(f):
        while parent[f] != f:
            parent[f] = parent[parent[f]]
            f = parent[f]
        return f

    for f in ones:
        for g in ones:
            if tc.src1(f) == tc.src1(g) and tc.tgt1(f) == tc.tgt1(g) and tc.cells(f, g):
                parent[find(g)] = find(f)
    classes: dict = {}
    for f in ones:
        classes.setdefault(find(f), []).append(f)
    reps = sorted(classes, key=lambda r: ones.index(r))
    cls_id = {}
    for i, r in enumerate(reps):
        for f in classes[r]:
            cls_id[f] = i
    objects = []
    for f in ones:
        for o in (tc.src1(f), tc.tgt1(f)):
            if o not in objects:
                objects.append(o)
    morphs = [(tc.name1(r), tc.src1(r), tc.tgt1(r)) for r in reps]
    identities = {o: cls_id[tc.identity1(o)] for o in objects}
    compose = {}
    in_window = set(ones)
    for f in ones:
        for g in ones:
            if tc.src1(g) != tc.tgt1(f):
                continue
            gf = tc.compose1(g, f)
            if gf not in in_window:
                continue
            key = (cls_id[g], cls_id[f])
            if key in compose and compose[key] != cls_id[gf]:
                raise TrackError(
                    f"composition does not respect 2-cells at ({tc.name1(g)}, {tc.name1(f)})")
            compose[key] = cls_id[gf]
    cat = FiniteCategory(objects, morphs, identities, compose,
                         name=f"ho({getattr(tc, 'name', '')})")
    return cat, {f: cls_id[f] for f in ones}


# ---------------------------------------------------------------- extensions

@dataclass
class TrackExtension:
    """D -> E -> K with projection and linearity Aut(f) ≅ D([f]).

    ``project(f)`` gives the class of a 1-cell in K. ``lin(h)`` reads an
    automorphism 2-cell as an ambient vector of D([f]).
    """

    track: object
    quotient: FiniteCategory
    coeff: NaturalSystem
    project_map: dict | None = None
    lin_table: dict | None = None
    name: str = ""

    def project(self, f) -> int:
        if isinstance(self.track, FreeTrackCategory):
            return self.track.composite(f)
        return self.project_map[f]

    def lin(self, h) -> tuple[int, ...]:
        tc = self.track
        if tc.source(h) != tc.target(h):
            raise TrackError(f"{tc.name2(h)} is not an automorphism")
        phi = self.project(tc.source(h))
        if isinstance(tc, FreeTrackCategory):
            return self.coeff.value[phi].normalize(h.label)
        return self.coeff.value[phi].normalize(self.lin_table[h])

    def automorphisms(self, f):
        return self.track.cells(f, f)


def validate_extension(ext: TrackExtension, window: int | None = None) -> ValidationReport:
    """Track laws plus ho E = K, abelian Aut(f) and naturality of ``lin``."""
    tc = ext.track
    rep = validate_track(tc, window)
    if rep:
        return rep
    K = ext.quotient
    try:
        hoE, proj = homotopy_category(tc, window)
    except TrackError as exc:
        rep.add(str(exc))
        return rep
    ones = tc.one_cells(window)
    # the declared projection must collapse exactly the 2-cell components
    for f in ones:
        for g in ones:
            same = proj[f] == proj[g]
            if same != (ext.project(f) == ext.project(g)):
                rep.add(f"projection disagrees with 2-cell components at "
                        f"({tc.name1(f)}, {tc.name1(g)})")
    hit = {ext.project(f) for f in ones}
    if hit != set(range(len(K))):
        rep.add("projection is not surjective onto K")
    for f in ones:
        for g in ones:
            if tc.src1(g) == tc.tgt1(f):
                gf = tc.compose1(g, f)
                if gf in proj and ext.project(gf) != K.compose(ext.project(g), ext.project(f)):
                    rep.add(f"projection is not a functor at ({tc.name1(g)}, {tc.name1(f)})")
    if rep:
        return rep
    in_window = set(ones)
    for f in ones:
        phi = ext.project(f)
        group = ext.coeff.value[phi]
        auts = ext.automorphisms(f)
        images = set()
        for a in auts:
            images.add(ext.lin(a))
        order = group.order()
        if order is not None and len(images) != order:
            rep.add(f"lin is not bijective on Aut({tc.name1(f)}): "
                    f"{len(images)} images, |D| = {order}")
        for a in auts:
            for b in auts:
                ab = tc.vcomp(a, b)
                if ab != tc.vcomp(b, a):
                    rep.add(f"Aut({tc.name1(f)}) is not abelian")
                s = np.array(ext.lin(a), dtype=object) + np.array(ext.lin(b), dtype=object)
                if not group.equal_elements(ext.lin(ab), s):
                    rep.add(f"lin is not additive on Aut({tc.name1(f)})")
            for k in ones:
                if tc.src1(k) == tc.tgt1(f) and tc.compose1(k, f) in in_window:
                    want = ext.coeff.post_map(ext.project(k), phi)(ext.lin(a))
                    got = ext.lin(tc.post(k, a))
                    if not ext.coeff.value[K.compose(ext.project(k), phi)].equal_elements(
                            got, want):
                        rep.add(f"lin not natural for {tc.name1(k)}_* on "
                                f"Aut({tc.name1(f)})")
                if tc.tgt1(k) == tc.src1(f) and tc.compose1(f, k) in in_window:
                    want = ext.coeff.pre_map(phi, ext.project(k))(ext.lin(a))
                    got = ext.lin(tc.pre(a, k))
                    if not ext.coeff.value[K.compose(phi, ext.project(k))].equal_elements(
                            got, want):
                        rep.add(f"lin not natural for {tc.name1(k)}^* on "
                                f"Aut({tc.name1(f)})")
    return rep


@dataclass
class Choices:
    """A section s(φ) and composition tracks H(φ, ψ): s(φ)∘s(ψ) => s(φψ)."""

    section: dict
    tracks: dict = field(default_factory=dict)


def default_choices(ext: TrackExtension) -> Choices:
    """Lowest-index representatives and tracks (identities where normalized)."""
    return _make_choices(ext, None)


def random_choices(ext: TrackExtension, rng: random.Random, max_len: int = 2) -> Choices:
    """Random section and tracks, normalized on identities."""
    return _make_choices(ext, rng, max_len)


def _make_choices(ext, rng, max_len=2):
    tc, K = ext.track, ext.quotient
    section = {}
    for phi in range(len(K)):
        if K.is_identity(phi):
            section[phi] = tc.identity1(K.src(phi))
            continue
        if isinstance(tc, FreeTrackCategory):
            cands = tc.words_over(phi, max_len if rng else 1)
        else:
            cands = [f for f in tc.one_cells() if ext.project(f) == phi]
        if not cands:
            raise TrackError(f"no 1-cell over {K.mname(phi)}")
        section[phi] = rng.choice(cands) if rng else cands[0]
    tracks = {}
    for phi in range(len(K)):
        for psi in range(len(K)):
            if K.src(phi) != K.tgt(psi):
                continue
            s = tc.compose1(section[phi], section[psi])
            t = section[K.compose(phi, psi)]
            if K.is_identity(phi) or K.is_identity(psi):
                if s != t:
                    raise TrackError("section does not send identities to identities")
                tracks[(phi, psi)] = tc.identity_cell(s)
                continue
            cands = tc.cells(s, t)
            if not cands:
                raise TrackError(f"no track {tc.name1(s)} => {tc.name1(t)}")
            tracks[(phi, psi)] = rng.choice(cands) if rng else cands[0]
    return Choices(section, tracks)


def characteristic_cocycle(ext: TrackExtension, choices: Choices | None = None,
                           complex_: BWComplex | None = None) -> np.ndarray:
    """The degree-3 cochain of the obstruction formula, as an ambient vector.

    For each nondegenerate 3-simplex (φ1, φ2, φ3) the value is lin of

        H(φ3, φ2φ1) □ (φ3)_* H(φ2, φ1) □ (φ1)^* H(φ3, φ2)^-1 □ H(φ3φ2, φ1)^-1

    The result is checked to be a cocycle.
    """
    choices = choices or default_choices(ext)
    tc, K = ext.track, ext.quotient
    cx = complex_ or BWComplex(K, ext.coeff, budget=None)
    s, H = choices.section, choices.tracks
    for phi in range(len(K)):
        if phi not in s:
            raise TrackError(f"section misses {K.mname(phi)}")
    for (phi, psi), h in H.items():
        want = (tc.compose1(s[phi], s[psi]), s[K.compose(phi, psi)])
        if (tc.source(h), tc.target(h)) != want:
            raise TrackError(f"track for ({K.mname(phi)}, {K.mname(psi)}) is not "
                             f"{tc.name1(want[0])} => {tc.name1(want[1])}")
    values = {}
    for sig in nerve_simplices(K, 3):
        p1, p2, p3 = sig
        p21, p32 = K.compose(p2, p1), K.compose(p3, p2)
        try:
            t_a = tc.inverse(H[(p32, p1)])
            t_b = tc.pre(tc.inverse(H[(p3, p2)]), s[p1])
            t_c = tc.post(s[p3], H[(p2, p1)])
            t_d = H[(p3, p21)]
        except KeyError as exc:
            raise TrackError(f"missing track or whiskering entry {exc}") from None
        loop = tc.vcomp(t_d, tc.vcomp(t_c, tc.vcomp(t_b, t_a)))
        values[sig] = ext.lin(loop)
    v = cx.assemble(3, values)
    if not cx.delta(3).compose(_column(cx, 3, v)).is_zero():
        raise TrackError("characteristic cochain is not a cocycle")
    return v


def _column(cx, n, v):
    return AbHom(FpAbGroup.free(1), cx.group(n), np.asarray(v, dtype=object).reshape(-1, 1))


@dataclass
class ClassReport:
    coordinates: tuple[int, ...]
    moduli: list[int]
    vanishing: bool
    cocycle: np.ndarray

    def describe(self) -> str:
        if self.vanishing:
            return "class = 0 (vanishing)"
        nonzero = [(c, m) for c, m in zip(self.coordinates, self.moduli) if c]
        if len(self.moduli) == 1 and self.moduli[0]:
            c, m = nonzero[0]
            if math.gcd(c, m) == 1:
                return f"class = generator of Z/{m}"
        parts = [f"{c} mod {m}" if m else f"{c}" for c, m in zip(self.coordinates, self.moduli)]
        return f"class = ({', '.join(parts)})"


def class_of(ext: TrackExtension, choices: Choices | None = None,
             complex_: BWComplex | None = None) -> ClassReport:
    """Class of the characteristic cocycle in H^3_BW(K; D)."""
    cx = complex_ or BWComplex(ext.quotient, ext.coeff, budget=None)
    chi = characteristic_cocycle(ext, choices, cx)
    hom = cx.homology(3)
    coords = hom.class_coordinates(chi)
    return ClassReport(coords, hom.moduli, all(c == 0 for c in coords), chi)


def cohomologous(c1, c2, cx: BWComplex, degree: int = 3) -> bool:
    """True iff c1 - c2 lies in the image of δ^(degree-1)."""
    c1 = np.asarray(c1, dtype=object).reshape(-1)
    c2 = np.asarray(c2, dtype=object).reshape(-1)
    if c1.shape != c2.shape or c1.shape[0] != cx.group(degree).rank:
        raise ValueError("cochains of different degrees")
    return in_image(cx.delta(degree - 1), c1 - c2) is not None


def build_from_cocycle(cat: FiniteCategory, ns: NaturalSystem, cocycle,
                       window: int = 4, name="") -> TrackExtension:
    """Linear track extension of (cat, ns) whose class is that of ``cocycle``.

    ``cocycle`` is an ambient degree-3 vector of the normalized complex.
    """
    cx = BWComplex(cat, ns, budget=None)
    v = np.asarray(cocycle, dtype=object).reshape(-1)
    if v.shape[0] != cx.group(3).rank:
        raise ValueError("cochain has the wrong size for degree 3")
    if not cx.delta(3).compose(_column(cx, 3, v)).is_zero():
        raise TrackError("δc != 0: not a cocycle")
    values = {sig: tuple(x) for sig, x in cx.evaluate(3, v).items()}
    tc = FreeTrackCategory(cat, ns, values, window=window, name=name)
    return TrackExtension(tc, cat, ns, name=name)
