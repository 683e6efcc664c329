"""Triangulated cubes labeled by parenthesizations.

The cube I^n{f1, ..., f(n+1)} has a vertex per one-level parenthesization of
the sequence: coordinate i is 1 when f(i) and f(i+1) sit in different blocks
and 0 when they have been composed. Its simplices are the vertex sets totally
ordered by the coordinatewise order, so a k-simplex is a chain of k+1
one-level parenthesizations, each coarsening the previous one. Written as
nested brackets this is a (k+1)-level parenthesization, and dropping a level
is a face map.

The second model starts from the barycentric subdivision of the
(n+1)-simplex and keeps only the barycenters of faces that contain both end
vertices; :func:`check_triangulation_iso` compares the two.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property


class RangeError(ValueError):
    pass


def compositions(m: int) -> list[tuple[int, ...]]:
    """All compositions of m (ordered block sizes), finest first."""
    out = []
    for breaks in itertools.product((1, 0), repeat=m - 1):
        out.append(_blocks_from_breaks(breaks))
    return out


def _blocks_from_breaks(breaks) -> tuple[int, ...]:
    sizes, run = [], 1
    for b in breaks:
        if b:
            sizes.append(run)
            run = 1
        else:
            run += 1
    sizes.append(run)
    return tuple(sizes)


def coarsens(coarse, fine) -> bool:
    """True iff every block of ``coarse`` is a union of adjacent blocks of ``fine``."""
    cb = set(itertools.accumulate(coarse))
    fb = set(itertools.accumulate(fine))
    return sum(coarse) == sum(fine) and cb <= fb


@dataclass(frozen=True)
class Parenthesization:
    """Levels from finest to coarsest, each a composition of ``length``."""

    levels: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return sum(self.levels[0])

    @property
    def depth(self) -> int:
        return len(self.levels)

    def is_valid(self) -> bool:
        if not self.levels:
            return False
        n = self.length
        if any(sum(lv) != n or any(b < 1 for b in lv) for lv in self.levels):
            return False
        return all(coarsens(c, f) and c != f
                   for f, c in zip(self.levels, self.levels[1:]))

    def omit(self, i: int) -> Parenthesization:
        """Face map: drop the i-th level (0-based)."""
        return Parenthesization(self.levels[:i] + self.levels[i + 1:])

    def render(self, letters=None) -> str:
        letters = letters or default_letters(self.length)
        groups = [(x, 1) for x in letters]
        for level in self.levels:
            merged, pos = [], 0
            for size in level:
                # each block collects whole groups from the previous level
                parts, got = [], 0
                while got < size:
                    text, count = groups[pos]
                    parts.append(text)
                    got += count
                    pos += 1
                merged.append(("(" + "".join(parts) + ")", got))
            groups = merged
        return "".join(text for text, _ in groups)


def default_letters(m: int) -> list[str]:
    if m <= 5:
        return list("fghkl"[:m])
    return [f"f{i}" for i in range(1, m + 1)]


@dataclass
class SimplicialComplex:
    """Vertices with labels; simplices as frozensets of vertex indices."""

    labels: list
    simplices: set = field(default_factory=set)
    simplex_labels: dict = field(default_factory=dict)

    @cached_property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def faces(self, k: int) -> list[frozenset]:
        return sorted((s for s in self.simplices if len(s) == k + 1), key=sorted)

    def f_vector(self) -> list[int]:
        return [len(self.faces(k)) for k in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def facets(self) -> list[frozenset]:
        return sorted((s for s in self.simplices
                       if not any(s < t for t in self.simplices)), key=sorted)

    def is_closed(self) -> bool:
        for s in self.simplices:
            for v in s:
                if len(s) > 1 and s - {v} not in self.simplices:
                    return False
        return True

    def dump(self, title="") -> str:
        lines = []
        if title:
            lines.append(f"# {title}")
        lines.append(f"# f-vector {' '.join(map(str, self.f_vector()))}")
        for i, lab in enumerate(self.labels):
            lines.append(f"vertex {i} {lab}")
        for k in range(1, self.dimension + 1):
            for s in self.faces(k):
                lab = self.simplex_labels.get(s, "")
                tail = f" {lab}" if lab else ""
                lines.append(f"simplex {k} {' '.join(map(str, sorted(s)))}{tail}")
        return "\n".join(lines)


def _chains(elements, leq):
    """All nonempty chains of ``elements`` (as index tuples, ascending)."""
    n = len(elements)
    up = {i: [j for j in range(n) if j != i and leq(elements[i], elements[j])]
          for i in range(n)}
    out = []

    def grow(chain):
        out.append(tuple(chain))
        for j in up[chain[-1]]:
            chain.append(j)
            grow(chain)
            chain.pop()

    for i in range(n):
        grow([i])
    return out


def subdivide_cube(n: int) -> SimplicialComplex:
    """I^n cut into n! simplices, vertex and simplex labels as parenthesizations."""
    if not 1 <= n <= 6:
        raise RangeError(f"subdivide_cube supports 1 <= n <= 6, got {n}")
    points = list(itertools.product((1, 0), repeat=n))

    def below(p, q):
        # q is reached from p by composing more: coordinatewise q <= p
        return all(b <= a for a, b in zip(p, q))

    cx = SimplicialComplex(labels=[])
    letters = default_letters(n + 1)
    for p in points:
        cx.labels.append(Parenthesization((_blocks_from_breaks(p),)).render(letters))
    for chain in _chains(points, below):
        s = frozenset(chain)
        cx.simplices.add(s)
        if len(chain) > 1:
            par = Parenthesization(tuple(_blocks_from_breaks(points[i]) for i in chain))
            cx.simplex_labels[s] = par.render(letters)
    return cx


def parenthesization_of_simplex(cx: SimplicialComplex, s) -> Parenthesization:
    """Recover the multi-level parenthesization of a cube simplex."""
    comps = []
    for v in s:
        comps.append(_parse_one_level(cx.labels[v]))
    comps.sort(key=len, reverse=True)
    return Parenthesization(tuple(comps))


def _parse_one_level(text: str) -> tuple[int, ...]:
    sizes, cur = [], 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            cur = 0
        elif ch == ")":
            sizes.append(cur)
        elif ch.isalpha():
            cur += 1
            while i + 1 < len(text) and text[i + 1].isdigit():
                i += 1
        i += 1
    return tuple(sizes)


def flag_complex(n: int) -> SimplicialComplex:
    """Barycenters of faces of Δ^(n+1) containing both ends, with all flags.

    A face {0 = v0 < v1 < ... < vm = n+1} is the one-level parenthesization
    whose blocks are the letters between consecutive vertices.
    """
    if not 1 <= n <= 5:
        raise RangeError(f"flag_complex supports 1 <= n <= 5, got {n}")
    top = n + 1
    faces = [frozenset((0, top)) | frozenset(mid)
             for k in range(n + 1)
             for mid in itertools.combinations(range(1, top), k)]
    letters = default_letters(n + 1)

    def blocks(face):
        vs = sorted(face)
        return tuple(b - a for a, b in zip(vs, vs[1:]))

    cx = SimplicialComplex(labels=[
        Parenthesization((blocks(f),)).render(letters) for f in faces])
    # a flag is a chain of faces under inclusion, listed from largest face down
    for chain in _chains(faces, lambda a, b: b < a):
        s = frozenset(chain)
        cx.simplices.add(s)
        if len(chain) > 1:
            cx.simplex_labels[s] = Parenthesization(
                tuple(blocks(faces[i]) for i in chain)).render(letters)
    return cx


@dataclass
class IsoResult:
    iso: bool
    certificate: dict | None = None
    reason: str = ""

    def __bool__(self):
        return self.iso


def _signature(cx: SimplicialComplex, v: int):
    counts = [0] * (cx.dimension + 1)
    for s in cx.simplices:
        if v in s:
            counts[len(s) - 1] += 1
    return tuple(counts)


def find_isomorphism(a: SimplicialComplex, b: SimplicialComplex,
                     hint=None) -> IsoResult:
    """Backtracking search for a simplex-preserving vertex bijection.

    ``hint`` maps vertices of ``a`` to preferred images, tried first.
    """
    hint = hint or {}
    if a.f_vector() != b.f_vector():
        return IsoResult(False, reason=f"f-vectors differ: {a.f_vector()} vs {b.f_vector()}")
    nv = len(a.labels)
    sig_a = [_signature(a, v) for v in range(nv)]
    sig_b = [_signature(b, v) for v in range(nv)]
    if sorted(sig_a) != sorted(sig_b):
        return IsoResult(False, reason="vertex star profiles differ")
    adj_a = {v: set() for v in range(nv)}
    adj_b = {v: set() for v in range(nv)}
    for cx, adj in ((a, adj_a), (b, adj_b)):
        for s in cx.simplices:
            if len(s) == 2:
                x, y = tuple(s)
                adj[x].add(y)
                adj[y].add(x)
    # visit vertices so each new one touches already placed ones when possible
    order, seen = [], set()
    for start in sorted(range(nv), key=lambda v: (-len(adj_a[v]), v)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(adj_a[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def consistent(v, w):
        for u, x in mapping.items():
            if (u in adj_a[v]) != (x in adj_b[w]):
                return False
        return True

    def search(k):
        if k == nv:
            return all(frozenset(mapping[v] for v in s) in b.simplices
                       for s in a.simplices)
        v = order[k]
        first = hint.get(v)
        cands = ([first] if first is not None else []) + [w for w in range(nv) if w != first]
        for w in cands:
            if w in used or sig_b[w] != sig_a[v] or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if search(k + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    if search(0):
        return IsoResult(True, certificate=dict(sorted(mapping.items())))
    return IsoResult(False, reason="no simplex-preserving vertex bijection exists")


def check_triangulation_iso(n: int) -> IsoResult:
    """Compare subdivide_cube(n) with flag_complex(n); certificate maps labels."""
    if not 1 <= n <= 4:
        raise RangeError(f"check_triangulation_iso supports 1 <= n <= 4, got {n}")
    cube, flags = subdivide_cube(n), flag_complex(n)
    where = {lab: w for w, lab in enumerate(flags.labels)}
    hint = {v: where[lab] for v, lab in enumerate(cube.labels) if lab in where}
    res = find_isomorphism(cube, flags, hint)
    if res.iso:
        res.certificate = {cube.labels[v]: flags.labels[w]
                           for v, w in res.certificate.items()}
    return res


def top_simplex_count(n: int) -> int:
    return len(subdivide_cube(n).faces(n))


def expected_top_count(n: int) -> int:
    return math.factorial(n)
