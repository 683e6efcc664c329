"""Finite categories given by explicit composition tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property


@dataclass(frozen=True)
class Morphism:
    id: int
    name: str
    src: str
    tgt: str


@dataclass
class ValidationReport:
    """Violations found by a validator; empty means lawful."""

    entries: list[str] = field(default_factory=list)

    def add(self, msg: str) -> None:
        self.entries.append(msg)

    def extend(self, other: ValidationReport) -> None:
        self.entries.extend(other.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def ok(self) -> bool:
        return not self.entries


class FiniteCategory:
    """A finite category with dense integer morphism ids.

    ``compose[(g, f)]`` is ``g ∘ f`` (f first). Tables are taken as given so
    that a defective table can still be constructed and reported on by
    :func:`validate`.
    """

    def __init__(self, objects, morphisms, identities, compose, name=""):
        self.name = name
        self.objects: tuple[str, ...] = tuple(objects)
        morphs = []
        for i, m in enumerate(morphisms):
            if isinstance(m, Morphism):
                if m.id != i:
                    raise ValueError(f"morphism ids must be dense, got {m.id} at {i}")
                morphs.append(m)
            else:
                mname, src, tgt = m
                morphs.append(Morphism(i, str(mname), src, tgt))
        self.morphisms: tuple[Morphism, ...] = tuple(morphs)
        self.identities: dict[str, int] = dict(identities)
        self.compose_table: dict[tuple[int, int], int] = dict(compose)

    @classmethod
    def from_names(cls, objects, morphisms, identities, compose, name=""):
        """Build from morphism names: ``morphisms = [(name, src, tgt), ...]``,
        ``identities = {obj: name}``, ``compose = {(g, f): h}`` by name."""
        ids = {m[0]: i for i, m in enumerate(morphisms)}
        return cls(
            objects,
            morphisms,
            {o: ids[n] for o, n in identities.items()},
            {(ids[g], ids[f]): ids[h] for (g, f), h in compose.items()},
            name=name,
        )

    # basic access

    def __len__(self):
        return len(self.morphisms)

    def src(self, f: int) -> str:
        return self.morphisms[f].src

    def tgt(self, f: int) -> str:
        return self.morphisms[f].tgt

    def mname(self, f: int) -> str:
        return self.morphisms[f].name

    def identity(self, obj: str) -> int:
        return self.identities[obj]

    @cached_property
    def identity_ids(self) -> frozenset[int]:
        return frozenset(self.identities.values())

    def is_identity(self, f: int) -> bool:
        return f in self.identity_ids

    def compose(self, g: int, f: int) -> int:
        """``g ∘ f``; KeyError if the table has no entry."""
        return self.compose_table[(g, f)]

    def composable(self, g: int, f: int) -> bool:
        return self.morphisms[g].src == self.morphisms[f].tgt

    def id_by_name(self, name: str) -> int:
        for m in self.morphisms:
            if m.name == name:
                return m.id
        raise KeyError(name)

    @cached_property
    def outgoing(self) -> dict[str, tuple[int, ...]]:
        out = {o: [] for o in self.objects}
        for m in self.morphisms:
            out[m.src].append(m.id)
        return {o: tuple(v) for o, v in out.items()}

    @cached_property
    def non_identities(self) -> tuple[int, ...]:
        return tuple(m.id for m in self.morphisms if m.id not in self.identity_ids)

    def hom(self, x: str, y: str) -> list[int]:
        return [m.id for m in self.morphisms if m.src == x and m.tgt == y]

    def is_one_object(self) -> bool:
        return len(self.objects) == 1

    def __repr__(self):
        return (f"FiniteCategory({self.name!r}, {len(self.objects)} objects, "
                f"{len(self.morphisms)} morphisms)")


def validate(cat: FiniteCategory) -> ValidationReport:
    """List every typing, totality, identity and associativity violation."""
    rep = ValidationReport()
    objs = set(cat.objects)
    for m in cat.morphisms:
        for end in (m.src, m.tgt):
            if end not in objs:
                rep.add(f"morphism {m.name} refers to unknown object {end}")
    for o in cat.objects:
        if o not in cat.identities:
            rep.add(f"object {o} has no identity")
            continue
        i = cat.identities[o]
        if not 0 <= i < len(cat.morphisms):
            rep.add(f"identity of {o} is not a morphism id: {i}")
        elif (cat.src(i), cat.tgt(i)) != (o, o):
            rep.add(f"identity {cat.mname(i)} of {o} is not an endomorphism of {o}")
    if rep:
        return rep
    n = len(cat.morphisms)
    for (g, f), h in sorted(cat.compose_table.items()):
        if not (0 <= g < n and 0 <= f < n and 0 <= h < n):
            rep.add(f"composition entry ({g}, {f}) -> {h} uses unknown ids")
        elif not cat.composable(g, f):
            rep.add(f"composition entry ({cat.mname(g)}, {cat.mname(f)}) "
                    f"is not composable")
        elif (cat.src(h), cat.tgt(h)) != (cat.src(f), cat.tgt(g)):
            rep.add(f"composite {cat.mname(g)}∘{cat.mname(f)} = {cat.mname(h)} "
                    f"has wrong type")
    if any("unknown ids" in e for e in rep):
        return rep
    for g in range(n):
        for f in range(n):
            if cat.composable(g, f) and (g, f) not in cat.compose_table:
                rep.add(f"missing composite {cat.mname(g)}∘{cat.mname(f)}")
    # identity laws only read single table entries, so they are checked even
    # when some composite is mistyped or missing
    table = cat.compose_table
    for f in range(n):
        i_t = cat.identities[cat.tgt(f)]
        i_s = cat.identities[cat.src(f)]
        if table.get((i_t, f), f) != f:
            rep.add(f"identity law violated at ({cat.mname(i_t)}, {cat.mname(f)})")
        if table.get((f, i_s), f) != f:
            rep.add(f"identity law violated at ({cat.mname(f)}, {cat.mname(i_s)})")
    if rep:
        return rep
    for f in range(n):
        for g in cat.outgoing[cat.tgt(f)]:
            gf = cat.compose(g, f)
            for h in cat.outgoing[cat.tgt(g)]:
                if cat.compose(h, gf) != cat.compose(cat.compose(h, g), f):
                    rep.add(f"associativity violated at ({cat.mname(h)}, "
                            f"{cat.mname(g)}, {cat.mname(f)})")
    return rep


# Simplices are tuples of morphism ids (λ1, ..., λn) read as a forward chain
# A0 -> A1 -> ... -> An; degree-0 simplices are ("obj",) wrapped in Vertex.

@dataclass(frozen=True, order=True)
class Vertex:
    """A 0-simplex of the nerve."""

    obj: str


def simplex_degree(s) -> int:
    return 0 if isinstance(s, Vertex) else len(s)


def simplex_source(cat: FiniteCategory, s) -> str:
    return s.obj if isinstance(s, Vertex) else cat.src(s[0])


def simplex_target(cat: FiniteCategory, s) -> str:
    return s.obj if isinstance(s, Vertex) else cat.tgt(s[-1])


def is_degenerate(cat: FiniteCategory, s) -> bool:
    return not isinstance(s, Vertex) and any(cat.is_identity(f) for f in s)


def partial_max(cat: FiniteCategory, s) -> int:
    """The composite λn ∘ ... ∘ λ1; the identity for a 0-simplex."""
    if isinstance(s, Vertex):
        return cat.identity(s.obj)
    acc = s[0]
    for f in s[1:]:
        acc = cat.compose(f, acc)
    return acc


def face(cat: FiniteCategory, s, i: int):
    """Face d_i of a simplex (untwisted)."""
    n = simplex_degree(s)
    if not 0 <= i <= n or n == 0:
        raise ValueError(f"face {i} of a {n}-simplex")
    if n == 1:
        return Vertex(cat.tgt(s[0]) if i == 0 else cat.src(s[0]))
    if i == 0:
        return tuple(s[1:])
    if i == n:
        return tuple(s[:-1])
    return tuple(s[:i - 1]) + (cat.compose(s[i], s[i - 1]),) + tuple(s[i + 1:])


def nerve_simplices(cat: FiniteCategory, n: int, nondegenerate_only: bool = True):
    """All n-simplices in lexicographic order of morphism ids."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return [Vertex(o) for o in cat.objects]
    pool = cat.non_identities if nondegenerate_only else tuple(range(len(cat)))
    by_src = {o: [f for f in pool if cat.src(f) == o] for o in cat.objects}
    out = []

    def extend(chain):
        if len(chain) == n:
            out.append(tuple(chain))
            return
        for f in by_src[cat.tgt(chain[-1])]:
            chain.append(f)
            extend(chain)
            chain.pop()

    for f in pool:
        extend([f])
    return out


@dataclass(frozen=True)
class FacCategory:
    """The category of factorizations of ``base``, with bookkeeping.

    ``squares[k] = (alpha, beta, f, g)`` describes morphism k: f -> g of
    ``category`` with g = beta ∘ f ∘ alpha.
    """

    base: FiniteCategory
    category: FiniteCategory
    squares: tuple[tuple[int, int, int, int], ...]

    def hom(self, f: int, g: int) -> list[tuple[int, int]]:
        return [(a, b) for (a, b, s, t) in self.squares if (s, t) == (f, g)]


def fac_category(cat: FiniteCategory) -> FacCategory:
    """Objects are arrows of ``cat``; morphisms f -> g are pairs (α, β)."""
    squares = []
    for f in range(len(cat)):
        x, y = cat.src(f), cat.tgt(f)
        for alpha in range(len(cat)):
            if cat.tgt(alpha) != x:
                continue
            fa = cat.compose(f, alpha)
            for beta in range(len(cat)):
                if cat.src(beta) != y:
                    continue
                g = cat.compose(beta, fa)
                squares.append((alpha, beta, f, g))
    index = {sq: k for k, sq in enumerate(squares)}
    morphs = [(f"({cat.mname(a)},{cat.mname(b)}):{cat.mname(f)}->{cat.mname(g)}",
               str(f), str(g)) for (a, b, f, g) in squares]
    identities = {}
    for f in range(len(cat)):
        sq = (cat.identity(cat.src(f)), cat.identity(cat.tgt(f)), f, f)
        identities[str(f)] = index[sq]
    compose = {}
    for k1, (a1, b1, f1, g1) in enumerate(squares):
        for k2, (a2, b2, f2, g2) in enumerate(squares):
            if g1 != f2:
                continue
            # (α2, β2) ∘ (α1, β1) = (α1 ∘ α2, β2 ∘ β1)
            sq = (cat.compose(a1, a2), cat.compose(b2, b1), f1, g2)
            compose[(k2, k1)] = index[sq]
    fac = FiniteCategory([str(f) for f in range(len(cat))], morphs, identities,
                         compose, name=f"Fac({cat.name})")
    return FacCategory(cat, fac, tuple(squares))


def one_object_group(elements, mult, name="", obj="*"):
    """One-object category of a finite group given by a multiplication table.

    ``mult[(a, b)]`` is the product ``a·b``; composition is g ∘ f = g·f.
    The identity is detected from the table.
    """
    elements = list(elements)
    ident = [e for e in elements
             if all(mult[(e, x)] == x and mult[(x, e)] == x for x in elements)]
    if len(ident) != 1:
        raise ValueError("multiplication table has no unique identity")
    morphs = [(str(e), obj, obj) for e in elements]
    compose = {(str(g), str(f)): str(mult[(g, f)]) for g in elements for f in elements}
    return FiniteCategory.from_names([obj], morphs, {obj: str(ident[0])}, compose,
                                     name=name)


def cyclic_group(n: int, name=None) -> FiniteCategory:
    """Z/n with elements named e, g, g2, ..."""
    names = ["e", "g"] + [f"g{k}" for k in range(2, n)]
    names = names[:n]
    mult = {(names[a], names[b]): names[(a + b) % n] for a in range(n) for b in range(n)}
    return one_object_group(names, mult, name=name or f"Z/{n}")


def klein_group(name="Z/2xZ/2") -> FiniteCategory:
    names = {(0, 0): "e", (1, 0): "a", (0, 1): "b", (1, 1): "ab"}
    mult = {(names[x], names[y]): names[((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)]
            for x in names for y in names}
    return one_object_group(list(names.values()), mult, name=name)


def poset_category(objects, relations, name="") -> FiniteCategory:
    """Category of a finite poset; ``relations`` lists covering pairs (x, y), x ≤ y."""
    objects = list(objects)
    leq = {(x, x) for x in objects} | set(relations)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(leq), repeat=2):
            if b == c and (a, d) not in leq:
                leq.add((a, d))
                changed = True
    pairs = sorted(leq, key=lambda p: (objects.index(p[0]), objects.index(p[1])))
    names = {p: (f"id{p[0]}" if p[0] == p[1] else f"{p[0]}{p[1]}") for p in pairs}
    morphs = [(names[p], p[0], p[1]) for p in pairs]
    compose = {}
    for (x, y) in pairs:
        for (y2, z) in pairs:
            if y == y2:
                compose[(names[(y, z)], names[(x, y)])] = names[(x, z)]
    return FiniteCategory.from_names(objects, morphs, {o: names[(o, o)] for o in objects},
                                     compose, name=name)


def interval_category() -> FiniteCategory:
    """Objects {0, 1}, one non-identity arrow a: 0 -> 1."""
    return FiniteCategory.from_names(
        ["0", "1"],
        [("id0", "0", "0"), ("id1", "1", "1"), ("a", "0", "1")],
        {"0": "id0", "1": "id1"},
        {("id0", "id0"): "id0", ("id1", "id1"): "id1",
         ("a", "id0"): "a", ("id1", "a"): "a"},
        name="interval",
    )
