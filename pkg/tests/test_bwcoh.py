import itertools
import math

import numpy as np
import pytest

from catcoh.abgrp import FpAbGroup, intmat
from catcoh.bwcoh import (BudgetExceeded, BWComplex, bw_cohomology, coboundary,
                          cochain_group, oracle_group_cohomology)
from catcoh.corpus import build_corpus, square_category
from catcoh.fincat import cyclic_group, interval_category, klein_group
from catcoh.natsys import constant_system, from_group_module

CORPUS = build_corpus()
Z, Z2, Z3 = FpAbGroup.free(1), FpAbGroup.cyclic(2), FpAbGroup.cyclic(3)


def rank_mod_p(rows, p):
    """Rank over F_p by plain row reduction on Python ints."""
    m = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] % p:
                c = m[i][col]
                m[i] = [(x - c * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def bar_dims_mod_p(elements, mult, act, p, top):
    """dim H^n(G; F_p) from the normalized inhomogeneous bar complex.

    ``act(g)`` is the scalar by which g acts on F_p. Cochains are functions on
    tuples of non-identity elements.
    """
    e = next(x for x in elements if all(mult(x, y) == y for y in elements))
    nonid = [g for g in elements if g != e]
    cells = {n: list(itertools.product(nonid, repeat=n)) for n in range(top + 2)}

    def matrix(n):
        idx = {c: i for i, c in enumerate(cells[n])}
        rows = []
        for t in cells[n + 1]:
            row = [0] * len(cells[n])
            # (df)(g1..g(n+1)) = g1 f(g2..) + sum (-1)^i f(.. g_i g_(i+1) ..) + (-1)^(n+1) f(g1..gn)
            row[idx[t[1:]]] += act(t[0])
            for i in range(n):
                merged = t[:i] + (mult(t[i], t[i + 1]),) + t[i + 2:]
                if e not in merged:
                    row[idx[merged]] += (-1) ** (i + 1)
            row[idx[t[:-1]]] += (-1) ** (n + 1)
            rows.append([x % p for x in row])
        return rows

    ranks = {n: rank_mod_p(matrix(n), p) for n in range(top + 1)}
    ranks[-1] = 0
    return [len(cells[n]) - ranks[n] - ranks[n - 1] for n in range(top + 1)]


def order(factors):
    free, tors = factors
    assert free == 0
    return math.prod(tors)


# --------------------------------------------------------------- examples

def test_cochain_group_examples():
    iv = interval_category()
    ns = constant_system(iv, Z)
    assert cochain_group(iv, ns, 0) == FpAbGroup.free(2)
    assert cochain_group(iv, ns, 1) == Z
    c2 = cyclic_group(2)
    triv = from_group_module(c2, Z2, {})
    for k in range(6):
        assert cochain_group(c2, triv, k).invariant_factors() == (0, [2])


def test_interval_delta0():
    iv = interval_category()
    assert coboundary(iv, constant_system(iv, Z), 0).matrix.tolist() == [[-1, 1]]


@pytest.mark.parametrize("cat", [interval_category(), square_category(), klein_group()],
                         ids=lambda c: c.name)
def test_zero_system_zero_matrices(cat):
    ns = constant_system(cat, FpAbGroup.trivial())
    for n in range(4):
        assert not np.any(coboundary(cat, ns, n).matrix != 0)


def test_z2_trivial_alternating_pattern():
    c2 = cyclic_group(2)
    ns = from_group_module(c2, Z2, {})
    for n in range(6):
        m = coboundary(c2, ns, n).matrix
        # the interior faces of (g, ..., g) are degenerate, leaving 1 + (-1)^(n+1)
        assert m.tolist() == [[1 + (-1) ** (n + 1)]]
        assert m[0, 0] % 2 == 0


def test_interval_constant_cohomology():
    iv = interval_category()
    ns = constant_system(iv, Z)
    assert [bw_cohomology(iv, ns, n) for n in range(3)] == [(1, []), (0, []), (0, [])]


@pytest.mark.parametrize("name", ["square_constZ", "interval_constZ"])
def test_contractible_nerve(name):
    # both posets have a least element, so the nerve is contractible
    ws = CORPUS[name]
    cx = BWComplex(ws.category, ws.natural_system())
    assert [cx.cohomology(n) for n in range(5)] == [(1, [])] + [(0, [])] * 4


@pytest.mark.parametrize("p", [2, 3])
def test_cyclic_trivial_mod_p(p):
    c = cyclic_group(p)
    ns = from_group_module(c, FpAbGroup.cyclic(p), {})
    assert [bw_cohomology(c, ns, n) for n in range(5)] == [(0, [p])] * 5


def test_oracle_examples():
    c2, c3 = cyclic_group(2), cyclic_group(3)
    g = c2.id_by_name("g")
    assert oracle_group_cohomology(c2, Z2, {}, 0) == (0, [2])
    assert oracle_group_cohomology(c3, Z3, {}, 1) == (0, [3])
    assert oracle_group_cohomology(c2, Z, {g: intmat([[-1]])}, 2) == (0, [])
    assert oracle_group_cohomology(c2, Z, {g: intmat([[-1]])}, 1) == (0, [2])


# --------------------------------------------------------------- oracles

def closed_form(name, n):
    """Textbook group cohomology of the one-object corpus entries."""
    if name in ("z2_constZ", "z3_constZ"):
        m = 2 if name.startswith("z2") else 3
        return (1, []) if n == 0 else ((0, []) if n % 2 else (0, [m]))
    if name in ("z2_trivial", "z3_trivial", "z4_trivial"):
        return (0, [int(name[1])])
    if name in ("z2_signZ", "z4_signZ"):
        # cyclic <t> acting by -1: H^even = M^G / NM = 0, H^odd = ker N / (t-1)M = Z/2
        return (0, [2]) if n % 2 else (0, [])
    if name == "klein_trivial":
        return (0, [2] * (n + 1))
    return None


ONE_OBJECT = [n for n, ws in CORPUS.items()
              if ws.category.is_one_object() and ws.group_module() is not None
              and not n.endswith("_ext")]


@pytest.mark.parametrize("name", ONE_OBJECT)
def test_bw_equals_bar_oracle(name):
    ws = CORPUS[name]
    module, action = ws.group_module()
    cx = BWComplex(ws.category, ws.natural_system())
    for n in range(5):
        got = cx.cohomology(n)
        assert got == oracle_group_cohomology(ws.category, module, action, n)
        want = closed_form(name, n)
        if want is not None:
            assert got == want, (name, n)


@pytest.mark.parametrize("group,p", [("klein", 2), ("c4", 2), ("c3", 3), ("c2", 2)])
def test_mod_p_dimensions(group, p):
    if group == "klein":
        elems = [(a, b) for a in range(2) for b in range(2)]
        mult = lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)  # noqa: E731
        cat = klein_group()
    else:
        k = int(group[1])
        elems = list(range(k))
        mult = lambda x, y, k=k: (x + y) % k  # noqa: E731
        cat = cyclic_group(k)
    dims = bar_dims_mod_p(elems, mult, lambda g: 1, p, 3)
    cx = BWComplex(cat, from_group_module(cat, FpAbGroup.cyclic(p), {}))
    for n, d in enumerate(dims):
        assert order(cx.cohomology(n)) == p ** d


# --------------------------------------------------------------- structure

@pytest.mark.parametrize("name", sorted(CORPUS))
def test_dd_zero(name):
    ws = CORPUS[name]
    cx = BWComplex(ws.category, ws.natural_system())
    for n in range(4):
        assert cx.check_dd(n)


def small_cases():
    c2 = cyclic_group(2)
    g = c2.id_by_name("g")
    yield "interval Z", interval_category(), constant_system(interval_category(), Z)
    yield "interval bimod", CORPUS["interval_bimodZ"].category, \
        CORPUS["interval_bimodZ"].natural_system()
    yield "Z/2 Z/2", c2, from_group_module(c2, Z2, {})
    yield "Z/2 sign", c2, from_group_module(c2, Z, {g: [[-1]]})
    yield "Z/3 Z/3", cyclic_group(3), from_group_module(cyclic_group(3), Z3, {})


@pytest.mark.parametrize("label,cat,ns", list(small_cases()), ids=lambda x: x
                         if isinstance(x, str) else "")
def test_normalized_matches_unnormalized(label, cat, ns):
    assert len(cat) <= 3
    norm = BWComplex(cat, ns)
    full = BWComplex(cat, ns, normalized=False)
    for n in range(4):
        assert norm.cohomology(n) == full.cohomology(n)


def test_budget():
    c3 = cyclic_group(3)
    cx = BWComplex(c3, from_group_module(c3, Z3, {}), budget=5)
    with pytest.raises(BudgetExceeded) as info:
        cx.cohomology(3)
    assert info.value.size == 8


def test_evaluate_assemble_round_trip():
    ws = CORPUS["klein_signZ"]
    cx = BWComplex(ws.category, ws.natural_system())
    v = np.arange(cx.group(2).rank, dtype=object)
    assert np.array_equal(cx.assemble(2, cx.evaluate(2, v)), v)
