import itertools
import math
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from catcoh.abgrp import (AbHom, FpAbGroup, Homology, format_factors, homology_of_pair,
                          identity, in_image, intmat, invariant_factors, kernel_basis,
                          matmul, smith_normal_form, solve, zeros)


def det(m) -> int:
    if m.shape[0] == 0:
        return 1
    return int(sympy.Matrix(m.tolist()).det())


def minor_gcd_factors(m):
    """Invariant factors from determinantal divisors d_k = gcd of k x k minors."""
    rows, cols = m.shape
    ds = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = math.gcd(g, det(m[np.ix_(r, c)]))
        if g == 0:
            break
        ds.append(g)
    return [ds[k] // ds[k - 1] for k in range(1, len(ds))]


def check_snf(m):
    U, D, V = smith_normal_form(m)
    assert np.array_equal(matmul(matmul(U, m), V), D)
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    diag = [int(D[i, i]) for i in range(min(D.shape))]
    off = D.copy()
    for i in range(min(D.shape)):
        off[i, i] = 0
    assert not np.any(off != 0)
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert diag[:len(nz)] == nz, "zeros must trail"
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return nz


small_matrices = st.integers(0, 4).flatmap(
    lambda r: st.integers(0, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c),
                           min_size=r, max_size=r).map(
            lambda rows, r=r, c=c: intmat(rows, shape=(r, c)))))


def test_snf_diag_2_3():
    _, D, _ = smith_normal_form(intmat([[2, 0], [0, 3]]))
    assert D.tolist() == [[1, 0], [0, 6]]


def test_snf_zero_matrix():
    U, D, V = smith_normal_form(zeros(3, 2))
    assert not np.any(D != 0)
    assert np.array_equal(U, identity(3)) and np.array_equal(V, identity(2))


def test_snf_identity():
    _, D, _ = smith_normal_form(identity(4))
    assert np.array_equal(D, identity(4))


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_matches_determinantal_divisors(m):
    assert check_snf(m) == minor_gcd_factors(m)


@pytest.mark.parametrize("size", [(10, 10), (25, 17), (17, 25), (40, 40)])
def test_snf_round_trip_large(size):
    rng = np.random.default_rng(sum(size))
    m = intmat(rng.integers(-5, 6, size=size).tolist(), shape=size)
    nz = check_snf(m)
    assert len(nz) == np.linalg.matrix_rank(m.astype(float))


def test_snf_large_entries_stay_exact():
    # entries past 2^53 must not go through floating point
    big = 2 ** 60 + 1
    m = intmat([[big, 2 * big], [3, big]])
    check_snf(m)


def test_matmul_exact_beyond_float_range():
    a = intmat([[2 ** 40, 1]])
    b = intmat([[2 ** 40], [1]])
    assert matmul(a, b)[0, 0] == 2 ** 80 + 1


def unimodular(rng: random.Random, n: int, steps: int = 12):
    u = identity(n)
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        u[i, :] += rng.choice([-2, -1, 1, 2]) * u[j, :]
    if n and rng.random() < 0.5:
        u[0, :] = -u[0, :]
    return u


@settings(max_examples=80, deadline=None)
@given(small_matrices, st.integers(0, 10 ** 6))
def test_presentation_invariance(rel, seed):
    rng = random.Random(seed)
    g = FpAbGroup(rel.shape[0], rel)
    p = unimodular(rng, rel.shape[0])
    q = unimodular(rng, rel.shape[1])
    h = FpAbGroup(rel.shape[0], matmul(matmul(p, rel), q))
    assert invariant_factors(g) == invariant_factors(h)
    # adding a redundant relator and a split-off unit summand changes nothing
    extra = np.concatenate([rel, rel.sum(axis=1).reshape(-1, 1)], axis=1) if rel.size \
        else rel
    assert invariant_factors(FpAbGroup(rel.shape[0], extra)) == invariant_factors(g)


def test_invariant_factor_examples():
    assert invariant_factors(FpAbGroup(2, intmat([[2, 0], [0, 3]]))) == (0, [6])
    assert invariant_factors(FpAbGroup.free(3)) == (3, [])
    assert invariant_factors(FpAbGroup(1, intmat([[1]]))) == (0, [])
    assert invariant_factors(FpAbGroup.from_factors(1, [4, 6])) == (1, [2, 12])


def test_format_factors():
    assert format_factors(0, []) == "0"
    assert format_factors(1, []) == "Z"
    assert format_factors(2, [2, 4]) == "Z^2 (+) Z/2 (+) Z/4"


def test_homology_times_two():
    z = FpAbGroup.free(1)
    h = homology_of_pair(AbHom(z, z, intmat([[2]])), AbHom.zero(z, z))
    assert invariant_factors(h) == (0, [2])


@pytest.mark.parametrize("k", [1, 3])
def test_homology_zero_maps(k):
    z = FpAbGroup.free(k)
    h = homology_of_pair(AbHom.zero(z, z), AbHom.zero(z, z))
    assert invariant_factors(h) == (k, [])


def test_homology_iso_out():
    z = FpAbGroup.free(2)
    h = homology_of_pair(AbHom.zero(z, z), AbHom(z, z, intmat([[2, 1], [1, 1]])))
    assert invariant_factors(h) == (0, [])


def test_homology_with_torsion_target():
    # Z --2--> Z --1--> Z/2: cycles are 2Z, boundaries 2Z
    z, z2 = FpAbGroup.free(1), FpAbGroup.cyclic(2)
    h = Homology(AbHom(z, z, intmat([[2]])), AbHom(z, z2, intmat([[1]])))
    assert h.invariant_factors() == (0, [])


def test_homology_class_coordinates_and_generators():
    z = FpAbGroup.free(2)
    d_in = AbHom(FpAbGroup.free(1), z, intmat([[2], [0]]))
    h = Homology(d_in, AbHom.zero(z, FpAbGroup.trivial()))
    assert h.invariant_factors() == (1, [2])
    for g in h.generators():
        assert h.is_cycle(g)
    # the coordinates of a boundary vanish
    assert all(c == 0 for c in h.class_coordinates([2, 0]))
    assert h.class_coordinates([1, 0]) != h.class_coordinates([0, 0])


def test_in_image_examples():
    z = FpAbGroup.free(1)
    two = AbHom(z, z, intmat([[2]]))
    assert list(in_image(two, [4])) == [2]
    assert in_image(two, [3]) is None
    z5 = FpAbGroup.cyclic(5)
    x = in_image(AbHom.zero(z, z5), [5])
    assert x is not None and list(x) == [0]


@settings(max_examples=60, deadline=None)
@given(small_matrices, st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_and_kernel(m, xs):
    x = intmat([xs[:m.shape[1]]], shape=(1, m.shape[1])).reshape(-1)
    b = m.dot(x)
    y = solve(m, b)
    assert y is not None and np.array_equal(m.dot(y), b)
    k = kernel_basis(m)
    assert not np.any(matmul(m, k) != 0)
    rank = np.linalg.matrix_rank(m.astype(float)) if m.size else 0
    assert k.shape[1] == m.shape[1] - rank


def test_group_elements_and_normalize():
    g = FpAbGroup.from_factors(0, [2, 3])
    elems = list(g.elements())
    assert len(elems) == 6 == g.order()
    assert g.equal_elements([2, 3], [0, 0])
    assert g.normalize([3, 4]) == g.normalize([1, 1])


def test_well_defined_hom():
    z2, z4 = FpAbGroup.cyclic(2), FpAbGroup.cyclic(4)
    assert AbHom(z2, z4, intmat([[2]])).is_well_defined()
    assert not AbHom(z2, z4, intmat([[1]])).is_well_defined()
    assert AbHom(z4, z2, intmat([[1]])).is_well_defined()
