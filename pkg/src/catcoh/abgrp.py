"""Exact integer linear algebra over Z.

Matrices are numpy arrays with ``dtype=object`` holding Python ints, so no
entry can ever overflow. The Smith normal form here is the one primitive
everything else (kernels, images, homology, class coordinates) is built on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class CompositionError(ValueError):
    """Raised when two homomorphisms do not form a complex."""


def intmat(rows, shape=None) -> np.ndarray:
    """Build an object-dtype integer matrix from nested sequences."""
    if shape is not None and len(rows) == 0:
        return np.zeros(shape, dtype=object)
    a = np.array(rows, dtype=object)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else np.zeros((0, 0), dtype=object)
    out = np.empty(a.shape, dtype=object)
    for idx, x in np.ndenumerate(a):
        out[idx] = int(x)
    if shape is not None:
        out = out.reshape(shape)
    return out


def zeros(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=object)


def identity(n: int) -> np.ndarray:
    a = zeros(n, n)
    for i in range(n):
        a[i, i] = 1
    return a


_FLOAT_EXACT = 1 << 53


def _max_abs(a: np.ndarray) -> int:
    return int(np.max(np.abs(a))) if a.size else 0


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product; uses float64 BLAS when every partial sum is exact."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    if _max_abs(a) * _max_abs(b) * a.shape[1] < _FLOAT_EXACT:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return prod.astype(np.int64).astype(object)
    return a.dot(b)


@dataclass
class SNF:
    """Smith decomposition ``U @ M @ V == D`` with optional inverses."""

    D: np.ndarray
    U: np.ndarray | None
    V: np.ndarray | None
    U_inv: np.ndarray | None = None

    @cached_property
    def diagonal(self) -> list[int]:
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k)]

    @cached_property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _min_nonzero(a: np.ndarray, t: int):
    """Position of the smallest-magnitude nonzero entry of a[t:, t:].

    Ties go to the lowest (row, column) index.
    """
    sub = a[t:, t:]
    if sub.size == 0:
        return None
    flat = np.flatnonzero(sub != 0)
    if flat.size == 0:
        return None
    # argmin returns the first minimum, i.e. the lowest row-major index
    k = int(flat[np.argmin(np.abs(sub.reshape(-1)[flat]))])
    i, j = divmod(k, sub.shape[1])
    return i + t, j + t


def smith_decompose(m: np.ndarray, left: bool = True, right: bool = True,
                    left_inverse: bool = False) -> SNF:
    """Smith normal form with selectable transform tracking."""
    a = np.array(m, dtype=object, copy=True)
    rows, cols = a.shape
    U = identity(rows) if left else None
    Ui = identity(rows) if left_inverse else None
    V = identity(cols) if right else None

    def swap_rows(i, j):
        if i == j:
            return
        a[[i, j]] = a[[j, i]]
        if U is not None:
            U[[i, j]] = U[[j, i]]
        if Ui is not None:
            Ui[:, [i, j]] = Ui[:, [j, i]]

    def swap_cols(i, j):
        if i == j:
            return
        a[:, [i, j]] = a[:, [j, i]]
        if V is not None:
            V[:, [i, j]] = V[:, [j, i]]

    t = 0
    while t < min(rows, cols):
        pos = _min_nonzero(a, t)
        if pos is None:
            break
        swap_rows(t, pos[0])
        swap_cols(t, pos[1])
        while True:
            p = a[t, t]
            # clear column t below the pivot
            col = a[t + 1:, t]
            q = col // p
            if np.any(q != 0):
                a[t + 1:, :] -= np.outer(q, a[t, :])
                if U is not None:
                    U[t + 1:, :] -= np.outer(q, U[t, :])
                if Ui is not None:
                    Ui[:, t] += Ui[:, t + 1:].dot(q)
            # clear row t right of the pivot
            row = a[t, t + 1:]
            q = row // p
            if np.any(q != 0):
                a[:, t + 1:] -= np.outer(a[:, t], q)
                if V is not None:
                    V[:, t + 1:] -= np.outer(V[:, t], q)
            col_nz = [i for i in range(t + 1, rows) if a[i, t] != 0]
            row_nz = [j for j in range(t + 1, cols) if a[t, j] != 0]
            if col_nz or row_nz:
                # a remainder is smaller than the pivot; promote it
                cands = [(abs(a[i, t]), 0, i) for i in col_nz]
                cands += [(abs(a[t, j]), 1, j) for j in row_nz]
                _, kind, idx = min(cands)
                if kind == 0:
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            if t + 1 < rows and t + 1 < cols:
                bad = np.argwhere(a[t + 1:, t + 1:] % p != 0)
                if len(bad):
                    i = int(bad[0][0]) + t + 1
                    # row_t += row_i brings a non-multiple into row t
                    a[t, :] += a[i, :]
                    if U is not None:
                        U[t, :] += U[i, :]
                    if Ui is not None:
                        Ui[:, i] -= Ui[:, t]
                    continue
            break
        if a[t, t] < 0:
            a[t, :] = -a[t, :]
            if U is not None:
                U[t, :] = -U[t, :]
            if Ui is not None:
                Ui[:, t] = -Ui[:, t]
        t += 1
    return SNF(D=a, U=U, V=V, U_inv=Ui)


def smith_normal_form(m: np.ndarray):
    """Return ``(U, D, V)`` with ``D = U @ M @ V`` and U, V unimodular.

    ``D`` is diagonal with nonnegative entries ``d1 | d2 | ...``.
    """
    s = smith_decompose(m)
    return s.U, s.D, s.V


def kernel_basis(m: np.ndarray) -> np.ndarray:
    """Columns form a Z-basis of the integer kernel of ``m``."""
    s = smith_decompose(m, left=False, right=True)
    return s.V[:, s.rank:]


def solve(a: np.ndarray, b: np.ndarray):
    """An integer solution ``x`` of ``a @ x == b`` (b a vector), or None."""
    rows, cols = a.shape
    b = np.asarray(b, dtype=object).reshape(-1)
    if b.shape[0] != rows:
        raise ValueError(f"rhs has length {b.shape[0]}, expected {rows}")
    if rows == 0:
        return zeros(cols, 1).reshape(-1)
    s = smith_decompose(a)
    c = s.U.dot(b)
    y = zeros(cols, 1).reshape(-1)
    for i in range(rows):
        d = s.D[i, i] if i < cols else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    return s.V.dot(y)


def _as_vector(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=object).reshape(-1)
    if v.shape[0] != n:
        raise ValueError(f"vector of length {v.shape[0]} in ambient Z^{n}")
    return np.array([int(x) for x in v], dtype=object)


@dataclass(frozen=True, eq=False)
class FpAbGroup:
    """The group Z^rank / (column span of ``relations``)."""

    rank: int
    relations: np.ndarray = field(repr=False)

    def __post_init__(self):
        rel = self.relations
        if rel is None:
            rel = zeros(self.rank, 0)
        rel = np.asarray(rel, dtype=object)
        if rel.ndim != 2 or rel.shape[0] != self.rank:
            raise ValueError(
                f"relation matrix must have {self.rank} rows, got shape {rel.shape}")
        object.__setattr__(self, "relations", rel)

    @classmethod
    def free(cls, rank: int) -> FpAbGroup:
        return cls(rank, zeros(rank, 0))

    @classmethod
    def cyclic(cls, n: int) -> FpAbGroup:
        if n == 0:
            return cls.free(1)
        return cls(1, intmat([[n]]))

    @classmethod
    def trivial(cls) -> FpAbGroup:
        return cls(0, zeros(0, 0))

    @classmethod
    def from_factors(cls, free_rank: int, torsion) -> FpAbGroup:
        torsion = list(torsion)
        r = free_rank + len(torsion)
        rel = zeros(r, len(torsion))
        for k, t in enumerate(torsion):
            rel[free_rank + k, k] = t
        return cls(r, rel)

    def direct_sum(self, other: FpAbGroup) -> FpAbGroup:
        return direct_sum([self, other])

    @cached_property
    def _snf(self) -> SNF:
        return smith_decompose(self.relations, left=True, right=False,
                               left_inverse=True)

    @cached_property
    def _moduli(self) -> list[int]:
        diag = self._snf.diagonal
        return [diag[i] if i < len(diag) else 0 for i in range(self.rank)]

    def invariant_factors(self) -> tuple[int, list[int]]:
        return invariant_factors(self)

    def is_trivial(self) -> bool:
        free, tors = self.invariant_factors()
        return free == 0 and not tors

    def order(self):
        """Cardinality, or None for an infinite group."""
        free, tors = self.invariant_factors()
        if free:
            return None
        n = 1
        for t in tors:
            n *= t
        return n

    @cached_property
    def _diagonal(self):
        """Per-generator moduli when every relator is a multiple of one
        generator (as for direct sums of cyclic groups), else None."""
        rel = self.relations
        if rel.shape[1] == 0:
            return zeros(self.rank, 1).reshape(-1)
        nz = rel != 0
        per_col = nz.sum(axis=0)
        if np.any(per_col > 1):
            return None
        used = per_col == 1
        rows = np.argmax(nz[:, used], axis=0)
        if len(set(rows.tolist())) != len(rows):
            return None
        mod = zeros(self.rank, 1).reshape(-1)
        mod[rows] = np.abs(rel[rows, np.flatnonzero(used)])
        return mod

    def contains_columns(self, m) -> bool:
        """True iff every column of ``m`` is zero in the group."""
        m = np.asarray(m, dtype=object)
        if m.shape[0] != self.rank:
            raise ValueError(f"matrix with {m.shape[0]} rows in ambient Z^{self.rank}")
        if self.rank == 0 or m.shape[1] == 0:
            return True
        mod = self._diagonal
        if mod is None:
            s = self._snf
            m = s.U.dot(m)
            mod = np.array([s.D[i, i] if i < s.D.shape[1] else 0
                            for i in range(self.rank)], dtype=object)
        free = mod == 0
        if np.any(m[free] != 0):
            return False
        tors = ~free
        return not np.any(m[tors] % mod[tors][:, None] != 0)

    def contains_relation(self, v) -> bool:
        """True iff ``v`` is zero in the group (lies in the relation span)."""
        v = _as_vector(v, self.rank)
        return self.contains_columns(v.reshape(-1, 1))

    def normalize(self, v) -> tuple[int, ...]:
        """Canonical representative of the coset of ``v``."""
        v = _as_vector(v, self.rank)
        if self.rank == 0:
            return ()
        mod = self._diagonal
        if mod is not None:
            return tuple(int(x % d) if d else int(x) for x, d in zip(v, mod))
        y = self._snf.U.dot(v)
        for i, d in enumerate(self._moduli):
            if d:
                y[i] %= d
        return tuple(int(x) for x in self._snf.U_inv.dot(y))

    def elements(self, free_bound: int = 1):
        """Canonical representatives of all elements.

        Free summands are truncated to coordinates in [-free_bound, free_bound].
        """
        mod = self._diagonal
        if mod is not None:
            ranges = [range(d) if d else range(-free_bound, free_bound + 1) for d in mod]
            return [tuple(y) for y in itertools.product(*ranges)]
        ranges = []
        for d in self._moduli:
            ranges.append(range(d) if d else range(-free_bound, free_bound + 1))
        out = []
        for y in itertools.product(*ranges):
            x = self._snf.U_inv.dot(np.array(y, dtype=object)) if self.rank else []
            out.append(tuple(int(t) for t in x))
        return out

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def equal_elements(self, v, w) -> bool:
        return self.contains_relation(_as_vector(v, self.rank) - _as_vector(w, self.rank))

    def __eq__(self, other):
        if not isinstance(other, FpAbGroup):
            return NotImplemented
        return self.invariant_factors() == other.invariant_factors()

    def __hash__(self):
        free, tors = self.invariant_factors()
        return hash((free, tuple(tors)))

    def __str__(self):
        return format_factors(*self.invariant_factors())


def direct_sum(groups) -> FpAbGroup:
    groups = list(groups)
    r = sum(g.rank for g in groups)
    k = sum(g.relations.shape[1] for g in groups)
    rel = zeros(r, k)
    i = j = 0
    for g in groups:
        gi, gj = g.relations.shape
        rel[i:i + gi, j:j + gj] = g.relations
        i += gi
        j += gj
    return FpAbGroup(r, rel)


def invariant_factors(g: FpAbGroup) -> tuple[int, list[int]]:
    """Canonical ``(free_rank, [t1, t2, ...])`` with t1 | t2 | ... and ti > 1."""
    return _factors_from_diagonal(g.rank, smith_decompose(
        g.relations, left=False, right=False).diagonal)


def _factors_from_diagonal(rank: int, diag) -> tuple[int, list[int]]:
    nonzero = [d for d in diag if d != 0]
    torsion = [d for d in nonzero if d > 1]
    return rank - len(nonzero), torsion


def format_factors(free_rank: int, torsion) -> str:
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z/{t}" for t in torsion)
    return " (+) ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class AbHom:
    """Homomorphism of presented groups given on ambient generators."""

    source: FpAbGroup
    target: FpAbGroup
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=object)
        if m.shape != (self.target.rank, self.source.rank):
            raise ValueError(
                f"matrix shape {m.shape} does not match "
                f"{self.target.rank}x{self.source.rank}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def zero(cls, source: FpAbGroup, target: FpAbGroup) -> AbHom:
        return cls(source, target, zeros(target.rank, source.rank))

    @classmethod
    def identity(cls, group: FpAbGroup) -> AbHom:
        return cls(group, group, identity(group.rank))

    def is_well_defined(self) -> bool:
        return self.target.contains_columns(matmul(self.matrix, self.source.relations))

    def compose(self, inner: AbHom) -> AbHom:
        """``self ∘ inner``."""
        if inner.target.rank != self.source.rank:
            raise CompositionError("ambient ranks do not match")
        return AbHom(inner.source, self.target, matmul(self.matrix, inner.matrix))

    def __call__(self, v) -> np.ndarray:
        return self.matrix.dot(_as_vector(v, self.source.rank))

    def is_zero(self) -> bool:
        return self.target.contains_columns(self.matrix)

    def equals(self, other: AbHom) -> bool:
        """Equality as maps on cosets."""
        if self.matrix.shape != other.matrix.shape:
            return False
        return self.target.contains_columns(self.matrix - other.matrix)


def in_image(h: AbHom, v):
    """A preimage ``x`` with ``h(x) == v`` in the target group, or None."""
    v = _as_vector(v, h.target.rank)
    a = np.concatenate([h.matrix, h.target.relations], axis=1)
    x = solve(a, v)
    if x is None:
        return None
    return x[:h.source.rank]


def _lattice_basis(gens: np.ndarray):
    """Basis of the lattice spanned by the columns of ``gens``.

    Returns ``(basis, coords)`` where ``coords(v)`` expresses a lattice vector
    in that basis.
    """
    s = smith_decompose(gens, left=True, right=False, left_inverse=True)
    r = s.rank
    d = s.diagonal[:r]
    basis = s.U_inv[:, :r] * np.array(d, dtype=object) if r else zeros(gens.shape[0], 0)
    U = s.U

    def coords(v):
        c = U.dot(_as_vector(v, gens.shape[0]))
        out = []
        for i, di in enumerate(d):
            if c[i] % di:
                raise ValueError("vector is not in the lattice")
            out.append(c[i] // di)
        if any(c[i] != 0 for i in range(r, len(c))):
            raise ValueError("vector is not in the lattice")
        return np.array(out, dtype=object)

    return basis, coords


class Homology:
    """ker(d_out) / im(d_in) with cycle coordinates.

    ``cycles`` holds a basis of the cycle lattice in the ambient generators of
    the middle group; ``group`` presents the quotient on that basis. The SNF
    of ``group.relations`` fixes canonical class coordinates.
    """

    def __init__(self, d_in: AbHom, d_out: AbHom, check: bool = True):
        if d_in.target.rank != d_out.source.rank:
            raise CompositionError(
                f"d_in lands in Z^{d_in.target.rank}, "
                f"d_out starts in Z^{d_out.source.rank}")
        if check and not d_out.compose(d_in).is_zero():
            raise CompositionError("d_out ∘ d_in is not zero")
        middle = d_out.source
        self.middle = middle
        n = middle.rank
        # cycles: x with d_out x in the target relation span
        stacked = np.concatenate([d_out.matrix, d_out.target.relations], axis=1)
        if stacked.shape[0] == 0:
            gens = identity(n)
        else:
            gens = kernel_basis(stacked)[:n, :]
        self.cycles, self._coords = _lattice_basis(gens)
        k = self.cycles.shape[1]
        bounds = np.concatenate([d_in.matrix, middle.relations], axis=1)
        rel = zeros(k, bounds.shape[1])
        for j in range(bounds.shape[1]):
            rel[:, j] = self._coords(bounds[:, j])
        self.group = FpAbGroup(k, rel)
        self._snf = smith_decompose(rel, left=True, right=False, left_inverse=True)
        diag = self._snf.diagonal
        self._moduli = [diag[i] if i < len(diag) else 0 for i in range(k)]

    def invariant_factors(self) -> tuple[int, list[int]]:
        return _factors_from_diagonal(self.group.rank, self._snf.diagonal)

    @property
    def moduli(self) -> list[int]:
        """Orders of the canonical cyclic summands (0 = infinite), units dropped."""
        return [m for m in self._moduli if m != 1]

    def is_cycle(self, v) -> bool:
        try:
            self._coords(v)
        except ValueError:
            return False
        return True

    def class_coordinates(self, v) -> tuple[int, ...]:
        """Coordinates of the class of cycle ``v`` along the canonical summands."""
        z = self._snf.U.dot(self._coords(v)) if self.group.rank else []
        out = []
        for zi, m in zip(z, self._moduli):
            if m == 1:
                continue
            out.append(int(zi % m) if m else int(zi))
        return tuple(out)

    def generators(self) -> list[np.ndarray]:
        """Cycle representatives of the canonical summand generators."""
        reps = []
        for i, m in enumerate(self._moduli):
            if m != 1:
                reps.append(self.cycles.dot(self._snf.U_inv[:, i]))
        return reps


def homology_of_pair(d_in: AbHom, d_out: AbHom) -> FpAbGroup:
    """ker(d_out) / im(d_in) as a presented group."""
    return Homology(d_in, d_out).group
