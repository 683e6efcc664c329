"""The bundled example corpus.

Every file under ``data/`` is generated by :func:`build_corpus`; the tests
check the shipped text still matches, so editing a builder here and
rerunning ``python3 -m catcoh.corpus`` is the way to change an example.
"""

from __future__ import annotations

import sys
from pathlib import Path

from .abgrp import FpAbGroup, intmat
from .fileformat import Coefficients, Workspace, dumps, load
from .fincat import cyclic_group, interval_category, klein_group, poset_category
from .trackcat import from_crossed_module

DATA_DIR = Path(__file__).with_name("data")


def square_category():
    """The commutative square 0 -> 1 -> 3, 0 -> 2 -> 3."""
    return poset_category(["0", "1", "2", "3"],
                          [("0", "1"), ("0", "2"), ("1", "3"), ("2", "3")],
                          name="square")


def _constant(cat, group, name, desc):
    return Workspace(name, desc, cat, Coefficients("constant", {"group": group}))


def _module(cat, module, action_by_name, name, desc):
    action = {cat.id_by_name(k): intmat(v) for k, v in action_by_name.items()}
    return Workspace(name, desc, cat,
                     Coefficients("group-module", {"module": module, "action": action}))


def _interval_bimodule():
    cat = interval_category()
    z, zero = FpAbGroup.free(1), FpAbGroup.trivial()
    groups = {(x, y): (z if (x, y) == ("0", "1") else zero)
              for x in cat.objects for y in cat.objects}
    a = cat.id_by_name("a")
    # M(0, a): M(0,0) -> M(0,1) and M(a, 1): M(1,1) -> M(0,1) are forced zero
    cov = {(a, "0"): intmat([[]], shape=(1, 0)), (a, "1"): intmat([], shape=(0, 0))}
    contra = {(a, "1"): intmat([[]], shape=(1, 0)), (a, "0"): intmat([], shape=(0, 0))}
    return Workspace("interval_bimodZ",
                     "interval with M(0,1) = Z and zero elsewhere", cat,
                     Coefficients("bimodule", {"groups": groups, "covariant": cov,
                                               "contravariant": contra}))


def _square_table():
    cat = square_category()
    z, zero = FpAbGroup.free(1), FpAbGroup.trivial()
    value = {f: (zero if cat.is_identity(f) else z) for f in range(len(cat))}
    post, pre = {}, {}
    for f in range(len(cat)):
        for g in cat.outgoing[cat.tgt(f)]:
            if not cat.is_identity(g):
                post[(g, f)] = intmat([[1]]) if value[f].rank else intmat([], shape=(1, 0))
        for h in range(len(cat)):
            if cat.tgt(h) == cat.src(f) and not cat.is_identity(h):
                pre[(f, h)] = intmat([[1]]) if value[f].rank else intmat([], shape=(1, 0))
    return Workspace("square_table",
                     "commutative square, D(f) = Z off the identities", cat,
                     Coefficients("table", {"value": value, "post": post, "pre": pre}))


def _bits(c):
    return "".join(map(str, c)) if isinstance(c, tuple) else str(c)


def _extension(crossed, lin_of, name, desc):
    k = cyclic_group(2)
    ws = _module(k, FpAbGroup.cyclic(2), {}, name, desc)
    tc = from_crossed_module(*crossed, name=name, label=_bits)
    ws.track = tc
    ws.project = {f: int(tc.base.mname(f)) % 2 for f in range(len(tc.base))}
    for h in tc.all_cells():
        cell = tc.cell_list[h]
        if cell.source == cell.target:
            ws.lin[h] = lin_of(cell.name.split(":")[1])
    return ws


def _z2_split():
    add = lambda a, b: (a + b) % 2  # noqa: E731
    crossed = (add, range(2), range(2), add, lambda c: 0, lambda m, c: c)
    return _extension(crossed, lambda s: (int(s),), "z2_split_ext",
                      "split extension from the crossed module Z/2 -0-> Z/2")


def _z2_nontrivial():
    cs = [(a, b) for a in range(2) for b in range(2)]

    def add(x, y):
        return ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2)

    def act(m, c):
        # odd elements of Z/4 swap the two coordinates
        return c if m % 2 == 0 else (c[1], c[0])

    crossed = (lambda a, b: (a + b) % 4, range(4), cs, add,
               lambda c: 2 * ((c[0] + c[1]) % 2), act)
    return _extension(crossed, lambda s: (int(s[0]),), "z2_nontrivial_ext",
                      "crossed module (Z/2)^2 -> Z/4 with swap action; "
                      "class generates H^3(Z/2; Z/2)")


def build_corpus() -> dict[str, Workspace]:
    z, z2, z3 = FpAbGroup.free(1), FpAbGroup.cyclic(2), FpAbGroup.cyclic(3)
    iv, sq = interval_category(), square_category()
    c2, c3, c4, kl = cyclic_group(2), cyclic_group(3), cyclic_group(4), klein_group()
    items = [
        _constant(iv, z, "interval_constZ", "interval category, constant Z"),
        _interval_bimodule(),
        _constant(sq, z, "square_constZ", "commutative square, constant Z"),
        _square_table(),
        _constant(c2, z, "z2_constZ", "Z/2, constant Z"),
        _module(c2, z2, {}, "z2_trivial", "Z/2 acting trivially on Z/2"),
        _module(c2, z, {"g": [[-1]]}, "z2_signZ", "Z/2 acting on Z by sign"),
        _constant(c3, z, "z3_constZ", "Z/3, constant Z"),
        _module(c3, z3, {}, "z3_trivial", "Z/3 acting trivially on Z/3"),
        _module(c4, FpAbGroup.cyclic(4), {}, "z4_trivial", "Z/4 acting trivially on Z/4"),
        _module(c4, z, {"g": [[-1]], "g2": [[1]], "g3": [[-1]]}, "z4_signZ",
                "Z/4 acting on Z through Z/2 by sign"),
        _module(kl, z2, {}, "klein_trivial", "Z/2xZ/2 acting trivially on Z/2"),
        _module(kl, z, {"a": [[-1]], "b": [[-1]], "ab": [[1]]}, "klein_signZ",
                "Z/2xZ/2 acting on Z by the sign of a and b"),
        _z2_split(),
        _z2_nontrivial(),
    ]
    return {ws.name: ws for ws in items}


def corpus_files() -> list[Path]:
    return sorted(DATA_DIR.glob("*.cat"))


def load_corpus() -> dict[str, Workspace]:
    return {p.stem: load(p) for p in corpus_files()}


def write_corpus(directory: Path = DATA_DIR) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, ws in build_corpus().items():
        p = directory / f"{name}.cat"
        p.write_text(dumps(ws), encoding="utf-8")
        out.append(p)
    return out


if __name__ == "__main__":
    for p in write_corpus(Path(sys.argv[1]) if len(sys.argv) > 1 else DATA_DIR):
        print(p)
