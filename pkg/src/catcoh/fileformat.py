"""Reader and writer for workspace files (``.cat``).

A workspace is a sequence of blocks, one keyword per line, ``#`` starting a
comment. See ``docs/FORMAT.md`` for the grammar. The parser is strict:
unknown keys, dangling names and badly shaped matrices are rejected with a
line and column.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .abgrp import FpAbGroup, direct_sum, intmat, zeros
from .fincat import FiniteCategory
from .natsys import Bimodule, NaturalSystem, constant_system, from_bimodule, from_group_module
from .trackcat import Choices, TableTrackCategory, TrackExtension


class ParseError(ValueError):
    def __init__(self, msg, line=0, col=0, path=""):
        self.msg, self.line, self.col, self.path = msg, line, col, path
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{col}: {msg}")


COEFFICIENT_KINDS = ("constant", "group-module", "bimodule", "table")

_CATEGORY_KEYS = {"object": 1, "morphism": 3, "identity": 2, "compose": 3}
_TRACK_KEYS = dict(_CATEGORY_KEYS, project=2, cell=3, idcell=2, vcomp=3, post=3,
                   pre=3, lin=2)


@dataclass
class Token:
    text: str
    line: int
    col: int


def _tokenize(text: str, lineno: int) -> list[Token]:
    """Whitespace-separated tokens; a bracketed token keeps its contents together."""
    out, i, n = [], 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        start, depth = i, 0
        # only a token opening with a bracket may contain spaces
        bracketed = text[i] in "[<"
        while i < n and (depth > 0 or not text[i].isspace()):
            if bracketed and text[i] in "[<":
                depth += 1
            elif bracketed and text[i] in "]>":
                depth -= 1
            i += 1
        if depth != 0:
            raise ParseError("unbalanced brackets", lineno, start + 1)
        out.append(Token(text[start:i], lineno, start + 1))
    return out


# ------------------------------------------------------------- small values

def parse_group(tokens: list[Token]) -> FpAbGroup:
    """``0``, ``Z``, ``Z^k``, ``Z/n`` or ``<r | [v] [v] ...>`` joined by ``+``."""
    if not tokens:
        raise ParseError("missing group", 0, 0)
    text = " ".join(t.text for t in tokens)
    first = tokens[0]
    parts, cur = [], []
    for t in tokens:
        if t.text == "+":
            parts.append(cur)
            cur = []
        else:
            cur.append(t)
    parts.append(cur)
    groups = []
    for part in parts:
        if len(part) != 1:
            raise ParseError(f"malformed group expression {text!r}", first.line, first.col)
        groups.append(_parse_summand(part[0]))
    return direct_sum(groups) if len(groups) > 1 else groups[0]


def _parse_summand(tok: Token) -> FpAbGroup:
    s = tok.text
    try:
        if s == "0":
            return FpAbGroup.trivial()
        if s == "Z":
            return FpAbGroup.free(1)
        if s.startswith("Z^"):
            k = int(s[2:])
            if k < 0:
                raise ValueError
            return FpAbGroup.free(k)
        if s.startswith("Z/"):
            n = int(s[2:])
            if n < 1:
                raise ValueError
            return FpAbGroup.cyclic(n)
    except ValueError:
        raise ParseError(f"bad group {s!r}", tok.line, tok.col) from None
    if s.startswith("<") and s.endswith(">") and "|" in s:
        head, _, body = s[1:-1].partition("|")
        try:
            rank = int(head)
            rels = [json.loads(v + "]") for v in body.split("]") if v.strip()]
        except ValueError:
            raise ParseError(f"bad presentation {s!r}", tok.line, tok.col) from None
        if rank < 0 or any(not isinstance(r, list) or len(r) != rank
                           or not all(isinstance(x, int) for x in r) for r in rels):
            raise ParseError(f"relators in {s!r} must be integer vectors of length {rank}",
                             tok.line, tok.col)
        rel = zeros(rank, len(rels))
        for j, r in enumerate(rels):
            for i, x in enumerate(r):
                rel[i, j] = x
        return FpAbGroup(rank, rel)
    raise ParseError(f"bad group {s!r}", tok.line, tok.col)


def parse_matrix(tok: Token, rows: int, cols: int) -> np.ndarray:
    """A JSON list of rows; ``[]`` stands for any matrix with no entries."""
    try:
        data = json.loads(tok.text)
    except ValueError:
        raise ParseError(f"bad matrix {tok.text!r}", tok.line, tok.col) from None
    if data == [] and rows * cols == 0:
        return zeros(rows, cols)
    ok = (isinstance(data, list) and len(data) == rows
          and all(isinstance(r, list) and len(r) == cols
                  and all(isinstance(x, int) for x in r) for r in data))
    if not ok:
        raise ParseError(f"expected a {rows}x{cols} integer matrix, got {tok.text}",
                         tok.line, tok.col)
    return intmat(data, shape=(rows, cols))


def parse_vector(tok: Token, n: int) -> tuple[int, ...]:
    try:
        data = json.loads(tok.text)
    except ValueError:
        raise ParseError(f"bad vector {tok.text!r}", tok.line, tok.col) from None
    if not (isinstance(data, list) and len(data) == n and all(isinstance(x, int) for x in data)):
        raise ParseError(f"expected an integer vector of length {n}", tok.line, tok.col)
    return tuple(data)


# ------------------------------------------------------------- workspace

@dataclass
class Coefficients:
    kind: str
    data: dict
    line: int = 0


@dataclass
class Workspace:
    name: str
    description: str
    category: FiniteCategory
    coefficients: Coefficients | None = None
    track: TableTrackCategory | None = None
    project: dict = field(default_factory=dict)
    lin: dict = field(default_factory=dict)
    path: str = ""

    def natural_system(self) -> NaturalSystem:
        """Build the coefficients; FunctorialityError if they are not lawful."""
        if self.coefficients is None:
            raise ValueError("workspace has no coefficients block")
        return _build_system(self.category, self.coefficients)

    def group_module(self):
        """``(module, action)`` for the oracle, or None when not a G-module."""
        c = self.coefficients
        if c is None:
            return None
        if c.kind == "constant":
            return c.data["group"], {}
        if c.kind == "group-module":
            return c.data["module"], dict(c.data["action"])
        return None

    def extension(self) -> TrackExtension:
        if self.track is None:
            raise ValueError("workspace has no track block")
        return TrackExtension(self.track, self.category, self.natural_system(),
                              dict(self.project), dict(self.lin), name=self.name)


def _build_system(cat: FiniteCategory, c: Coefficients) -> NaturalSystem:
    d = c.data
    if c.kind == "constant":
        return constant_system(cat, d["group"])
    if c.kind == "group-module":
        return from_group_module(cat, d["module"], d["action"])
    if c.kind == "bimodule":
        return from_bimodule(cat, Bimodule(d["groups"], d["covariant"], d["contravariant"]))
    return NaturalSystem(cat, d["value"], d["post"], d["pre"], name="table")


class _Reader:
    def __init__(self, text: str, path: str):
        self.path = path
        self.lines: list[list[Token]] = []
        for no, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            try:
                toks = _tokenize(body, no)
            except ParseError as exc:
                raise ParseError(exc.msg, exc.line, exc.col, path) from None
            if toks:
                self.lines.append(toks)
        self.pos = 0

    def fail(self, msg, tok: Token | None):
        line, col = (tok.line, tok.col) if tok else (0, 0)
        raise ParseError(msg, line, col, self.path)

    def next(self):
        if self.pos >= len(self.lines):
            return None
        toks = self.lines[self.pos]
        self.pos += 1
        return toks

    def block(self, header: Token) -> list[list[Token]]:
        """Lines up to the matching ``end``."""
        body = []
        while True:
            toks = self.next()
            if toks is None:
                self.fail(f"block '{header.text}' is not closed by 'end'", header)
            if toks[0].text == "end":
                if len(toks) > 1:
                    self.fail("unexpected text after 'end'", toks[1])
                return body
            body.append(toks)


def loads(text: str, path: str = "") -> Workspace:
    """Parse a workspace from text."""
    rd = _Reader(text, path)
    name = description = None
    cat_lines = coeff = track_lines = None
    coeff_header = track_header = None
    while True:
        toks = rd.next()
        if toks is None:
            break
        head = toks[0]
        key = head.text
        if key in ("name", "description"):
            if len(toks) < 2:
                rd.fail(f"'{key}' needs a value", head)
            value = " ".join(t.text for t in toks[1:])
            if key == "name":
                if name is not None:
                    rd.fail("duplicate 'name'", head)
                name = value
            else:
                if description is not None:
                    rd.fail("duplicate 'description'", head)
                description = value
        elif key == "category":
            if cat_lines is not None:
                rd.fail("duplicate 'category' block", head)
            if len(toks) > 1:
                rd.fail("unexpected text after 'category'", toks[1])
            cat_lines = rd.block(head)
        elif key == "coefficients":
            if coeff is not None:
                rd.fail("duplicate 'coefficients' block", head)
            if len(toks) != 2 or toks[1].text not in COEFFICIENT_KINDS:
                rd.fail(f"'coefficients' needs one of {', '.join(COEFFICIENT_KINDS)}",
                        toks[1] if len(toks) > 1 else head)
            coeff = (toks[1].text, rd.block(head))
            coeff_header = head
        elif key == "track":
            if track_lines is not None:
                rd.fail("duplicate 'track' block", head)
            if len(toks) > 1:
                rd.fail("unexpected text after 'track'", toks[1])
            track_lines = rd.block(head)
            track_header = head
        else:
            rd.fail(f"unknown key {key!r}", head)
    if cat_lines is None:
        raise ParseError("missing 'category' block", 1, 1, path)
    cat, _ = _parse_category(rd, cat_lines, _CATEGORY_KEYS, name or "")
    ws = Workspace(name or Path(path).stem, description or "", cat, path=path)
    if coeff is not None:
        ws.coefficients = _parse_coefficients(rd, cat, coeff[0], coeff[1])
        ws.coefficients.line = coeff_header.line
    if track_lines is not None:
        if ws.coefficients is None:
            rd.fail("a 'track' block needs a 'coefficients' block", track_header)
        _parse_track(rd, ws, track_lines)
    return ws


def load(path) -> Workspace:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", 0, 0, str(path)) from None
    return loads(text, str(path))


def _expect(rd, toks, n):
    if len(toks) != n + 1:
        rd.fail(f"'{toks[0].text}' takes {n} argument{'s' if n != 1 else ''}, "
                f"got {len(toks) - 1}", toks[0])


def _parse_category(rd, lines, allowed, name, extra=None):
    objects, morphs, idents, comp = [], {}, {}, {}
    mlist = []
    rest = []
    for toks in lines:
        key = toks[0].text
        if key not in allowed:
            rd.fail(f"unknown key {key!r} in block", toks[0])
        if key not in _CATEGORY_KEYS:
            rest.append(toks)
            continue
        _expect(rd, toks, _CATEGORY_KEYS[key])
        args = toks[1:]
        if key == "object":
            if args[0].text in objects:
                rd.fail(f"duplicate object {args[0].text!r}", args[0])
            objects.append(args[0].text)
        elif key == "morphism":
            m, s, t = args
            if m.text in morphs:
                rd.fail(f"duplicate morphism {m.text!r}", m)
            for o in (s, t):
                if o.text not in objects:
                    rd.fail(f"unknown object {o.text!r}", o)
            morphs[m.text] = len(mlist)
            mlist.append((m.text, s.text, t.text))
        elif key == "identity":
            o, m = args
            if o.text not in objects:
                rd.fail(f"unknown object {o.text!r}", o)
            if m.text not in morphs:
                rd.fail(f"unknown morphism {m.text!r}", m)
            if o.text in idents:
                rd.fail(f"duplicate identity for {o.text!r}", o)
            idents[o.text] = morphs[m.text]
        else:
            g, f, h = args
            for t in (g, f, h):
                if t.text not in morphs:
                    rd.fail(f"unknown morphism {t.text!r}", t)
            key2 = (morphs[g.text], morphs[f.text])
            if key2 in comp:
                rd.fail(f"duplicate composite {g.text} {f.text}", g)
            if mlist[key2[0]][1] != mlist[key2[1]][2]:
                rd.fail(f"{g.text} and {f.text} are not composable", g)
            comp[key2] = morphs[h.text]
    if not objects:
        rd.fail("category has no objects", lines[0][0] if lines else None)
    for o in objects:
        if o not in idents:
            rd.fail(f"object {o!r} has no identity", lines[0][0])
    return FiniteCategory(objects, mlist, idents, comp, name=name), rest


def _morph(rd, cat, tok):
    try:
        return cat.id_by_name(tok.text)
    except KeyError:
        rd.fail(f"unknown morphism {tok.text!r}", tok)


def _object(rd, cat, tok):
    if tok.text not in cat.objects:
        rd.fail(f"unknown object {tok.text!r}", tok)
    return tok.text


def _parse_coefficients(rd, cat, kind, lines) -> Coefficients:
    keys = {
        "constant": {"group": None},
        "group-module": {"module": None, "action": 2},
        "bimodule": {"group": None, "covariant": 3, "contravariant": 3},
        "table": {"value": None, "post": 3, "pre": 3},
    }[kind]
    for toks in lines:
        if toks[0].text not in keys:
            rd.fail(f"unknown key {toks[0].text!r} in '{kind}' coefficients", toks[0])
        if keys[toks[0].text] is not None:
            _expect(rd, toks, keys[toks[0].text])

    def group_of(toks, skip):
        if len(toks) <= skip:
            rd.fail(f"'{toks[0].text}' needs a group", toks[0])
        try:
            return parse_group(toks[skip:])
        except ParseError as exc:
            raise ParseError(exc.msg, exc.line or toks[0].line, exc.col or toks[0].col,
                             rd.path) from None

    def wrap(fn, *args):
        try:
            return fn(*args)
        except ParseError as exc:
            raise ParseError(exc.msg, exc.line, exc.col, rd.path) from None

    if kind == "constant":
        gl = [t for t in lines if t[0].text == "group"]
        if len(gl) != 1:
            rd.fail("constant coefficients need exactly one 'group'",
                    gl[1][0] if gl else None)
        return Coefficients(kind, {"group": group_of(gl[0], 1)})

    if kind == "group-module":
        if not cat.is_one_object():
            rd.fail("group-module coefficients need a one-object category", lines[0][0]
                    if lines else None)
        ml = [t for t in lines if t[0].text == "module"]
        if len(ml) != 1:
            rd.fail("group-module coefficients need exactly one 'module'",
                    ml[1][0] if ml else None)
        module = group_of(ml[0], 1)
        action = {}
        for toks in lines:
            if toks[0].text == "action":
                g = _morph(rd, cat, toks[1])
                if g in action:
                    rd.fail(f"duplicate action for {toks[1].text!r}", toks[1])
                action[g] = wrap(parse_matrix, toks[2], module.rank, module.rank)
        return Coefficients(kind, {"module": module, "action": action})

    if kind == "bimodule":
        groups, cov, contra = {}, {}, {}
        for toks in lines:
            if toks[0].text == "group":
                if len(toks) < 4:
                    rd.fail("'group' takes X Y and a group", toks[0])
                x, y = _object(rd, cat, toks[1]), _object(rd, cat, toks[2])
                if (x, y) in groups:
                    rd.fail(f"duplicate group at ({x}, {y})", toks[1])
                groups[(x, y)] = group_of(toks, 3)
        for x in cat.objects:
            for y in cat.objects:
                if (x, y) not in groups:
                    rd.fail(f"bimodule has no group at ({x}, {y})", lines[0][0]
                            if lines else None)
        for toks in lines:
            key = toks[0].text
            if key == "covariant":
                g, x = _morph(rd, cat, toks[1]), _object(rd, cat, toks[2])
                src, tgt = groups[(x, cat.src(g))], groups[(x, cat.tgt(g))]
                if (g, x) in cov:
                    rd.fail("duplicate covariant entry", toks[1])
                cov[(g, x)] = wrap(parse_matrix, toks[3], tgt.rank, src.rank)
            elif key == "contravariant":
                h, y = _morph(rd, cat, toks[1]), _object(rd, cat, toks[2])
                src, tgt = groups[(cat.tgt(h), y)], groups[(cat.src(h), y)]
                if (h, y) in contra:
                    rd.fail("duplicate contravariant entry", toks[1])
                contra[(h, y)] = wrap(parse_matrix, toks[3], tgt.rank, src.rank)
        return Coefficients(kind, {"groups": groups, "covariant": cov,
                                   "contravariant": contra})

    value, post, pre = {}, {}, {}
    for toks in lines:
        if toks[0].text == "value":
            f = _morph(rd, cat, toks[1])
            if f in value:
                rd.fail(f"duplicate value for {toks[1].text!r}", toks[1])
            value[f] = group_of(toks, 2)
    for f in range(len(cat)):
        if f not in value:
            rd.fail(f"no value for arrow {cat.mname(f)!r}", lines[0][0] if lines else None)
    for toks in lines:
        key = toks[0].text
        if key not in ("post", "pre"):
            continue
        a, b = _morph(rd, cat, toks[1]), _morph(rd, cat, toks[2])
        if not cat.composable(a, b):
            rd.fail(f"{toks[1].text} and {toks[2].text} are not composable", toks[1])
        if (a, b) not in cat.compose_table:
            rd.fail(f"composite of {toks[1].text} and {toks[2].text} is not in the table",
                    toks[1])
        ab = cat.compose(a, b)
        if key == "post":
            # g_*: D(f) -> D(g f)
            table, src = post, value[b]
        else:
            # h^*: D(f) -> D(f h)
            table, src = pre, value[a]
        if (a, b) in table:
            rd.fail(f"duplicate {key} entry", toks[1])
        table[(a, b)] = wrap(parse_matrix, toks[3], value[ab].rank, src.rank)
    return Coefficients(kind, {"value": value, "post": post, "pre": pre})


def _parse_track(rd, ws: Workspace, lines):
    K = ws.category
    e0, rest = _parse_category(rd, lines, _TRACK_KEYS, f"{ws.name} E0")
    if set(e0.objects) != set(K.objects):
        rd.fail("track objects must be the objects of the category", lines[0][0])
    project = {}
    cells, cell_ids = [], {}
    for toks in rest:
        key = toks[0].text
        _expect(rd, toks, _TRACK_KEYS[key])
        if key == "project":
            f, phi = _morph(rd, e0, toks[1]), _morph(rd, K, toks[2])
            if f in project:
                rd.fail(f"duplicate projection of {toks[1].text!r}", toks[1])
            project[f] = phi
        elif key == "cell":
            nm = toks[1].text
            if nm in cell_ids:
                rd.fail(f"duplicate cell {nm!r}", toks[1])
            s, t = _morph(rd, e0, toks[2]), _morph(rd, e0, toks[3])
            if (e0.src(s), e0.tgt(s)) != (e0.src(t), e0.tgt(t)):
                rd.fail(f"cell {nm!r} joins non-parallel 1-cells", toks[2])
            cell_ids[nm] = len(cells)
            cells.append((nm, s, t))
    for f in range(len(e0)):
        if f not in project:
            rd.fail(f"1-cell {e0.mname(f)!r} has no projection", lines[0][0])

    def cell(tok):
        if tok.text not in cell_ids:
            rd.fail(f"unknown cell {tok.text!r}", tok)
        return cell_ids[tok.text]

    ident, vcomp, post, pre, lin = {}, {}, {}, {}, {}
    tables = {"vcomp": vcomp, "post": post, "pre": pre}
    for toks in rest:
        key = toks[0].text
        if key == "idcell":
            f = _morph(rd, e0, toks[1])
            if f in ident:
                rd.fail(f"duplicate identity cell for {toks[1].text!r}", toks[1])
            ident[f] = cell(toks[2])
        elif key in tables:
            if key == "vcomp":
                k = (cell(toks[1]), cell(toks[2]))
            elif key == "post":
                k = (_morph(rd, e0, toks[1]), cell(toks[2]))
            else:
                k = (cell(toks[1]), _morph(rd, e0, toks[2]))
            if k in tables[key]:
                rd.fail(f"duplicate {key} entry", toks[1])
            tables[key][k] = cell(toks[3])
        elif key == "lin":
            h = cell(toks[1])
            _, s, t = cells[h]
            if s != t:
                rd.fail(f"lin given for {toks[1].text!r}, which is not an automorphism",
                        toks[1])
            if h in lin:
                rd.fail(f"duplicate lin for {toks[1].text!r}", toks[1])
            lin[h] = None, toks[2]
    for f in range(len(e0)):
        if f not in ident:
            rd.fail(f"1-cell {e0.mname(f)!r} has no identity cell", lines[0][0])
    c = ws.coefficients
    for h, (_, tok) in list(lin.items()):
        phi = project[cells[h][1]]
        rank = _value_rank(K, c, phi)
        lin[h] = parse_vector(tok, rank) if rank is not None else ()
    ws.track = TableTrackCategory(e0, cells, ident, vcomp, post, pre, name=ws.name)
    ws.project = project
    ws.lin = lin


def _value_rank(K, c: Coefficients, phi):
    d = c.data
    if c.kind == "constant":
        return d["group"].rank
    if c.kind == "group-module":
        return d["module"].rank
    if c.kind == "bimodule":
        return d["groups"][(K.src(phi), K.tgt(phi))].rank
    return d["value"][phi].rank


# ------------------------------------------------------------- writer

def format_group(g: FpAbGroup) -> str:
    """Inverse of :func:`parse_group` (presentations round-trip exactly)."""
    if g.rank == 0:
        return "0"
    rel = g.relations
    if rel.shape[1] == 0:
        return "Z" if g.rank == 1 else f"Z^{g.rank}"
    if g.rank == 1 and rel.shape[1] == 1 and rel[0, 0] > 0:
        return f"Z/{rel[0, 0]}"
    vecs = " ".join("[" + ",".join(str(int(x)) for x in rel[:, j]) + "]"
                    for j in range(rel.shape[1]))
    return f"<{g.rank} | {vecs}>".replace(" | ", "|").replace("] [", "][")


def format_matrix(m) -> str:
    m = np.asarray(m, dtype=object)
    if m.size == 0:
        return "[]"
    return "[" + ",".join("[" + ",".join(str(int(x)) for x in row) + "]" for row in m) + "]"


def format_category(cat: FiniteCategory, indent="  ") -> list[str]:
    lines = [f"{indent}object {o}" for o in cat.objects]
    for m in cat.morphisms:
        lines.append(f"{indent}morphism {m.name} {m.src} {m.tgt}")
    for o in cat.objects:
        lines.append(f"{indent}identity {o} {cat.mname(cat.identity(o))}")
    nm = cat.mname
    for (g, f), h in sorted(cat.compose_table.items()):
        lines.append(f"{indent}compose {nm(g)} {nm(f)} {nm(h)}")
    return lines


def dumps(ws: Workspace) -> str:
    out = [f"name {ws.name}"]
    if ws.description:
        out.append(f"description {ws.description}")
    cat = ws.category
    nm = cat.mname
    out += ["", "category"] + format_category(cat) + ["end"]
    c = ws.coefficients
    if c is not None:
        d = c.data
        out += ["", f"coefficients {c.kind}"]
        if c.kind == "constant":
            out.append(f"  group {format_group(d['group'])}")
        elif c.kind == "group-module":
            out.append(f"  module {format_group(d['module'])}")
            for g, m in sorted(d["action"].items()):
                out.append(f"  action {nm(g)} {format_matrix(m)}")
        elif c.kind == "bimodule":
            for (x, y), g in d["groups"].items():
                out.append(f"  group {x} {y} {format_group(g)}")
            for (g, x), m in sorted(d["covariant"].items()):
                out.append(f"  covariant {nm(g)} {x} {format_matrix(m)}")
            for (h, y), m in sorted(d["contravariant"].items()):
                out.append(f"  contravariant {nm(h)} {y} {format_matrix(m)}")
        else:
            for f, g in sorted(d["value"].items()):
                out.append(f"  value {nm(f)} {format_group(g)}")
            for (g, f), m in sorted(d["post"].items()):
                out.append(f"  post {nm(g)} {nm(f)} {format_matrix(m)}")
            for (f, h), m in sorted(d["pre"].items()):
                out.append(f"  pre {nm(f)} {nm(h)} {format_matrix(m)}")
        out.append("end")
    tc = ws.track
    if tc is not None:
        e0 = tc.base
        en = e0.mname
        cn = tc.name2
        out += ["", "track"] + format_category(e0)
        for f in range(len(e0)):
            out.append(f"  project {en(f)} {nm(ws.project[f])}")
        for c_ in tc.cell_list:
            out.append(f"  cell {c_.name} {en(c_.source)} {en(c_.target)}")
        for f, h in sorted(tc.identity_cells.items()):
            out.append(f"  idcell {en(f)} {cn(h)}")
        for (k, h), r in sorted(tc.vcomp_table.items()):
            out.append(f"  vcomp {cn(k)} {cn(h)} {cn(r)}")
        for (k, h), r in sorted(tc.post_table.items()):
            out.append(f"  post {en(k)} {cn(h)} {cn(r)}")
        for (h, k), r in sorted(tc.pre_table.items()):
            out.append(f"  pre {cn(h)} {en(k)} {cn(r)}")
        for h, v in sorted(ws.lin.items()):
            out.append(f"  lin {cn(h)} [{','.join(map(str, v))}]")
        out.append("end")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------- choices

def parse_choices(text: str, ext: TrackExtension, path: str = "") -> Choices:
    """Explicit section and tracks for the obstruction computation.

    Lines ``section PHI F`` pick the 1-cell F over the morphism PHI of K and
    ``track PHI PSI H`` the 2-cell H: s(PHI)∘s(PSI) => s(PHI∘PSI). Identities
    and pairs involving an identity are filled in and may be omitted.
    """
    rd = _Reader(text, path)
    K, tc = ext.quotient, ext.track
    e0 = tc.base
    names = {tc.name2(h): h for h in tc.all_cells()}
    section, picked = {}, {}
    while (toks := rd.next()) is not None:
        key = toks[0].text
        if key == "section":
            _expect(rd, toks, 2)
            phi, f = _morph(rd, K, toks[1]), _morph(rd, e0, toks[2])
            if ext.project(f) != phi:
                rd.fail(f"{toks[2].text} does not lie over {toks[1].text}", toks[2])
            section[phi] = f
        elif key == "track":
            _expect(rd, toks, 3)
            phi, psi = _morph(rd, K, toks[1]), _morph(rd, K, toks[2])
            if toks[3].text not in names:
                rd.fail(f"unknown cell {toks[3].text!r}", toks[3])
            picked[(phi, psi)] = (names[toks[3].text], toks[3])
        else:
            rd.fail(f"unknown key {key!r}", toks[0])
    for phi in range(len(K)):
        if K.is_identity(phi):
            section.setdefault(phi, tc.identity1(K.src(phi)))
        elif phi not in section:
            raise ParseError(f"no section for {K.mname(phi)!r}", 0, 0, path)
    tracks = {}
    for phi in range(len(K)):
        for psi in range(len(K)):
            if K.src(phi) != K.tgt(psi):
                continue
            s = tc.compose1(section[phi], section[psi])
            t = section[K.compose(phi, psi)]
            if (phi, psi) in picked:
                h, tok = picked[(phi, psi)]
                if (tc.source(h), tc.target(h)) != (s, t):
                    rd.fail(f"cell {tok.text} is not a track "
                            f"{tc.name1(s)} => {tc.name1(t)}", tok)
                tracks[(phi, psi)] = h
            elif K.is_identity(phi) or K.is_identity(psi):
                tracks[(phi, psi)] = tc.identity_cell(s)
            else:
                raise ParseError(f"no track for ({K.mname(phi)}, {K.mname(psi)})",
                                 0, 0, path)
    return Choices(section, tracks)
