import io

import pytest

from catcoh.cli import main
from catcoh.corpus import DATA_DIR, corpus_files

CORPUS_NAMES = [p.stem for p in corpus_files()]
EXT_NAMES = [n for n in CORPUS_NAMES if n.endswith("_ext")]


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def planted_interchange(tmp_path):
    text = (DATA_DIR / "z2_nontrivial_ext.cat").read_text(encoding="utf-8")
    assert "  post 1 0:01 1:10\n" in text
    path = tmp_path / "bad.cat"
    path.write_text(text.replace("  post 1 0:01 1:10\n", "  post 1 0:01 1:01\n"),
                    encoding="utf-8")
    return path


# --------------------------------------------------------------- validate

def test_validate_bundled_ok():
    code, out = run("validate", "z2_trivial")
    assert code == 0 and out == "z2_trivial: category, group-module coefficients: ok\n"


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_every_corpus_file_validates(name):
    code, out = run("validate", str(DATA_DIR / f"{name}.cat"))
    assert code == 0 and out.endswith(": ok\n")


def test_validate_dangling_id(tmp_path, capsys):
    text = (DATA_DIR / "z2_trivial.cat").read_text(encoding="utf-8")
    path = tmp_path / "dangling.cat"
    path.write_text(text.replace("compose g g e", "compose g zz e"), encoding="utf-8")
    code, _ = run("validate", str(path))
    assert code == 2
    err = capsys.readouterr().err
    assert "'zz'" in err and "dangling.cat:" in err


def test_validate_planted_interchange(tmp_path):
    code, out = run("validate", str(planted_interchange(tmp_path)))
    assert code == 1
    assert any(line.startswith("track: ") and "interchange" in line
               for line in out.splitlines())


def test_missing_file(capsys):
    assert run("validate", "no_such_file.cat")[0] == 2
    assert "no such file" in capsys.readouterr().err


# --------------------------------------------------------------- cohomology

def test_cohomology_examples():
    assert run("cohomology", "z2_trivial", "--complex", "simplicial", "--degree", "3") == \
        (0, "H^3 = Z/2\n")
    assert run("cohomology", "interval_constZ", "--degree", "0") == (0, "H^0 = Z\n")
    assert run("cohomology", "z3_trivial", "--complex", "cubical", "--degree", "2") == \
        (0, "H^2 = Z/3\n")
    assert run("cohomology", "z3_trivial", "--degree", "3") == (0, "H^3 = Z/3\n")


def test_cohomology_ranges_and_records():
    code, out = run("cohomology", "z2_constZ", "--degree", "0-3", "--format", "records")
    assert code == 0 and out == "0 1 []\n1 0 []\n2 0 [2]\n3 0 []\n"
    code, out = run("cohomology", "klein_trivial", "--degree", "2")
    assert out == "H^2 = Z/2 (+) Z/2 (+) Z/2\n"
    assert run("cohomology", "z2_trivial", "--degree", "2", "--unnormalized") == \
        (0, "H^2 = Z/2\n")


@pytest.mark.parametrize("degree", ["x", "3-1", "-1"])
def test_cohomology_bad_degree(degree):
    assert run("cohomology", "z2_trivial", f"--degree={degree}")[0] == 2


def test_cohomology_budget(capsys):
    code, _ = run("cohomology", "z3_trivial", "--degree", "9", "--budget", "10")
    assert code == 3
    assert "256 cells" in capsys.readouterr().err


# --------------------------------------------------------------- compare

def verdicts(out):
    rows = out.splitlines()[1:-1]
    return [r.split("  ")[-1].strip() for r in rows]


@pytest.mark.parametrize("name", ["z2_trivial", "z3_trivial"])
def test_compare_all_match(name):
    code, out = run("compare", name, "--max-degree", "4")
    assert code == 0
    assert verdicts(out) == ["boundary (not asserted)"] + ["MATCH"] * 3
    assert out.splitlines()[-1].endswith("n = 1..4: MATCH")


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_compare_matrix_correspondence_on_corpus(name):
    code, out = run("compare", name, "--max-degree", "3")
    assert code == 0 and out.splitlines()[-1].endswith(": MATCH")


# --------------------------------------------------------------- obstruction

def class_line(out):
    return [line for line in out.splitlines() if line.startswith("class = ")]


def test_obstruction_split_vanishes():
    code, out = run("obstruction", "z2_split_ext")
    assert code == 0 and class_line(out) == ["class = 0 (vanishing)"]
    assert "vanishing: yes" in out.splitlines()


def test_obstruction_nontrivial_generator():
    code, out = run("obstruction", "z2_nontrivial_ext")
    assert code == 0 and class_line(out) == ["class = generator of Z/2"]
    assert "  (g, g, g) -> [1]" in out.splitlines()


@pytest.mark.parametrize("name", EXT_NAMES)
def test_obstruction_seeds_agree(name):
    lines = {tuple(class_line(run("obstruction", name, "--choices", str(s))[1]))
             for s in (1, 2, 3, 17)}
    assert len(lines) == 1 and len(next(iter(lines))) == 1


def test_obstruction_choices_file(tmp_path):
    path = tmp_path / "ch.txt"
    path.write_text("section g 1\ntrack g g 2:01\n", encoding="utf-8")
    code, out = run("obstruction", "z2_nontrivial_ext", "--choices", str(path))
    assert code == 0 and class_line(out) == ["class = generator of Z/2"]
    assert "  s(g) = 1" in out.splitlines()
    path.write_text("section g 2\n", encoding="utf-8")
    assert run("obstruction", "z2_nontrivial_ext", "--choices", str(path))[0] == 2


def test_obstruction_needs_track_block():
    assert run("obstruction", "z2_trivial")[0] == 2


def test_obstruction_rejects_unlawful_track(tmp_path):
    code, out = run("obstruction", str(planted_interchange(tmp_path)))
    assert code == 1 and "interchange" in out


# --------------------------------------------------------------- triangulate

def test_triangulate_check_lines():
    for n, line in [(1, "1 top simplex (1! = 1), iso: true"),
                    (2, "2 top simplices (2! = 2), iso: true"),
                    (3, "6 top simplices (3! = 6), iso: true")]:
        code, out = run("triangulate", "--n", str(n), "--check")
        assert code == 0 and out.splitlines()[-1] == line


def test_triangulate_dump_and_range():
    code, out = run("triangulate", "--n", "2")
    assert code == 0 and out.splitlines()[:2] == ["# triangulated 2-cube", "# f-vector 4 5 2"]
    assert "simplex 2 0 1 3 (((f))((g)(h)))" in out.splitlines()
    code, out = run("triangulate", "--n", "2", "--model", "flag")
    assert code == 0 and out.startswith("# flag complex for 3 letters")
    assert run("triangulate", "--n", "0")[0] == 2
    assert run("triangulate", "--n", "7")[0] == 2


# --------------------------------------------------------------- oracle

def test_oracle_examples():
    assert run("oracle", "z2_trivial", "--degree", "2") == (0, "H^2 = Z/2\n")
    assert run("oracle", "z3_trivial", "--degree", "0") == (0, "H^0 = Z/3\n")
    assert run("oracle", "z2_signZ", "--degree", "1") == (0, "H^1 = Z/2\n")


def test_oracle_refuses_multi_object(capsys):
    assert run("oracle", "square_constZ", "--degree", "1")[0] == 2
    assert "one-object" in capsys.readouterr().err


def test_corpus_listing():
    code, out = run("corpus")
    assert code == 0 and out.split() == [p.name for p in corpus_files()]
