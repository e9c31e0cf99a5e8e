import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ainfss import document as doc
from ainfss.cli import main, selftest_report
from ainfss.corpus import random_algebra, random_deformation, random_filtered
from ainfss.fixtures import f1, f2, f3
from ainfss.linalg import Field

GF101 = Field.prime(101)
QQ = Field.rationals()

CANONICAL = ["f1.json", "f2.json", "f3.json", "f2_filtered.json", "assoc.json", "corrupted.json"]


@pytest.mark.parametrize("name", CANONICAL)
def test_fixture_files_are_canonical(fixtures_dir, name):
    text = (fixtures_dir / name).read_text(encoding="utf-8")
    assert doc.serialize(doc.parse(text)) == text


def test_fixture_files_match_builders(fixtures_dir):
    assert doc.load(str(fixtures_dir / "f1.json")) == f1()
    assert doc.load(str(fixtures_dir / "f2.json")) == f2()
    assert doc.load(str(fixtures_dir / "f3.json")).same_structure(f3())


def test_corpus_round_trip(corpus):
    for X in corpus.algebras[:50] + corpus.deformations[:30] + corpus.filtered[:30]:
        text = doc.serialize(X)
        back = doc.parse(text)
        assert back == X or back.same_structure(X)
        assert doc.serialize(back) == text


@settings(max_examples=40)
@given(seed=st.integers(0, 10**9), kind=st.sampled_from(["algebra", "deformation", "filtered"]),
       rational=st.booleans())
def test_round_trip_property(seed, kind, rational):
    rng = random.Random(seed)
    F = QQ if rational else GF101
    X = {"algebra": lambda: random_algebra(rng, F, s=rng.randint(0, 2)),
         "deformation": lambda: random_deformation(rng, F),
         "filtered": lambda: random_filtered(rng, F)}[kind]()
    text = doc.serialize(X)
    assert doc.serialize(doc.parse(text)) == text
    assert json.loads(text)["kind"] == kind


@pytest.mark.parametrize("name,law", [
    ("undeclared.json", "names"),
    ("nonreduced.json", "coefficient"),
    ("unknown_field.json", "schema"),
    ("bad_bidegree.json", "bidegree"),
])
def test_validation_errors_name_the_law(fixtures_dir, name, law):
    with pytest.raises(doc.ValidationError) as info:
        doc.load(str(fixtures_dir / name))
    assert info.value.law == law


def test_parse_error_has_location(fixtures_dir):
    with pytest.raises(doc.ParseError, match=r"line \d+, column \d+"):
        doc.load(str(fixtures_dir / "malformed.json"))


def mutate(text: str, **changes) -> str:
    d = json.loads(text)
    d.update(changes)
    return json.dumps(d)


def test_schema_violations():
    base = doc.serialize(f1())
    cases = [
        mutate(base, extra=1),
        mutate(base, format="other/2"),
        mutate(base, kind="coalgebra"),
        mutate(base, s_type=-1),
        mutate(base, basis=[["x", 0]]),
        mutate(base, unit="nope"),
        mutate(base, maps=[{"arity": 1, "order": 1, "inputs": ["x"], "output": [["y", "0"]]}]),
        mutate(base, maps=[{"arity": 2, "order": 0, "inputs": ["x"], "output": []}]),
        mutate(base, basis=[["x", 0, 0], ["x", 1, 0]]),
        mutate(base, field="GF(6)"),
    ]
    laws = []
    for text in cases:
        with pytest.raises(doc.ValidationError) as info:
            doc.parse(text)
        laws.append(info.value.law)
    assert laws == ["schema", "schema", "schema", "schema", "schema", "names", "coefficient", "schema", "names", "field"]


def test_filtered_order_must_match_shift():
    text = doc.serialize(doc.parse(doc.serialize(f1())))
    d = json.loads(text)
    d["kind"] = "filtered"
    d["maps"][0]["order"] = 0
    with pytest.raises(doc.ValidationError) as info:
        doc.parse(json.dumps(d))
    assert info.value.law == "filtration"


def test_coefficient_formats():
    d = json.loads(doc.serialize(f1(QQ)))
    d["maps"][0]["output"] = [["y", "-3/4"]]
    X = doc.parse(json.dumps(d))
    assert '["y", "-3/4"]' in doc.serialize(X)
    d = json.loads(doc.serialize(f1()))
    d["maps"][0]["output"] = [["y", "101"]]
    with pytest.raises(doc.ValidationError):
        doc.parse(json.dumps(d))


# --- command line ------------------------------------------------------------------------


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_exit_codes(capsys, fixtures_dir):
    for name in ("f1.json", "f2.json", "f3.json", "f2_filtered.json", "assoc.json"):
        assert run(capsys, "check", fixtures_dir / name)[0] == 0
    code, out, _ = run(capsys, "check", fixtures_dir / "corrupted.json")
    assert code == 1 and "SI(3) n=3 j=0 (x,y,x)" in out


@pytest.mark.parametrize("name", ["undeclared.json", "nonreduced.json", "unknown_field.json",
                                  "bad_bidegree.json", "malformed.json", "missing.json"])
def test_input_errors_exit_2(capsys, fixtures_dir, name):
    for cmd in ("check", "cohomology", "transfer", "pages", "einf"):
        code, _, err = run(capsys, cmd, fixtures_dir / name)
        assert code == 2 and err.startswith("error:")


def test_usage_errors_exit_2(capsys, fixtures_dir):
    assert run(capsys)[0] == 2
    assert run(capsys, "pages", fixtures_dir / "f1.json", "--route", "sideways")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_type_one_input_without_filtration(capsys, fixtures_dir, tmp_path):
    # a plain algebra of type 1 has no filtration route
    X = random_algebra(random.Random(1), GF101, s=1)
    path = tmp_path / "type1.json"
    doc.save(X, str(path))
    assert run(capsys, "pages", path, "--route", "filtration")[0] == 2
    code, out, _ = run(capsys, "einf", path)
    assert code == 0 and "skipped" in out


def test_cohomology_and_transfer(capsys, fixtures_dir, tmp_path):
    code, out, _ = run(capsys, "cohomology", fixtures_dir / "f3.json")
    assert code == 0 and "h3_-1_0" in out
    target = tmp_path / "model.json"
    code, _, _ = run(capsys, "transfer", fixtures_dir / "f3.json", "--out", target)
    assert code == 0
    model = doc.load(str(target))
    assert model.space.dim == 4 and 3 in model.arities()
    code, out, err = run(capsys, "transfer", fixtures_dir / "f1.json")
    assert code == 0 and doc.parse(out).space.dim == 2 and err


def test_pages_compare_round_trip(capsys, fixtures_dir, tmp_path):
    a, b, c = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    assert run(capsys, "pages", fixtures_dir / "f2.json", "--route", "filtration", "--r-max", 4, "--out", a)[0] == 0
    assert run(capsys, "pages", fixtures_dir / "f2.json", "--route", "d-iter", "--r-max", 4, "--out", b)[0] == 0
    assert run(capsys, "pages", fixtures_dir / "f2.json", "--route", "enhance", "--r-max", 4, "--out", c)[0] == 0
    assert run(capsys, "compare", a, b)[0] == 0
    assert run(capsys, "compare", a, c, "--r-max", 4)[0] == 0
    assert run(capsys, "compare", a, fixtures_dir / "f2.json")[0] == 0
    code, out, _ = run(capsys, "compare", a, fixtures_dir / "f1.json")
    assert code == 1 and "dims" in out
    P = doc.parse_page_report(a.read_text())
    assert P.start == 1 and [pg.r for pg in P.pages] == [1, 2, 3, 4]
    assert P.pages[1].d_ranks == {(0, 0): 1}


def test_malformed_page_report_exits_2(capsys, fixtures_dir, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": doc.PAGES_FORMAT, "route": "x", "start": 1, "pages": [{"r": 1}],
                               "checks": "ok"}))
    assert run(capsys, "compare", bad, fixtures_dir / "f1.json")[0] == 2


def test_einf(capsys, fixtures_dir):
    code, out, _ = run(capsys, "einf", fixtures_dir / "f2.json")
    assert code == 0 and "E_inf" in out


def test_output_is_deterministic(capsys, fixtures_dir):
    first = run(capsys, "pages", fixtures_dir / "f3.json", "--route", "enhance")
    second = run(capsys, "pages", fixtures_dir / "f3.json", "--route", "enhance")
    assert first == second


def test_selftest_report_is_seeded(monkeypatch):
    lines_a, ok_a = selftest_report(5)
    lines_b, ok_b = selftest_report(5)
    assert ok_a and ok_b and lines_a == lines_b
    lines_c, _ = selftest_report(6)
    assert lines_c != lines_a
