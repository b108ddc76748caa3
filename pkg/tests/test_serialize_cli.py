import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DOCUMENTS
from wfilt.cli import parse_report, run
from wfilt.golden import BUILDERS, build_all
from wfilt.linalg import QQ, ZZ, Matrix
from wfilt.serialize import (
    DocumentError,
    dumps,
    load,
    loads,
    matrix_in,
    matrix_out,
    scalar_in,
    scalar_out,
)


def _path(name):
    return str(DOCUMENTS / f"{name}.json")


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_shipped_documents_are_canonical(name):
    text = (DOCUMENTS / f"{name}.json").read_text(encoding="utf-8")
    assert dumps(build_all()[name]) == text
    assert dumps(loads(text)) == text


@settings(max_examples=200, deadline=None)
@given(st.integers(-(10**40), 10**40), st.integers(1, 10**30))
def test_rational_scalars_round_trip(num, den):
    from gmpy2 import mpq

    x = QQ(mpq(num, den))
    out = scalar_out(x, QQ)
    assert scalar_in(json.loads(json.dumps(out)), QQ, "x") == x


def test_large_integers_are_strings():
    big = 2 ** 70
    assert scalar_out(big, ZZ) == str(big)
    assert scalar_out(-(2 ** 63), ZZ) == -(2 ** 63)
    assert scalar_out(2 ** 63, ZZ) == str(2 ** 63)
    assert scalar_in(str(big), ZZ, "x") == big
    M = Matrix.from_rows(ZZ, [[big, 1]], 2)
    assert matrix_in(matrix_out(M), ZZ, "m") == M


def test_rational_entry_rejected_over_integers():
    with pytest.raises(DocumentError, match="rational"):
        scalar_in([1, 2], ZZ, "x")
    with pytest.raises(DocumentError, match="denominator"):
        scalar_in([1, 0], QQ, "x")
    with pytest.raises(DocumentError, match="boolean"):
        scalar_in(True, ZZ, "x")


@pytest.mark.parametrize("patch,needle", [
    ({"schema": 2}, "schema"),
    ({"kind": "sheaf"}, "kind"),
    ({"ring": "R"}, "ring"),
    ({"payload": []}, "payload"),
])
def test_invalid_headers(patch, needle):
    obj = json.loads(dumps(BUILDERS["empty"]()))
    obj.update(patch)
    with pytest.raises(DocumentError, match=needle):
        loads(json.dumps(obj))


def test_real_mode_needs_f2():
    obj = json.loads(dumps(BUILDERS["real_cylinder"]()))
    obj["ring"] = "Q"
    with pytest.raises(DocumentError, match="Z/2"):
        loads(json.dumps(obj))


def test_invariant_violation_is_named():
    obj = json.loads(dumps(BUILDERS["torus_canonical"]()))
    d = obj["payload"]["complex"]["differentials"]
    d[0]["entries"] = [[1], [0], [0]]
    with pytest.raises(DocumentError, match="payload"):
        loads(json.dumps(obj))


# command line

def test_weight_on_p1xp1_reports_pure_weight_two():
    code, out, _ = run(["weight", _path("cstar_cstar_p1xp1")])
    assert code == 0
    assert "H^1: Gr_2 = Q^2" in out
    code, out, _ = run(["weight", _path("cstar_cstar_p1xp1"), "--format", "machine"])
    report = json.loads(out)
    h1 = next(f for f in report["result"]["filtrations"] if f["n"] == 1)
    assert [(g["index"], g["free_rank"]) for g in h1["graded"]] == [(2, 2)]


def test_decalage_on_zero_complex():
    assert run(["verify", _path("empty"), "--check", "decalage"])[0] == 0


def test_singularity_on_nodal_torus():
    code, out, _ = run(["singularity", _path("nodal_punctured_torus"), "--format", "machine"])
    assert code == 0
    h1 = next(f for f in json.loads(out)["result"]["filtrations"] if f["n"] == 1)
    assert [(g["index"], g["free_rank"]) for g in h1["graded"]] == [(0, 1), (1, 3)]


@pytest.mark.parametrize("name", sorted(BUILDERS))
def test_every_document_reports_cleanly(name):
    code, out, err = run(["report", _path(name), "--format", "machine"])
    assert (code, err) == (0, "")
    verdicts = parse_report(out)
    assert all(verdicts.values())
    assert verdicts == {v["name"]: v["passed"] for v in json.loads(out)["verdicts"]}


@pytest.mark.parametrize("argv", [
    ["verify", "blowup_p2_point", "--check", "mv"],
    ["verify", "blowup_interior_square", "--check", "gysin-acyclic"],
    ["verify", "cube_sample", "--check", "simple-exchange"],
    ["verify", "cube_sample", "--check", "decalage"],
    ["verify", "torus_canonical", "--check", "decalage"],
    ["verify", "nodal_sphere", "--check", "e2-independence"],
    ["pages", "torus_canonical", "--r", "0:3"],
    ["pages", "cube_sample", "--r", "2"],
    ["weight", "nodal_sphere"],
    ["weight", "node_times_cstar_weight"],
    ["singularity", "cstar_cstar_bundle"],
])
def test_subcommands_succeed(argv):
    argv = [argv[0], _path(argv[1])] + argv[2:]
    code, out, err = run(argv)
    assert code == 0, out + err
    assert out.strip()


def test_e2_independence_against_second_resolution():
    code, _, _ = run(["verify", _path("nodal_punctured_torus"), "--check", "e2-independence",
                      "--against", _path("nodal_punctured_torus_blown_up")])
    assert code == 0
    code, out, _ = run(["verify", _path("nodal_sphere"), "--check", "e2-independence",
                        "--against", _path("two_sphere_cycle")])
    assert code == 1 and "FAIL" in out


def test_wrong_expectation_exits_one(tmp_path):
    obj = json.loads(dumps(BUILDERS["cstar_cstar_p1xp1"]()))
    obj["options"]["expected_H"]["1"] = 3
    path = tmp_path / "wrong.json"
    path.write_text(json.dumps(obj))
    code, out, _ = run(["weight", str(path), "--format", "machine"])
    assert code == 1
    assert parse_report(out)["expected_totals"] is False


def test_usage_and_parse_errors_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["report", str(bad)])[0] == 2
    assert run(["report", str(tmp_path / "missing.json")])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run(["verify", _path("empty"), "--check", "mv"])[0] == 2
    code, _, err = run(["pages", _path("empty"), "--r", "x"])
    assert code == 2 and err.startswith("error:")


def test_loaded_documents_match_builders():
    for name, doc in build_all().items():
        loaded = load(_path(name))
        assert (loaded.kind, loaded.name, str(loaded.ring)) == (doc.kind, name, str(doc.ring))
