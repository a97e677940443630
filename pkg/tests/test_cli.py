import json

import pytest

from dmorse import read_complex, write_facets
from dmorse.cli import main
from dmorse.constructions import build_sigma, simplex_boundary


@pytest.fixture(autouse=True)
def _in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_version_and_usage(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0
    assert out.strip() == "dmorse 0.1.0"
    code, _, _ = run(capsys)
    assert code == 1
    code, _, _ = run(capsys, "build", "klein_bottle")
    assert code == 1


def test_build_writes_and_roundtrips(capsys):
    code, out, _ = run(capsys, "build", "sigma", "--dim", "3")
    assert code == 0
    assert "sigma3.fac" in out and "f=(12," in out
    K = read_complex("sigma3.fac")
    assert K._faces == build_sigma(3)._faces
    header = open("sigma3.fac").readline()
    assert header.startswith("#")


def test_build_argument_validation(capsys):
    assert run(capsys, "build", "sigma")[0] == 1  # needs --dim
    assert run(capsys, "build", "poincare", "--dim", "3")[0] == 1
    code, out, _ = run(capsys, "build", "two_optima", "-o", "t.fac")
    assert code == 0
    assert "f=(106, 596, 1064, 573)" in out


def test_transform_chain(capsys):
    run(capsys, "build", "simplex", "--dim", "3", "-o", "s3.fac")
    code, out, _ = run(capsys, "transform", "s3.fac", "--op", "boundary",
                       "-o", "bd.fac")
    assert code == 0
    assert "f=(4, 6, 4)" in out
    code, out, _ = run(capsys, "transform", "bd.fac", "--op", "link",
                       "--face", "1", "-o", "lk.fac")
    assert code == 0
    assert "f=(3, 3)" in out and "chi=0" in out
    code, out, _ = run(capsys, "transform", "bd.fac", "--op", "star",
                       "--face", "1")
    assert code == 0
    assert "f=(4, 6, 3)" in out
    # default output name is derived from the input
    assert read_complex("bd.star.fac").dim == 2


def test_transform_sd_facet_growth(capsys):
    run(capsys, "build", "two_optima", "-o", "t.fac")
    code, out, _ = run(capsys, "transform", "t.fac", "--op", "sd",
                       "-o", "tsd.fac")
    assert code == 0
    K = read_complex("tsd.fac")
    assert K.f_vector()[-1] == 24 * 573


def test_transform_error_codes(capsys):
    run(capsys, "build", "simplex", "--dim", "3", "-o", "s3.fac")
    run(capsys, "transform", "s3.fac", "--op", "boundary", "-o", "bd.fac")
    # collapsing a sphere edge violates the link condition
    assert run(capsys, "transform", "bd.fac", "--op", "contract",
               "--edge", "1,2")[0] == 3
    # identifying two sphere vertices degenerates a face
    assert run(capsys, "transform", "bd.fac", "--op", "quotient",
               "--map", "4=1")[0] == 3
    # the same moves are legal on the solid simplex
    assert run(capsys, "transform", "s3.fac", "--op", "contract",
               "--edge", "1,2")[0] == 0
    assert run(capsys, "transform", "bd.fac", "--op", "link",
               "--face", "7")[0] == 1
    assert run(capsys, "transform", "bd.fac", "--op", "opsusp")[0] == 1
    assert run(capsys, "transform", "missing.fac", "--op", "sd")[0] == 2


def test_unparseable_input(capsys, tmp_path):
    bad = tmp_path / "bad.fac"
    bad.write_text("1 2 3\n1 2 x\n")
    code, _, err = run(capsys, "verify", str(bad), "--mode", "fvector")
    assert code == 2
    assert "bad.fac:2" in err


def test_spectrum_json_document(capsys):
    run(capsys, "build", "simplex", "--dim", "3", "-o", "s3.fac")
    run(capsys, "transform", "s3.fac", "--op", "boundary", "-o", "bd.fac")
    code, _, _ = run(capsys, "spectrum", "bd.fac", "--runs", "10",
                     "--workers", "1", "-o", "spec.json")
    assert code == 0
    doc = json.loads(open("spec.json").read())
    assert doc["histogram"] == [{"vector": [1, 0, 1], "count": 10}]
    assert doc["mean"] == 2.0
    assert doc["strategy"] == "random"
    assert doc["runs"] == 10
    assert doc["master_seed"] == 0
    assert doc["input"] == "bd.fac"
    assert doc["workers"] == 1
    assert doc["version"] == "0.1.0"


def test_spectrum_csv_and_text(capsys):
    run(capsys, "build", "simplex", "--dim", "3", "-o", "s3.fac")
    run(capsys, "transform", "s3.fac", "--op", "boundary", "-o", "bd.fac")
    code, out, _ = run(capsys, "spectrum", "bd.fac", "--runs", "8",
                       "--workers", "1", "--format", "csv",
                       "--strategy", "random-lex-last", "--seed", "5")
    assert code == 0
    lines = out.splitlines()
    assert "# strategy=random-lex-last" in lines
    assert "# master_seed=5" in lines
    assert "vector,count,share" in lines
    assert "1 0 1,8,1.0" in lines
    code, out, _ = run(capsys, "spectrum", "bd.fac", "--runs", "8",
                       "--workers", "1", "--format", "text")
    assert code == 0
    assert "(1, 0, 1): 8" in out
    assert run(capsys, "spectrum", "bd.fac", "--runs", "0",
               "--workers", "1")[0] == 1


def test_verify_fvector_and_free_faces(capsys):
    run(capsys, "build", "sigma", "--dim", "3", "-o", "sig.fac")
    code, out, _ = run(capsys, "verify", "sig.fac", "--mode", "fvector")
    assert code == 0
    assert "f=(12, 56, 97, 52)" in out and "chi=1" in out
    code, out, _ = run(capsys, "verify", "sig.fac", "--mode", "free-faces")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "1"
    assert lines[1] == "1 2 3 -> 1 2 3 6"
    run(capsys, "build", "E", "--dim", "2", "-o", "e2.fac")
    code, out, _ = run(capsys, "verify", "e2.fac", "--mode", "free-faces")
    assert out.splitlines()[0] == "2"


def test_verify_homology(capsys, rp2):
    run(capsys, "build", "poincare", "-o", "p.fac")
    code, out, _ = run(capsys, "verify", "p.fac", "--mode", "homology")
    assert code == 0
    assert "ranks=(1, 0, 0, 1)" in out
    assert "torsion=((), (), (), ())" in out
    code, out, _ = run(capsys, "verify", "p.fac", "--mode", "homology",
                       "--prime", "2")
    assert "ranks=(1, 0, 0, 1) (mod 2)" in out
    write_facets("rp2.fac", rp2)
    code, out, _ = run(capsys, "verify", "rp2.fac", "--mode", "homology")
    assert "ranks=(1, 0, 0)" in out and "(2,)" in out


def test_verify_size_limit(capsys, monkeypatch):
    run(capsys, "build", "two_optima", "-o", "t.fac")
    assert run(capsys, "verify", "t.fac", "--mode", "homology",
               "--size-limit", "100")[0] == 3
    assert run(capsys, "verify", "t.fac", "--mode", "homology",
               "--size-limit", "100", "--prime", "2")[0] == 0
    monkeypatch.setenv("DMORSE_SIZE_LIMIT", "100")
    assert run(capsys, "verify", "t.fac", "--mode", "homology")[0] == 3


def test_verify_morse_check(capsys):
    run(capsys, "build", "poincare", "-o", "p.fac")
    code, out, _ = run(capsys, "verify", "p.fac", "--mode", "morse-check",
                       "--vector", "1,2,2,1")
    assert code == 0
    assert "consistent" in out
    code, out, _ = run(capsys, "verify", "p.fac", "--mode", "morse-check",
                       "--vector", "1,0,0,0")
    assert code == 3
    assert "violation" in out
    assert run(capsys, "verify", "p.fac", "--mode", "morse-check")[0] == 1


def test_verify_oracle(capsys):
    run(capsys, "build", "dunce_hat", "-o", "d.fac")
    code, out, _ = run(capsys, "verify", "d.fac", "--mode", "oracle",
                       "--question", "collapsible")
    assert code == 0
    assert "collapsible: no" in out
    run(capsys, "build", "sigma", "--dim", "2", "-o", "s.fac")
    code, out, _ = run(capsys, "verify", "s.fac", "--mode", "oracle")
    assert "collapsible: yes" in out
    assert "nonevasive: no" in out


def test_build_pipeline_cli(capsys):
    code, out, err = run(capsys, "build", "pipeline_5manifold",
                         "-o", "c.fac", "--report", "stages.json")
    assert code == 0
    assert "[1/8] poincare-sphere" in err
    assert "stage 8 collar-boundary" in out
    assert "c.fac" in out and "c_boundary.fac" in out
    doc = json.loads(open("stages.json").read())
    assert [s["name"] for s in doc["stages"]][0] == "poincare-sphere"
    assert doc["stages"][6]["f_actual"] == [5013, 72300, 290944, 495912,
                                            383136, 110880]
    K = read_complex("c_boundary.fac")
    assert tuple(K.f_vector()) == (5010, 65520, 212000, 252480, 100992)
