import json
import os
import shutil
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from artifact.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from artifact.io import (ENV_VAR, CorpusError, corpus_dir, dumps, list_corpus, load_entry, map_from_json,
                         map_to_json, parse_entry, plain, resolve_entry, space_from_json, space_to_json)
from artifact.simplicial import circle_1, from_facets, product, projections, rp2

CORPUS = Path(corpus_dir())


def same_space(X, Y):
    return X.nd == Y.nd and X.faces == Y.faces


def test_corpus_loads():
    entries = {e.path.stem: e for e in list_corpus()}
    assert {"point", "rp2", "torus", "hopf", "hopf-model", "kz2-path"} <= set(entries)
    for e in entries.values():
        if e.kind == "space":
            X = e.load()
            assert X.identity_violation() is None


@pytest.mark.parametrize("X", [rp2(), circle_1()], ids=lambda X: X.name)
def test_space_round_trip(X):
    Y = space_from_json(json.loads(json.dumps(space_to_json(X))))
    assert [len(v) for v in Y.nd.values()] == [len(v) for v in X.nd.values()]
    assert space_to_json(Y) == space_to_json(X)


@given(st.lists(st.lists(st.integers(0, 5), min_size=1, max_size=3, unique=True), min_size=1, max_size=5))
def test_space_round_trip_random(facets):
    X = from_facets(facets)
    data = json.loads(json.dumps(space_to_json(X)))
    assert space_to_json(space_from_json(data)) == data


def test_map_round_trip():
    P = product(circle_1(), circle_1())
    p1, _ = projections(P, circle_1(), circle_1())
    f = map_from_json(json.loads(json.dumps(map_to_json(p1))))
    assert f.check(2) is None
    assert map_to_json(f) == map_to_json(p1)


def test_bad_map_rejected():
    data = map_to_json(projections(product(circle_1(), circle_1()), circle_1(), circle_1())[0])
    key = next(k for k, v in data["images"].items() if v[1] == "e")
    data["images"][key] = [[0], "v"]   # send an edge to a degenerate vertex where it should not go
    with pytest.raises(CorpusError):
        map_from_json(data)


def test_malformed_inputs(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"kind": "space",\n "dims": [}')
    with pytest.raises(CorpusError, match=r"bad\.json:2:"):
        load_entry(p)
    with pytest.raises(CorpusError):
        parse_entry({"kind": "banana"})
    with pytest.raises(CorpusError):
        parse_entry({"schema": 99})
    with pytest.raises(CorpusError):
        space_from_json({"dims": {"0": ["a"], "1": ["e"]}, "faces": {"e": [[[], "a"], [[], "zz"]]}})
    with pytest.raises(CorpusError):
        resolve_entry("no-such-entry")


def test_plain_and_dumps_are_stable():
    from fractions import Fraction
    assert plain({1: Fraction(1, 2), "a": [Fraction(4, 2)]}) == {"1": "1/2", "a": [2]}
    assert dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}'


# ---------------------------------------------------------------- CLI

def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_cohomology(capsys):
    code, out, _ = run(capsys, "cohomology", "rp2", "--field", "F2", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["betti"] == [1, 1, 1]
    code, out, _ = run(capsys, "cohomology", "delta3-boundary")
    assert code == EXIT_OK and "dim H" in out


def test_cli_steenrod(capsys):
    code, out, _ = run(capsys, "steenrod", "rp2", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["matrices"]["Sq1 H1"] == [[1]]
    code, _, err = run(capsys, "steenrod", "rp2", "--field", "3")
    assert code == EXIT_INPUT and "experimental" in err
    code, out, _ = run(capsys, "steenrod", "rp2", "--field", "3", "--experimental", "--json")
    assert code == EXIT_OK and json.loads(out)["experimental"]


def test_cli_forms_interval(capsys):
    code, out, _ = run(capsys, "forms", "delta1", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["coordinate_forms"] == {"t1": {"(1,)": 1}, "dt1": {"(0,1)": 1}}


def test_cli_serre_and_sullivan(capsys):
    code, out, _ = run(capsys, "serre", "hopf", "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["pages"]["inf"] == {"0,0": 1, "2,1": 1}
    assert data["transgressions"][0]["d"] == [1]
    code, out, _ = run(capsys, "sullivan", "hopf-model")
    assert code == EXIT_OK and "comparison: pass" in out


def test_cli_input_errors(capsys):
    assert run(capsys, "cohomology", "nowhere")[0] == EXIT_INPUT
    assert run(capsys, "cohomology", "rp2", "--field", "4")[0] == EXIT_INPUT
    assert run(capsys, "serre", "rp2")[0] == EXIT_INPUT           # not a fibration
    assert run(capsys, "forms", "circle", "--field", "2")[0] == EXIT_INPUT
    assert run(capsys, "serre", "hopf", "--window", "1", "--kudo", "1:1")[0] == EXIT_INPUT
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


@pytest.fixture
def private_corpus(tmp_path, monkeypatch):
    d = tmp_path / "corpus"
    shutil.copytree(CORPUS, d)
    monkeypatch.setenv(ENV_VAR, str(d))
    return d


def test_env_corpus_and_failure_exit(private_corpus, capsys):
    wrong = json.loads((private_corpus / "hopf-model.json").read_text())
    wrong["name"] = "untwisted"
    wrong["extension"]["d"] = {}
    (private_corpus / "untwisted.json").write_text(json.dumps(wrong))
    code, out, _ = run(capsys, "sullivan", "untwisted")
    assert code == EXIT_FAIL and "comparison: FAIL" in out
    (private_corpus / "rp2.json").unlink()
    assert run(capsys, "cohomology", "rp2")[0] == EXIT_INPUT
    (private_corpus / "mine.json").write_text(json.dumps(space_to_json(circle_1())))
    code, out, _ = run(capsys, "cohomology", "mine", "--json")
    assert code == EXIT_OK and json.loads(out)["betti"] == [1, 1]


def test_json_output_is_byte_identical():
    outs = []
    for seed in ("1", "2"):
        env = {**os.environ, "PYTHONHASHSEED": seed}
        r = subprocess.run([sys.executable, "-m", "artifact.cli", "serre", "hopf", "--json"],
                           capture_output=True, env=env, check=True)
        outs.append(r.stdout)
    assert outs[0] == outs[1]
    r = subprocess.run([sys.executable, "-m", "artifact.cli", "forms", "rp2", "--json", "--poly-cap", "2"],
                       capture_output=True, check=True)
    r2 = subprocess.run([sys.executable, "-m", "artifact.cli", "forms", "rp2", "--json", "--poly-cap", "2"],
                        capture_output=True, env={**os.environ, "PYTHONHASHSEED": "7"}, check=True)
    assert r.stdout == r2.stdout
