import json

import pytest

from dgmodel import graded
from dgmodel.dgcore import homology, is_acyclic, is_iso
from dgmodel.exactlin import Q
from dgmodel.model import classify
from dgmodel.adjunction import IdentityInstance
from dgmodel.workbench import cli
from dgmodel.workbench.fileio import Document, InputError, loads
from dgmodel.workbench.generate import (
    InstanceSpec,
    random_dg,
    random_dg_with_truth,
    random_surjective_qiso,
)
from dgmodel.workbench.suites import replay, run_axiom_suite, run_suite

DOC = {
    "field": "Q",
    "indices": ["*"],
    "modules": {
        "X": {"*": {"0": {"rank": 2, "basis": ["a", "b"]}, "1": {"rank": 1, "basis": ["c"]}}},
        "Y": {"*": {"0": {"rank": 1, "basis": ["y"]}}},
        "Z": {"*": {}},
    },
    "differentials": {"X": {"*": {"0": [["1"], ["0"]]}}},
    "maps": {
        "f": {"degree": 0, "source": "X", "target": "Y", "matrices": {"0": [["0"], ["1/2"]]}},
        "u": {"degree": 0, "source": "Z", "target": "Y", "matrices": {}},
        "one": {"degree": 0, "source": "Y", "target": "Y", "matrices": {"0": [["1"]]}},
    },
}


@pytest.fixture
def doc_path(tmp_path):
    p = tmp_path / "doc.json"
    p.write_text(json.dumps(DOC))
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_unit_spec_gives_one_class():
    spec = InstanceSpec(seed=1, window=(0, 0), units=1, cones=0)
    X = random_dg(spec)
    assert X.ranks == {0: 1} and homology(X).dims() == {0: 1}


def test_cones_only_is_acyclic():
    assert is_acyclic(random_dg(InstanceSpec(seed=2, units=0, cones=3)))


@pytest.mark.parametrize("field", ["Q", "F5", "graded"])
def test_homology_matches_generation_truth(field):
    for seed in range(20):
        spec = InstanceSpec(seed=seed, field=field, indices=("x", "y"))
        g = random_dg_with_truth(spec)
        assert homology(g.module).dims() == g.homology_dims()


def test_surjective_qiso_examples():
    inst = IdentityInstance()
    g = random_surjective_qiso(InstanceSpec(seed=3, cones=0))
    assert is_iso(g)
    zero = graded.DgModule.trivial(graded.GradedModule.zero(Q))
    g = random_surjective_qiso(InstanceSpec(seed=3), target=zero)
    assert g.target.dim == 0 and classify(inst, g).in_W_Rf
    assert classify(inst, random_surjective_qiso(InstanceSpec(seed=4))).in_W_Rf


def test_document_round_trip():
    doc = loads(json.dumps(DOC))
    text = doc.dumps()
    again = loads(text)
    assert again.dumps() == text
    assert again.module("X") == doc.module("X")
    assert again.map("f") == doc.map("f")


def test_document_errors():
    with pytest.raises(InputError):
        loads("{")
    bad = json.loads(json.dumps(DOC))
    bad["maps"]["f"]["matrices"]["0"] = [["1"]]
    with pytest.raises(InputError):
        loads(json.dumps(bad))
    with pytest.raises(InputError):
        loads(json.dumps(DOC)).module("nope")


def test_document_builder(rng):
    X = random_dg(InstanceSpec(seed=5))
    doc = Document(Q, [])
    doc.add_module("X", X)
    assert loads(doc.dumps()).module("X") == X


def test_cli_homology_and_cone(capsys, doc_path):
    code, out = run(capsys, "homology", doc_path, "X")
    assert code == 0 and out["dims"] == {"0": 1}
    code, out = run(capsys, "cone", doc_path, "f")
    assert code == 0 and out["quasi_iso"] is True and out["acyclic"] is True


def test_cli_factor_and_retract(capsys, doc_path):
    code, out = run(capsys, "factor", doc_path, "f", "--mode", "tc-f")
    assert code == 0 and out["ok"]
    code, out = run(capsys, "factor", doc_path, "u", "--mode", "c-tf", "--stages", "3")
    assert code == 0 and out["early_stop"] and len(out["stages"]) == 1
    code, out = run(capsys, "retract", doc_path, "one")
    assert code == 0 and out["via"] == "inverse"
    code, out = run(capsys, "retract", doc_path, "f")
    assert code == 2 and out["error"] == "NoFillerAvailable"


def test_cli_adjoin(capsys, doc_path):
    code, out = run(capsys, "adjoin", doc_path, "--A", "Y", "--M", "X", "--alpha", "f")
    assert code == 0 and out["theta_boundary_ok"]


def test_cli_input_errors(capsys, doc_path, tmp_path):
    assert run(capsys, "homology", doc_path, "W")[0] == 2
    assert run(capsys, "homology", str(tmp_path / "missing.json"), "X")[0] == 2
    assert run(capsys, "check-axioms", "--suites", "nope")[0] == 2
    assert cli.main(["no-such-command"]) == 2
    capsys.readouterr()


def test_cli_check_axioms_and_hypothesis(capsys):
    code, out = run(capsys, "check-axioms", "--trials", "2", "--suites", "signs,cone", "--no-timing")
    assert code == 0 and out["ok"] and out["trials"] == 4
    code, out = run(capsys, "verify-hypothesis", "--instance", "identity", "--p", "1", "--window=-3:3")
    assert code == 0
    code, out = run(capsys, "verify-hypothesis", "--instance", "tensor", "--p", "-1", "--window", "0:6")
    assert code == 2


def test_report_is_deterministic():
    a = run_axiom_suite(3, 7, ["Q", "F5"], ["identity", "tensor"], ["signs", "representability"])
    b = run_axiom_suite(3, 7, ["Q", "F5"], ["identity", "tensor"], ["signs", "representability"])
    assert a.ok and a.to_json(timing=False) == b.to_json(timing=False)


def test_one_trial_passes_every_suite():
    rep = run_axiom_suite(1, 0, ["Q"], ["identity", "tensor"])
    assert rep.ok, rep.to_json()
    assert {r.suite for r in rep.results} == set(rep.config["suites"])


def test_empty_instance_list_is_vacuous():
    rep = run_axiom_suite(5, 0, ["Q"], [])
    assert rep.ok and rep.trials == 0 and rep.results == []


def test_graded_field_skips_tensor():
    r = run_suite("adjunction", 2, 0, "graded", "tensor")
    assert r.ok and r.trials == 0 and r.skipped


def test_failures_replay(monkeypatch):
    monkeypatch.setattr(graded, "shift_sign", lambda r, a: 1)
    r = run_suite("signs", 30, 0, "Q", "identity")
    assert r.failures
    ok, info = replay(r.failures[0])
    assert not ok and info["error"] == r.failures[0]["error"]
