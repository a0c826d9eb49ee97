import io as stdio
import json


from llg import io, library
from llg.cli import main


def run(*argv):
    out, err = stdio.StringIO(), stdio.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_analyze_heisenberg():
    code, out, _ = run("analyze", "--example", "heisenberg-3")
    rep = json.loads(out)
    assert code == 0
    assert rep["gamma"] == [{"index": [3, 1, 2], "value": "1"}]
    assert rep["verdict"]["local_lie_group"] is True
    assert all(rep["identities"].values())


def test_analyze_perturbed_frame_is_not_local_lie():
    code, out, _ = run("analyze", "perturbed-3")
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == {"tilde_flat": True, "hat_flat": False, "nabla_torsion_zero": False,
                              "local_lie_group": False}


def test_analyze_connection_file(tmp_path):
    path = write(tmp_path, "c.json", {"n": 3, "gamma": [{"i": 3, "k": 1, "j": 2, "val": "x2"}]})
    code, out, _ = run("analyze", path)
    rep = json.loads(out)
    assert code == 0 and rep["source"] == "connection"
    assert rep["curvature_hat"] == []
    assert rep["identities"]["parallel-bracket"] is None


def test_point_at_a_pole_exits_3(tmp_path):
    path = write(tmp_path, "f.json", {"n": 2, "frame": [["x1", "0"], ["0", "1"]]})
    code, _, err = run("analyze", path)
    assert code == 3 and "outside the chart" in err
    assert run("analyze", path, "--point", "2,0")[0] == 0


def test_cohomology_outputs():
    rep = json.loads(run("cohomology", "--example", "heisenberg-3")[1])
    assert rep["betti"] == [1, 4, 5, 2] and rep["euler_characteristic"] == 0
    assert all(rep["checks"].values())
    assert json.loads(run("cohomology", "sl2-3")[1])["betti"] == [0, 0, 0, 0]
    rep = json.loads(run("cohomology", "abelian-2", "--max-degree", "1")[1])
    assert rep["betti"] == [2, 4] and "euler_characteristic" not in rep


def test_cohomology_rejects_bad_degree():
    assert run("cohomology", "abelian-2", "--max-degree", "5")[0] == 2


def test_jacobi_failure_exits_4(tmp_path):
    data = {"n": 3, "c": [{"i": 1, "j": 1, "k": 2, "val": "1"}, {"i": 2, "j": 2, "k": 3, "val": "1"},
                          {"i": 3, "j": 1, "k": 3, "val": "1"}]}
    code, out, err = run("cohomology", write(tmp_path, "c.json", data))
    assert code == 4 and out == ""
    assert err.startswith("llg: Jacobi identity fails: J^")


def test_classes():
    rep = json.loads(run("classes", "aff1-2")[1])
    (entry,) = rep["classes"]
    assert entry["trace"] == [{"index": [1], "value": "1"}]
    assert entry["closed"] and entry["field_closed"] and rep["torsion_closed"]
    assert run("classes", "perturbed-3")[0] == 5


def test_classes_from_constants_file(tmp_path):
    path = write(tmp_path, "c.json", io.constants_to_dict(library.get("sl2-3").constants))
    rep = json.loads(run("classes", path)[1])
    assert [e["power"] for e in rep["classes"]] == [1]


def test_deform_examples():
    rep = json.loads(run("deform", "--example", "abelian-const-jet")[1])
    assert rep["kodaira_spencer"]["status"] == "class"
    assert rep["kodaira_spencer"]["coordinates"] == ["1", "2", "3", "4"]
    rep = json.loads(run("deform", "--example", "heisenberg-bad-jet")[1])
    assert rep["order_one_constraint"][0]["field_holds"] is False
    assert rep["kodaira_spencer"] is None


def test_deform_with_files_and_order(tmp_path):
    jet = write(tmp_path, "j.json", io.jet_to_dict(library.get("identity-jet-3").jet))
    rep = json.loads(run("deform", "heisenberg-3", jet, "--order", "3")[1])
    assert rep["order"] == 3 and rep["validity_order"] == 3
    assert run("deform", "perturbed-3", jet)[0] == 5
    assert run("deform", "abelian-2", jet)[0] == 2
    assert run("deform", "heisenberg-3", jet, "--order", "0")[0] == 2


def test_examples_listing_and_dump():
    names = [e["name"] for e in json.loads(run("examples")[1])["examples"]]
    assert names == sorted(library.examples())
    frame = json.loads(run("examples", "engel-4")[1])
    assert frame["frame"][3] == ["0", "1/2*x1^2", "x1", "1"]
    assert run("examples", "nope")[0] == 2


def test_missing_input_and_parse_errors(tmp_path):
    assert run("analyze")[0] == 2
    assert run("analyze", "no-such-thing")[0] == 2
    assert run("analyze", "heisenberg-3", "--point", "1,2")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run("analyze", str(bad))
    assert code == 2 and "parse error" in err
    assert run("frobnicate")[0] == 2


def test_text_format():
    code, out, _ = run("cohomology", "heisenberg-3", "--format", "text")
    assert code == 0 and "betti: [1, 4, 5, 2]" in out


def test_verify_single_suite_is_deterministic():
    a = run("verify", "--suite", "complexes", "--seed", "3")
    b = run("verify", "--suite", "complexes", "--seed", "3")
    assert a == b and a[0] == 0
    rep = json.loads(a[1])
    assert rep["passed"] and rep["cases"] > 0
