import json

import pytest

from dualbimod.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "M:1")
    assert code == 0 and json.loads(out)["dim"] == 5
    code, out, _ = run(capsys, "construct", "B:2:3/1")
    data = json.loads(out)
    assert code == 0 and data["dim"] == 4 and data["label"] == "B:2:3"


def test_construct_bad_label(capsys):
    code, _, err = run(capsys, "construct", "X:9")
    assert code == 2 and "X:9" in err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["tensor", "M:0", "M:0", "--decompose"], "ProjInj + W:0"),
        (["tensor", "N:1", "M:1", "--decompose", "--mod-cell", "J1"], "N:1"),
        (["tensor", "D", "M:2", "--decompose"], "M:2"),
    ],
)
def test_tensor(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == expected


def test_tensor_json(capsys):
    code, out, _ = run(capsys, "tensor", "M:0", "M:0", "--decompose", "--json")
    assert code == 0 and json.loads(out) == {"summands": ["ProjInj", "W:0"]}


def test_mod_cell_needs_decompose(capsys):
    code, _, _ = run(capsys, "tensor", "M:0", "M:0", "--mod-cell", "J1")
    assert code == 2


def test_hom_and_decompose(capsys, tmp_path):
    code, out, _ = run(capsys, "hom", "D", "D", "--json")
    assert code == 0 and json.loads(out)["dim"] == 2
    code, out, _ = run(capsys, "construct", "S:1")
    path = tmp_path / "s1.json"
    path.write_text(out)
    code, out, _ = run(capsys, "decompose", str(path))
    assert code == 0 and out.strip() == "S:1"
    code, out, _ = run(capsys, "decompose", "W:2+S:1+DxD", "--shuffle", "7")
    assert code == 0 and sorted(out.strip().split(" + ")) == ["ProjInj", "S:1", "W:2"]


def test_residual_exit_code(capsys, tmp_path):
    # a band with irrational eigenvalues has no rational label
    data = {"dim": 4, "left": [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]],
            "right": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 2, 0, 0], [1, 0, 0, 0]]}
    path = tmp_path / "band.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "decompose", str(path))
    assert code == 3 and "residual" in out


def test_cells(capsys):
    code, out, _ = run(capsys, "cells", "--level", "2")
    assert code == 0 and "Jsplit > JM0 > J1 > J2 > JD" in out
    code, out, _ = run(capsys, "cells", "--level", "1", "--dot")
    assert code == 0 and out.startswith("digraph")


def test_verify_usage(capsys):
    assert run(capsys, "verify", "--level", "5")[0] == 2
    assert run(capsys, "verify", "--only", "nonsense")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_verify_only_actmat(capsys):
    code, out, _ = run(capsys, "verify", "--only", "actmat", "--json")
    data = json.loads(out)
    assert code == 0 and [c["check"] for c in data["checks"]] == ["actmat"]


def test_verify_level2_subset(capsys):
    code, out, _ = run(capsys, "verify", "--level", "2", "--only", "m0-square,table,cells,hom-lemma,goodness")
    assert code == 0 and "5/5 checks passed" in out


def test_actmat(capsys):
    code, out, _ = run(capsys, "actmat")
    assert code == 0 and "proposition: pass" in out
    code, out, _ = run(capsys, "actmat", "--n", "2", "--json")
    assert code == 0 and len(json.loads(out)) == len(__import__("dualbimod.actmat", fromlist=["x"]).enumerate_root_matrices(2))


def test_output_is_reproducible(capsys):
    first = run(capsys, "verify", "--only", "m0-square,structures", "--json")
    second = run(capsys, "verify", "--only", "m0-square,structures", "--json")
    assert first == second
    assert run(capsys, "cells", "--json", "--level", "1") == run(capsys, "cells", "--json", "--level", "1")


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("DUALBIMOD_THREADS", "2")
    code, out, _ = run(capsys, "verify", "--only", "m0-square,adjoint", "--json")
    data = json.loads(out)
    assert code == 0 and [c["check"] for c in data["checks"]] == ["m0-square", "adjoint"]
