import io
import json
import subprocess
import sys

import pytest

from opfunctors.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_dims_table():
    code, out, _ = call("dims", "--operad", "lie", "--max", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["cat_dims"]["3,2"] == 6
    assert [doc["operad_dims"][str(n)] for n in range(1, 5)] == [1, 1, 2, 6]


def test_check_leibniz_exit_codes():
    assert call("check-leibniz", "--operad", "lie")[0] == 0
    code, out, _ = call("check-leibniz", "--operad", "assu", "--mu", "product")
    assert code == 1
    assert json.loads(out)["witness"]


@pytest.mark.parametrize("argv,key,value", [
    (["coker-mu", "--module", "free:2", "--max", "2"], "coker_dims", [0, 0, 2]),
    (["ker-mu", "--module", "free:2", "--max", "2"], "kappa_dims", [1, 1, 0]),
    (["delta", "--module", "free:2", "--max", "2"], "delta_dims", [1, 2, 0]),
])
def test_module_commands(argv, key, value):
    code, out, _ = call(*argv)
    assert code == 0
    assert json.loads(out)[key] == value


def test_derived_and_conv():
    code, out, _ = call("derived", "--module", "alpha:sign@2", "--max", "2")
    assert code == 0 and json.loads(out)["agree"]
    code, out, _ = call("conv", "--module", "free:2", "--other", "alpha:triv@1", "--max", "2", "--check")
    assert code == 0 and all(json.loads(out)["checks"].values())


def test_output_file_roundtrip(tmp_path):
    path = tmp_path / "d.json"
    assert call("--output", str(path), "delta", "--module", "free:2", "--max", "2")[0] == 0
    code, out, _ = call("coker-mu", "--module", str(path), "--max", "2")
    assert code == 0
    assert json.loads(out)["dims"] == [1, 2, 0]


def test_assu_reflection_refused():
    code, out, _ = call("coker-mu", "--operad", "assu", "--module", "free:1", "--max", "2")
    assert code == 1
    assert "witness" in json.loads(out)


def test_presentation_parse_error(tmp_path):
    path = tmp_path / "bad.op"
    path.write_text("gen b 2\nrel (b 1 2) + 3x (b 2 1)\n")
    code, _, err = call("dims", "--operad", str(path))
    assert code == 2
    assert "line 2" in err and "'x'" in err


def test_usage_errors():
    assert call("dims", "--operad", "nope")[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("grop-outer", "--hom", "1->1: y1")[0] == 2


def test_pbw_and_outer():
    code, out, _ = call("pbw", "--module", "free:2", "--max", "2", "--n", "2")
    doc = json.loads(out)
    assert code == 0 and doc["pbw_dim"] == doc["cat_ass_dim"] == 6
    code, out, _ = call("grop-outer", "--hopf", "symmetric")
    assert code == 0 and json.loads(out)["outer"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "opfunctors", "verify", "leibniz"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"]
