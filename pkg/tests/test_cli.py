import io
import json
import subprocess
import sys

import pytest

from mtk.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def call_json(*argv):
    status, out, _ = call(*argv, "--format", "json")
    doc = json.loads(out)
    assert doc["exit"] == status and doc["schema"] == 1
    return status, doc


class TestKtheory:
    def test_rose3(self):
        status, out, _ = call("ktheory", "data:rose3.json")
        assert status == 0
        assert "K0 = Z/2" in out and "K1 = 0" in out

    def test_bs23_json(self):
        status, doc = call_json("ktheory", "data:bs23.json")
        assert status == 0
        assert doc["global"] == {"K0": {"rank": 0, "torsion": []}, "K1": {"rank": 0, "torsion": ["2"]}}

    def test_sixterm(self):
        status, doc = call_json("sixterm", "data:bs23.json")
        assert doc["id-alpha0"] == [["-1"]] and doc["id-alpha1"] == [["-2"]]


class TestDynamics:
    def test_bs23(self):
        status, out, _ = call("dynamics", "data:bs23.json")
        assert status == 0
        assert "cofinal: yes" in out
        assert "topologically free: yes" in out
        assert "locally contractive: yes" in out

    def test_bs12_certificate(self):
        status, doc = call_json("dynamics", "data:bs12.json", "--certificate")
        assert doc["topologically_free"] == {"value": "no"}
        comp = doc["certificates"]["topologically_free"]["components"][0]
        assert comp["evidence"] == {"v": None}


class TestValidate:
    def test_presentation(self):
        assert call("validate", "data:rose2.json")[0] == 0

    def test_multitree(self):
        status, doc = call_json("validate", "data:multitree.json")
        assert doc["multitree"] is True and doc["cylinder_pairs_certified"] > 0

    def test_invalid_exit_code(self):
        status, doc = call_json("validate", "data:bad.json")
        assert status == 1 and not doc["ok"]
        assert {v["rule"] for v in doc["violations"]} >= {"mixed-classes"}

    def test_invalid_presentation_blocks_computation(self):
        status, out, err = call("ktheory", "data:bad.json")
        assert status == 1 and "error" in err and not out

    def test_parse_error_has_location(self, tmp_path):
        f = tmp_path / "broken.json"
        f.write_text('{"vertices": ["v"],\n "edges": [}\n')
        status, _, err = call("ktheory", str(f))
        assert status == 1
        assert "broken.json" in err and "line 2" in err

    def test_missing_file(self, tmp_path):
        status, _, err = call("ktheory", str(tmp_path / "nope.json"))
        assert status == 1 and err

    def test_missing_input(self):
        assert call("ktheory")[0] == 1


class TestDual:
    def test_free_group(self, tmp_path):
        target = tmp_path / "dual.json"
        status, out, _ = call("dual", "data:free2.json", "--output", str(target))
        assert status == 0 and "4 vertices, 12 edges" in out
        status, out, _ = call("ktheory", str(target))
        assert "K0 = Z^2" in out and "K1 = Z^2" in out

    def test_bs23(self):
        status, doc = call_json("dual", "data:bs23-gog.json")
        assert doc["in_degree_identity"] is True
        assert len(doc["presentation"]["edges"]) == 5

    def test_tree(self):
        status, doc = call_json("dual", "data:dual-tree.json")
        assert status == 0 and doc["multitree"] is True


def test_setfamily():
    status, doc = call_json("setfamily", "data:family.json")
    assert status == 0
    assert doc["independent"] and doc["finitely_aligned"]
    assert set(doc["saturation"]["F"]) <= set(doc["saturation"]["J"])


class TestLifttree:
    def test_verify(self):
        status, out, _ = call("lifttree", "data:bs23.json", "--depth", "3", "--verify")
        assert status == 0
        assert "verify: ok" in out
        assert "stabiliser of e e e: 8" in out

    def test_size_guard(self):
        status, doc = call_json("lifttree", "data:rose4.json", "--depth", "6", "--max-nodes", "100")
        assert status == 1 and doc["error"] == "size-guard" and doc["bound"] == 100

    def test_dot(self, tmp_path):
        target = tmp_path / "t.dot"
        assert call("lifttree", "data:bs23.json", "--depth", "1", "--dot", str(target))[0] == 0
        assert target.read_text().startswith("digraph")


class TestOracle:
    def test_deterministic_json(self):
        a = call("oracle", "--only", "dual,set-families", "--seed", "4", "--format", "json")
        b = call("oracle", "--only", "dual,set-families", "--seed", "4", "--format", "json")
        assert a[0] == 0 and a[1] == b[1]

    def test_unknown_check(self):
        assert call("oracle", "--only", "nonsense")[0] == 1


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "mtk.cli", "ktheory", "data:rose2.json"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "K0 = 0" in out.stdout


@pytest.mark.parametrize("cmd", ["ktheory", "dynamics", "sixterm", "validate"])
def test_every_bundled_presentation(cmd):
    for name in ["rose2", "rose3", "rose4", "rose5", "rose6", "bs12", "bs22", "bs23", "bs24", "bs32"]:
        assert call(cmd, f"data:{name}.json")[0] == 0
