import json
import subprocess
import sys

import pytest

from prelie_posets.cli import main
from prelie_posets.io import structure_to_json

from shapes import BAG2, C2, DIAMOND, DOT


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, t in (("diamond", DIAMOND), ("dot", DOT), ("chain2", C2), ("bag", BAG2)):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(structure_to_json(t)))
        out[name] = str(path)
    bad = tmp_path / "bad.json"
    bad.write_text('{"elements": ["a"],')
    out["bad"] = str(bad)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_coproduct_of_diamond(capsys, files):
    code, out, _ = run(capsys, "coproduct", "--law", "nap", files["diamond"])
    assert code == 0
    assert out.strip() == "1 · [W] ⊗ [•]"


def test_coproduct_json(capsys, files):
    code, out, _ = run(capsys, "coproduct", "--json", files["diamond"])
    data = json.loads(out)
    assert code == 0 and data[0]["coeff"] == "1/1" and len(data[0]["factors"]) == 2


def test_product_and_pair(capsys, files):
    code, out, _ = run(capsys, "product", "--law", "prelie", files["dot"], files["chain2"])
    assert code == 0 and "[V]" in out and "[chain3]" in out
    code, out, _ = run(capsys, "pair", files["diamond"], files["diamond"])
    assert (code, out.strip()) == (0, "2")


def test_topology_flag(capsys, files):
    code, _, err = run(capsys, "coproduct", files["bag"])
    assert code == 2 and "topology" in err
    code, out, _ = run(capsys, "coproduct", "--topologies", files["bag"])
    assert (code, out.strip()) == (0, "0")


def test_malformed_input_exit_2(capsys, files):
    code, _, err = run(capsys, "coproduct", files["bad"])
    assert code == 2 and "line 1" in err


def test_unsupported_n_exit_2(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "9")
    assert code == 2 and "n <= 7" in err


def test_usage_error_exit_2(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_enumerate_connected_classes(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--n", "4", "--connected", "--classes", "--json", "--out", str(tmp_path))
    data = json.loads(out)
    assert code == 0 and data["connected"] == 10 and len(data["rows"]) == 10
    assert (tmp_path / "poset-n4.json").exists()


def test_verify_report(capsys):
    code, out, _ = run(capsys, "verify", "--law", "duality", "--max-total", "5", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["failures"] == [] and data["instances"] == data["predicted"]
    assert set(data) >= {"law", "range", "instances", "failures"}


def test_verify_is_byte_stable_across_workers(capsys):
    _, a, _ = run(capsys, "verify", "--law", "compat", "--max-total", "5", "--json")
    _, b, _ = run(capsys, "verify", "--law", "compat", "--max-total", "5", "--json", "--parallel", "2")
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "wall_time"}
    assert strip(a) == strip(b)


def test_primitives(capsys):
    code, out, _ = run(capsys, "primitives", "--n", "4")
    assert code == 0
    assert "dimension 4" in out and out.count("digraph") == 4


def test_freeness_table(capsys):
    code, out, _ = run(capsys, "freeness-check", "--max-n", "5")
    assert code == 0
    last = out.strip().splitlines()[-1].split()
    assert last == ["5", "44", "22", "44", "0", "22"]


def test_export(capsys, files):
    code, out, _ = run(capsys, "export", files["diamond"])
    assert code == 0 and out.startswith('digraph "P"')
    code, out, _ = run(capsys, "export", "--format", "json", files["diamond"])
    assert json.loads(out)["structure"]["elements"] == ["a", "b", "c", "d"]


def test_console_script_module_entry(files):
    proc = subprocess.run([sys.executable, "-m", "prelie_posets.cli", "coproduct", files["diamond"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "[W] ⊗ [•]" in proc.stdout
