import json
import pathlib

import jsonschema
import pytest

import amodes

SCHEMAS = pathlib.Path(__file__).resolve().parents[2] / "schemas"

# a valid V17 instance with N = 8 (squared lengths from an integer drawing)
LENGTHS = {
    "squared": {
        "1-2": "13689", "1-3": "23104", "1-4": "51529", "1-7": "17956", "2-3": "60516", "2-5": "45369",
        "3-6": "23716", "4-6": "4489", "4-7": "36100", "5-6": "38025", "5-7": "58564",
    }
}


def validate(name, doc):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.validate(doc, schema)


def run_json(*args):
    code, out, err = amodes.run("--json", *args)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def lengths_file(tmp_path):
    p = tmp_path / "lengths.json"
    p.write_text(json.dumps(LENGTHS))
    return str(p)


def test_version():
    assert amodes.__version__ == "0.1.0"


def test_bounds():
    b = amodes.bounds(7)
    validate("bounds", b)
    assert b["fan_lower"] == 56
    assert b["fan_constant"] == pytest.approx(28 ** 0.25, abs=1e-4)


def test_mixed_volume():
    assert amodes.mixed_volume() == 56
    validate("mixed_volume", run_json("mixed-volume", "--topology", "v67"))


def test_topology_and_system():
    validate("topology_show", run_json("topology", "show", "v37"))
    s = run_json("system", "build", "--topology", "v17")
    validate("system_build", s)
    assert s["degrees"] == [3, 2, 2, 2, 3]
    assert s["bezout"] == 72


def test_is_laman():
    assert amodes.is_laman(3, [(1, 2), (1, 3), (2, 3)])
    assert not amodes.is_laman(4, [(1, 2), (1, 3), (2, 3), (3, 4), (1, 4), (2, 4)])


def test_count(lengths_file):
    c = amodes.count(LENGTHS)
    assert c["ok"] and c["N"] == 8
    assert amodes.count(LENGTHS, seed=5)["N"] == 8
    validate("count", run_json("count", "--topology", "v17", "--lengths", lengths_file, "--seed", "1"))


def test_oracle(lengths_file):
    o = run_json("oracle", "--topology", "v17", "--lengths", lengths_file, "--seed", "1")
    validate("oracle", o)
    assert o["oracle"]["real"] % 2 == 0
    assert o["oracle"]["congruence_classes"] == o["embeddable"]


def test_realize(lengths_file, tmp_path):
    svg = tmp_path / "modes.svg"
    r = run_json("realize", "--topology", "v17", "--lengths", lengths_file, "--seed", "1", "--out", str(svg), "--mirror")
    validate("realize", r)
    assert len(r["embeddings"]) == r["embeddable"]
    assert svg.read_text().count('<g id="mode-') == 2 * r["embeddable"]


def test_optimize(tmp_path):
    run = amodes.optimize("random", budget=3, seed=2)
    assert len(run["trajectory"]) <= 3
    assert run["best_value"] == max(t["value"] for t in run["trajectory"])
    doc = run_json("optimize", "--method", "sa", "--budget", "3", "--runs", "2", "--seed", "1")
    validate("optimize", doc)
    assert [r["seed"] for r in doc["runs"]] == [1, 2]


def test_bad_input():
    code, _, err = amodes.run("bounds", "--n", "1")
    assert code == 1 and err
    with pytest.raises(ValueError):
        amodes.count({"vector": [1, 2, 3]})
