import json
import subprocess
import sys

import jsonschema
import pytest

from golden_cases import CASES, GOLDEN, render
from motivic_hurwitz import __version__
from motivic_hurwitz.cli import COMMANDS, OutputRecord, load_schema, main, run

SCHEMA_RUNS = {
    "class": [["class", "--d", "4", "--g", "7"], ["class", "--d", "2", "--g", "3", "--codim", "5"]],
    "mass": [["mass", "--d", "5", "--ramification", "list:(2,2,1),(3,1,1)"]],
    "strata": [["strata", "--d", "5", "--g", "3", "--max-codim", "2"], ["strata", "--d", "3", "--g", "4", "--max-codim", "2"]],
    "tamagawa": [["tamagawa", "--rank", "2", "--codim", "6"]],
    "bsn": [["bsn", "--n", "4"]],
    "euler-product": [["euler-product", "--factor", "1 + (L^-2 - L^-3)*t + L^-5*t^2", "--codim", "5"]],
    "local-census": [["local-census", "--d", "4", "--q", "5", "--samples", "2000", "--seed", "3"]],
    "fq-count": [["fq-count", "--d", "2", "--q", "3", "--g", "1"],
                 ["fq-count", "--d", "3", "--q", "5", "--E", "1,2", "--samples", "3000"]],
}


def _records(argv):
    code, out, err = run(argv + ["--format", "json"])
    assert code == 0, err
    return [json.loads(line) for line in out.splitlines()]


def test_every_command_has_a_schema_run():
    assert set(SCHEMA_RUNS) == set(COMMANDS)


@pytest.mark.parametrize("command", sorted(SCHEMA_RUNS))
def test_json_output_validates(command):
    schema = load_schema(command)
    jsonschema.Draft202012Validator.check_schema(schema)
    for argv in SCHEMA_RUNS[command]:
        records = _records(argv)
        assert records
        for rec in records:
            jsonschema.validate(rec, schema)
            assert rec["command"] == command and rec["version"] == __version__


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_files(name):
    expected = json.loads((GOLDEN / f"{name}.json").read_text())
    assert set(expected) == {" ".join(argv) for argv in CASES[name]}
    for argv in CASES[name]:
        assert render(argv) == expected[" ".join(argv)], argv


def test_class_example():
    rec, = _records(["class", "--d", "3", "--g", "20", "--ramification", "simple"])
    res = rec["result"]
    assert res["closed_form"] == "L^44 - L^42"
    assert res["codim_bound"] == "5"
    assert res["normalized_series"]["coeffs"][:3] == [1, 0, -1]


def test_mass_example():
    rec, = _records(["mass", "--d", "4"])
    assert rec["result"]["mass"] == "1 + L^-1 + 2*L^-2 + L^-3"
    assert rec["result"]["identity_check"] is True


def test_bsn_example():
    rec, = _records(["bsn", "--n", "3"])
    assert rec["result"]["class"] == "1"
    assert rec["result"]["alternating_sum"] == "-L^2"


def test_exact_values_are_strings():
    rec, = _records(["tamagawa", "--rank", "2", "--codim", "4"])
    assert isinstance(rec["result"]["closed_form"], str)
    recs = _records(["fq-count", "--d", "2", "--q", "5", "--g", "1"])
    assert all(isinstance(r["result"]["predicted"], (str, int)) for r in recs)


def test_table_format():
    code, out, err = run(["mass", "--d", "3"])
    assert code == 0 and not err
    assert out.splitlines()[0].split() == ["d", "3"]


@pytest.mark.parametrize("argv,code,name", [
    (["local-census", "--d", "5", "--q", "5", "--samples", "10"], 2, "BadCharacteristic"),
    (["local-census", "--d", "4", "--q", "3"], 2, "BadCharacteristic"),
    (["local-census", "--d", "4", "--q", "11", "--samples", "10"], 2, "UsageError"),
    (["class", "--d", "7", "--g", "1"], 2, "OutOfRange"),
    (["class", "--d", "3"], 2, "UsageError"),
    (["nonsense"], 2, "UsageError"),
    (["mass", "--d", "4", "--bogus"], 2, "UsageError"),
    (["mass", "--d", "5", "--ramification", "list:(2,2),(3,1,1)"], 2, "UsageError"),
    (["euler-product", "--factor", "1 + L^-1*t"], 1, "MarginViolated"),
    (["euler-product", "--factor", "1 + t +"], 2, "UsageError"),
    (["fq-count", "--d", "2", "--q", "7", "--g", "5"], 1, "TooLarge"),
    (["fq-count", "--d", "3", "--q", "5", "--E", "0,3"], 2, "UsageError"),
    (["bsn", "--n", "9"], 1, "TooLarge"),
])
def test_exit_codes(argv, code, name):
    got, out, err = run(argv)
    assert got == code, err
    assert out == ""
    assert err.startswith(name + ":")


def test_output_record_round_trip():
    rec = OutputRecord("mass", {"d": 3}, {"mass": "1 + L^-1 + L^-2"})
    line = rec.to_json()
    assert "\n" not in line
    assert OutputRecord.from_json(line) == rec
    for raw in _records(["strata", "--d", "3", "--g", "4", "--max-codim", "2"]):
        line = json.dumps(raw, sort_keys=True)
        assert OutputRecord.from_json(line).to_json() == line


def test_main_writes_streams(capsys):
    assert main(["bsn", "--n", "2", "--format", "json"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["result"]["class"] == "1"
    assert main(["class", "--d", "9", "--g", "0"]) == 2
    assert "OutOfRange" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "motivic_hurwitz", "mass", "--d", "3", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["mass"] == "1 + L^-1 + L^-2"
