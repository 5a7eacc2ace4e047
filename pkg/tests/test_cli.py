import csv
import json
import random

import pytest

from conftest import chirp_instance, tropical_instance
from thermopauli import cli


def write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def tropical_doc(n0=4, seed=1):
    p = tropical_instance(n0, random.Random(seed), exact=True)
    return {"u": [str(v) for v in p.u], "w": [str(v) for v in p.w]}


def run(tmp_path, command, doc, *flags):
    out = tmp_path / "out.json"
    code = cli.main([command, "--input", write(tmp_path, doc), "--output", str(out), *flags])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_all_zero_data_rejected(tmp_path, capsys):
    code, _ = run(tmp_path, "tropical", {"schema": 1, "u": [0] * 6, "w": [0] * 6})
    assert code == cli.EXIT_REJECTED
    assert "degenerate: q equals (3 u1 w1)^2" in capsys.readouterr().err


def test_tropical_exact(tmp_path):
    doc = {"schema": 1, **tropical_doc()}
    code, res = run(tmp_path, "tropical", doc, "--backend", "exact")
    assert code == cli.EXIT_OK
    assert res["backend"] == "exact" and res["n0"] == 4
    assert len(res["solutions"]) == 2
    cli.validate(res, cli.RESULT_SCHEMAS["tropical"])


def test_subtropical_chirp(tmp_path):
    p = chirp_instance(1)
    doc = {"schema": 1, "A": p.A.to_json(), "B": p.B.to_json()}
    code, res = run(tmp_path, "subtropical", doc, "--backend", "exact")
    assert code == cli.EXIT_OK
    assert [s["f"]["coeffs"][0][2][0] for s in res["solutions"]] == ["1", "-1"]
    cli.validate(res, cli.RESULT_SCHEMAS["subtropical"])


def test_backend_env_and_flag(tmp_path, monkeypatch):
    doc = {"schema": 1, **tropical_doc()}
    monkeypatch.setenv(cli.BACKEND_ENV, "exact")
    assert run(tmp_path, "tropical", doc)[1]["backend"] == "exact"
    assert run(tmp_path, "tropical", doc, "--backend", "float")[1]["backend"] == "float"
    monkeypatch.setenv(cli.BACKEND_ENV, "bogus")
    assert run(tmp_path, "tropical", doc)[0] == cli.EXIT_SCHEMA


def test_output_is_deterministic(tmp_path):
    doc = {"schema": 1, "N0": 1, "N1": 2, "N2": 2, "K": 3.0}
    src = write(tmp_path, doc)
    outs = []
    for k in range(2):
        out = tmp_path / f"o{k}.json"
        assert cli.main(["chemical", "-i", src, "-o", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("which,head", [("E", "x"), ("beta", "y")])
def test_fluctuations_csv(tmp_path, which, head):
    doc = {"schema": 1, "A": [[2.0, 0.1], [0.1, 1.0]], "which": which,
           "grid": {"min": -1, "max": 1, "points": 11}}
    code, res = run(tmp_path, "fluctuations", doc, "--kB", "0.5")
    assert code == 0 and res["csv_rows"] == 11
    with open(res["csv"], newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == [head, "value"] and len(rows) == 12
    cli.validate(res, cli.RESULT_SCHEMAS["fluctuations"])
    assert res["var_E"][0] * res["var_beta"][0] >= 0.25 - 1e-12


def test_explicit_csv_path(tmp_path):
    doc = {"schema": 1, "A": [[1.0]], "quantity": "wavefunction", "x0": [0.2], "y0": [0.1],
           "grid": {"min": -2, "max": 2, "points": 5}}
    target = tmp_path / "plot.csv"
    code, res = run(tmp_path, "fluctuations", doc, "--csv", str(target))
    assert code == 0 and res["csv"] == str(target) and target.exists()


@pytest.mark.parametrize("doc,pointer", [
    ({"schema": 1, "u": [1, "x"], "w": [1, 2]}, "/u/1"),
    ({"schema": 1, "u": [1], "w": [1], "extra": 0}, ""),
    ({"schema": 2, "u": [1], "w": [1]}, "/schema"),
])
def test_schema_violation_points_at_field(tmp_path, capsys, doc, pointer):
    code, _ = run(tmp_path, "tropical", doc)
    assert code == cli.EXIT_SCHEMA
    assert f"schema violation at {pointer or '/'}" in capsys.readouterr().err


def test_nested_model_pointer(tmp_path, capsys):
    doc = {"schema": 1, "model": {"name": "product", "components": [{"name": "quadratic"}]},
           "C": [[1.0]], "released": [0], "start": [1.0]}
    assert run(tmp_path, "reduce", doc)[0] == cli.EXIT_SCHEMA
    assert "/model/components/0" in capsys.readouterr().err


def test_unreadable_input(tmp_path):
    assert cli.main(["chemical", "--input", str(tmp_path / "missing.json")]) == cli.EXIT_SCHEMA
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert cli.main(["chemical", "--input", str(bad)]) == cli.EXIT_SCHEMA


def test_usage_errors_exit_3(tmp_path):
    with pytest.raises(SystemExit) as e:
        cli.main(["nosuchcommand"])
    assert e.value.code == cli.EXIT_SCHEMA
    assert cli.main(["chemical"]) == cli.EXIT_SCHEMA


def test_rejected_scenario(tmp_path):
    doc = {"schema": 1, "N0": 0, "N1": 0, "N2": 0, "K": 1.0}
    assert run(tmp_path, "chemical", doc)[0] == cli.EXIT_REJECTED


def test_internal_error_exit_1(tmp_path, monkeypatch):
    def boom(doc, cfg):
        raise RuntimeError("boom")
    monkeypatch.setitem(cli._RUNNERS, "chemical", boom)
    doc = {"schema": 1, "N0": 1, "N1": 1, "N2": 0, "K": 1.0}
    assert run(tmp_path, "chemical", doc)[0] == cli.EXIT_INTERNAL


def test_verify_roundtrip(tmp_path):
    prob = tropical_doc(6, 2)
    _, res = run(tmp_path, "tropical", {"schema": 1, **prob}, "--backend", "exact")
    sol = dict(res["solutions"][0])
    code, ver = run(tmp_path, "verify", {"schema": 1, "kind": "tropical", "problem": prob,
                                         "solution": sol}, "--backend", "exact")
    assert code == 0 and ver["ok"]
    sol["lambda"] = list(sol["lambda"])
    sol["lambda"][3] = "7"
    code, ver = run(tmp_path, "verify", {"schema": 1, "kind": "tropical", "problem": prob,
                                         "solution": sol}, "--backend", "exact")
    assert code == cli.EXIT_REJECTED and not ver["ok"]


def test_reduce_and_gibbs(tmp_path):
    doc = {"schema": 1, "model": {"name": "sackur_tetrode"}, "C": [[1, 0, 0], [0, 1, 0],
                                                                    [0, 0, 1]],
           "released": [1], "start": [1.0, 1.0, 1.0]}
    code, res = run(tmp_path, "reduce", doc)
    assert code == 0 and res["units"] == "kB"
    code, res = run(tmp_path, "gibbs", {"schema": 1, "u": 1, "v": 1, "n": 2, "M0": 1,
                                         "M1": 1.05, "eps0": 0.2})
    assert code == 0 and res["mixing_entropy"] == 0.0


def test_print_schema(capsys):
    assert cli.main(["gibbs", "--print-schema"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"input", "result"}
    assert doc["input"]["additionalProperties"] is False
