import csv
import io
import json

import pytest

from walk_induction import cli
from walk_induction.config import Params, RunConfig, bundled, bundled_names, load, loads
from walk_induction.errors import ConfigError, TransitivityError
from walk_induction.reports import CONFIG_ERROR, FAILED, INCONCLUSIVE, OK, SUPPORT_CAP, combine

S3_CFG = {"name": "s3", "group": {"kind": "free", "rank": 2}, "measure": "srw",
          "action": {"degree": 3, "generators": {"a": "(0 1)", "b": "(1 2)"}},
          "params": {"N": 6, "n_max": 4, "n_max_induced": 2, "samples": 2000, "seed": 9}}


def _write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def _small(tmp_path, name, **params):
    d = bundled(name).to_dict()
    d["params"].update(samples=2000, **params)
    return _write(tmp_path, d, name + ".json")


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", bundled_names())
def test_bundled_round_trip(name):
    cfg = bundled(name)
    again = loads(cfg.dumps())
    assert again.to_dict() == cfg.to_dict()
    assert again.build()[2].m == cfg.build()[2].m


def test_bundled_names():
    assert {"f2_index2", "f2_s3_index3", "z_3z", "z_2z", "f2_trivial"} <= set(bundled_names())


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        RunConfig.from_dict(dict(S3_CFG, extra=1))
    with pytest.raises(ConfigError):
        RunConfig.from_dict(dict(S3_CFG, params={"N": 3, "bogus": 1}))
    with pytest.raises(ConfigError):
        RunConfig.from_dict(dict(S3_CFG, output={"format": "xml"}))


def test_param_validation():
    with pytest.raises(ConfigError):
        Params.from_dict({"N": 0})
    with pytest.raises(ConfigError):
        Params.from_dict({"seed": -1})
    with pytest.raises(ConfigError):
        Params.from_dict({"n_max": True})
    assert Params.from_dict({"max_bias": 1}).max_bias == 1


def test_missing_and_malformed():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({k: v for k, v in S3_CFG.items() if k != "action"})
    with pytest.raises(ConfigError):
        loads("{not json")
    with pytest.raises(ConfigError):
        load("/nonexistent/cfg.json")


def test_intransitive_action_is_typed_error():
    bad = dict(S3_CFG, action={"degree": 3, "generators": {"a": "(0 1)", "b": "(0 1)"}})
    with pytest.raises(TransitivityError):
        RunConfig.from_dict(bad)


def test_combine_precedence():
    assert combine([]) == OK
    assert combine([OK, INCONCLUSIVE, SUPPORT_CAP]) == SUPPORT_CAP
    assert combine([SUPPORT_CAP, FAILED]) == FAILED
    assert combine([FAILED, CONFIG_ERROR, OK]) == CONFIG_ERROR


def test_list_configs(capsys):
    code, out, _ = _run(capsys, "kac", "--list-configs")
    assert code == 0 and "f2_index2" in out.split()


def test_kac_json(capsys):
    code, out, _ = _run(capsys, "kac", "--config", "f2_index2")
    data = json.loads(out)
    assert code == OK and data["E_tau"] == "2"
    code, out, _ = _run(capsys, "kac", "--config", "f2_s3_index3")
    assert code == OK and json.loads(out)["E_tau"] == "3"


def test_boundary_json(capsys):
    code, out, _ = _run(capsys, "boundary", "--config", "f2_index2")
    data = json.loads(out)
    assert code == OK
    assert data["h_mu"] == "1/2 × log 3" and data["index_times_h_mu"] == "1 × log 3"
    assert data["quotient_h_mu"] == "0"


def test_boundary_unsupported_group(capsys):
    code, _, err = _run(capsys, "boundary", "--config", "z_3z")
    assert code == CONFIG_ERROR
    assert json.loads(err)["type"] == "UnsupportedOperationError"


@pytest.mark.parametrize("command", ["kac", "tails", "hit", "entropy"])
@pytest.mark.parametrize("name", ["f2_index2", "z_3z", "f2_trivial"])
def test_commands_succeed(tmp_path, capsys, command, name):
    code, out, _ = _run(capsys, command, "--config", _small(tmp_path, name))
    assert code == OK, out
    assert json.loads(out)["settings"]["samples"] == 2000


def test_abramov_statuses(tmp_path, capsys):
    assert _run(capsys, "abramov", "--config", "f2_index2")[0] == OK
    code, out, _ = _run(capsys, "abramov", "--config", _write(tmp_path, S3_CFG))
    assert code == INCONCLUSIVE


def test_verify_config(tmp_path, capsys):
    code, out, _ = _run(capsys, "verify-all", "--config", _small(tmp_path, "f2_index2"))
    assert code == OK
    code, _, _ = _run(capsys, "verify-all", "--config", _write(tmp_path, S3_CFG))
    assert code == INCONCLUSIVE


def test_corrupted_permutation_exit_code(tmp_path, capsys):
    bad = dict(S3_CFG, action={"degree": 3, "generators": {"a": "(0 1)", "b": "(0 1)"}})
    code, out, err = _run(capsys, "kac", "--config", _write(tmp_path, bad))
    assert code == CONFIG_ERROR and out == ""
    payload = json.loads(err)
    assert payload["type"] == "TransitivityError" and payload["status"] == CONFIG_ERROR


def test_config_errors(tmp_path, capsys):
    assert _run(capsys, "kac")[0] == CONFIG_ERROR
    assert _run(capsys, "kac", "--config", "no_such_config")[0] == CONFIG_ERROR
    assert _run(capsys, "kac", "--config", "f2_index2", "--seed", str(2**64))[0] == CONFIG_ERROR
    p = _write(tmp_path, dict(S3_CFG, surprise=True))
    assert _run(capsys, "kac", "--config", p)[0] == CONFIG_ERROR


def test_support_cap_exit_code(tmp_path, capsys):
    code, _, err = _run(capsys, "hit", "--config", _small(tmp_path, "f2_s3_index3", support_cap=2))
    assert code == SUPPORT_CAP
    assert json.loads(err)["error"] == "support cap exceeded"


def test_csv_output(tmp_path, capsys):
    code, out, _ = _run(capsys, "tails", "--config", "z_3z", "--format", "csv")
    assert code == OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows and "n" in rows[0]
    code, out, _ = _run(capsys, "kac", "--config", "f2_index2", "--format", "csv")
    assert code == OK and out.splitlines()[0]


def test_out_file(tmp_path, capsys):
    target = tmp_path / "kac.json"
    code, out, _ = _run(capsys, "kac", "--config", "f2_index2", "--out", str(target))
    assert code == OK and out == ""
    assert json.loads(target.read_text())["E_tau"] == "2"


def test_output_is_deterministic(tmp_path, capsys):
    path = _small(tmp_path, "z_3z")
    first = _run(capsys, "hit", "--config", path)[1]
    second = _run(capsys, "hit", "--config", path)[1]
    assert first == second


def test_seed_override(tmp_path, capsys):
    path = _small(tmp_path, "z_3z")
    a = json.loads(_run(capsys, "hit", "--config", path, "--seed", "5")[1])
    b = json.loads(_run(capsys, "hit", "--config", path, "--seed", "6")[1])
    assert a["settings"]["seed"] == 5 and b["settings"]["seed"] == 6
    assert a != b
