import json

import pytest

from permpoly.cli import COMMANDS, RunConfig, build_parser, main
from permpoly.exceptions import ImageEscape, InternalError
from permpoly.namespace import AUDIT_LIMIT, THM21_AUDIT_LIMIT

FIELD_F25 = {"p": 5, "n": 1, "m": 2}


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def _thm31(tmp_path, h, j=1):
    return _write(tmp_path / "thm31.json", {"construction": "thm31", "field": FIELD_F25, "j": j, "h": h})


class TestRunConfig:

    def test_defaults(self):
        args = build_parser().parse_args(["audit", "thm31", "--q", "5", "--m", "2", "--j", "1"])
        config = RunConfig.from_args(args)
        assert config.construction == "thm31"
        assert config.max_deg == 2
        assert config.ks == [1, 2]
        assert config.timing is False
        assert config.tower().order == 25
        assert config.instance_cap() == AUDIT_LIMIT
        assert config.instance_cap(THM21_AUDIT_LIMIT) == 300

    def test_max_instances_flag(self):
        args = build_parser().parse_args(["audit", "thm21", "--max-instances", "50"])
        assert RunConfig.from_args(args).instance_cap(THM21_AUDIT_LIMIT) == 50

    def test_fallback_tower(self):
        config = RunConfig(command="audit", m=3)
        assert config.tower(2, 3, 3).order == 512
        assert not config.has_field()


def test_field_info_json(capsys):
    assert main(["field-info", "--q", "4", "--m", "2", "--format", "json"]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info == {"p": 2, "n": 2, "m": 2, "q": 4, "order": 16, "base_poly": [1, 1, 1], "ext_poly": [2, 1, 1]}


def test_field_info_table(capsys):
    assert main(["field-info", "--p", "2", "--m", "3"]) == 0
    assert "y^3 + y + 1" in capsys.readouterr().out


def test_verify_example21(tmp_path, capsys):
    path = _write(tmp_path / "ex.json", {"construction": "cor21", "preset": "example21", "a": 2, "field": {"p": 2, "n": 3, "m": 3}})
    assert main(["verify", "--instance", path]) == 0
    out = capsys.readouterr().out
    assert "AGREEMENT" in out
    assert "DISAGREEMENT" not in out


def test_verify_json(tmp_path, capsys):
    assert main(["verify", "--instance", _thm31(tmp_path, "2,1,1"), "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["predicate"] is True
    assert report["oracle"]["is_permutation"] is True
    assert report["agreement"] is True
    assert "elapsed" not in report["oracle"]


def test_verify_not_permutation(tmp_path, capsys):
    assert main(["verify", "--instance", _thm31(tmp_path, "0,1")]) == 1
    out = capsys.readouterr().out
    assert "Predicate           False" in out
    assert "Oracle              False" in out


def test_verify_field_path(tmp_path):
    _write(tmp_path / "f25.json", FIELD_F25)
    path = _write(tmp_path / "inst.json", {"construction": "thm31", "field": "f25.json", "j": 1, "h": [2, 1, 1]})
    assert main(["verify", "--instance", path]) == 0


def test_verify_field_from_flags(tmp_path):
    path = _write(tmp_path / "inst.json", {"construction": "thm31", "j": 1, "h": "2,1,1"})
    assert main(["verify", "--instance", path, "--q", "5", "--m", "2"]) == 0
    assert main(["verify", "--instance", path]) == 64


def test_verify_thm21_hypotheses(tmp_path):
    data = {
        "construction": "thm21",
        "field": {"p": 2, "n": 2, "m": 2},
        "B": "id",
        "terms": [{"L": "id", "gamma": 0, "h": "0,1"}],
    }
    assert main(["verify", "--instance", _write(tmp_path / "thm21.json", data)]) == 65


@pytest.mark.parametrize(
    "h, j, expected",
    [
        ("0,x", 1, 64),
        ("2,1,1", 2, 65),
    ],
)
def test_verify_errors(tmp_path, h, j, expected):
    assert main(["verify", "--instance", _thm31(tmp_path, h, j)]) == expected


def test_missing_instance_file(tmp_path):
    assert main(["verify", "--instance", str(tmp_path / "missing.json")]) == 64


def test_audit_thm31(capsys):
    assert main(["audit", "thm31", "--q", "5", "--m", "2", "--j", "1", "--max-deg", "2"]) == 0
    out = capsys.readouterr().out
    assert "Instances Checked   125" in out
    assert "Disagreements       0" in out


def test_audit_thm32(capsys):
    assert main(["audit", "thm32", "--q", "4", "--m", "2", "--j", "7", "--max-deg", "2", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["instances_checked"] == 64
    assert report["disagreements"] == []


def test_audit_example21(capsys):
    assert main(["audit", "thm21", "--preset", "example21", "--m", "3"]) == 0
    assert "Instances Checked   7" in capsys.readouterr().out


def test_audit_thm21_default(capsys):
    assert main(["audit", "thm21", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["instances_checked"] >= 200
    assert report["instances_checked"] + report["skipped"] == 288 + 3 * THM21_AUDIT_LIMIT
    assert report["disagreements"] == []
    assert report["seed"] == 0


def test_audit_thm41(capsys):
    assert main(["audit", "thm41", "--max-instances", "400", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["instances_checked"] == 400
    assert report["disagreements"] == []
    assert report["seed"] == 0


def test_audit_cor23(capsys):
    assert main(["audit", "cor23", "--max-deg", "1", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["instances_checked"] == 768
    assert report["skipped"] == 512
    assert report["disagreements"] == []


def test_audit_needs_j():
    assert main(["audit", "thm31", "--q", "5", "--m", "2"]) == 64


def test_search(capsys):
    assert main(["search", "thm31", "--q", "5", "--m", "2", "--j", "1", "--max-deg", "2"]) == 0
    assert "2,1,1" in capsys.readouterr().out.splitlines()


def test_search_gcd():
    assert main(["search", "thm32", "--q", "4", "--m", "2", "--j", "3", "--max-deg", "1"]) == 65


def test_translators(capsys):
    assert main(["translators", "--q", "4", "--m", "2", "--format", "json"]) == 0
    certs = json.loads(capsys.readouterr().out)
    assert len(certs) == 15


def test_export(tmp_path, capsys):
    path = _write(tmp_path / "cor22.json", {"construction": "cor22", "field": {"p": 2, "n": 2, "m": 2}, "L": "zero", "h": "1"})
    assert main(["export", "--instance", path]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "input_code,output_code"
    assert lines[1:] == [f"{i},{i}" for i in range(16)]


def test_export_to_file(tmp_path):
    path = _write(tmp_path / "cor22.json", {"construction": "cor22", "field": {"p": 2, "n": 2, "m": 2}, "L": "zero", "h": "1"})
    out = tmp_path / "table.json"
    assert main(["export", "--instance", path, "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text(encoding="utf-8"))[5] == [5, 5]


def test_csv_only_for_export():
    assert main(["field-info", "--q", "4", "--m", "2", "--format", "csv"]) == 64


def test_unknown_command():
    assert main(["frobnicate"]) == 64


@pytest.mark.parametrize("error", [ImageEscape, InternalError])
def test_internal_failure(monkeypatch, error):
    def fail(config):
        raise error("kernel scan disagrees")

    monkeypatch.setitem(COMMANDS, "field-info", fail)
    assert main(["field-info", "--q", "4", "--m", "2"]) == 70
