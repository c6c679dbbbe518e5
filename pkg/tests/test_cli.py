import copy
import json
from fractions import Fraction

from deltakit.family217.catalog import catalog_dicts
from deltakit.family217.cli import main


def write(tmp_path, d, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(d))
    return str(path)


def raw(name):
    return copy.deepcopy(next(d for d in catalog_dicts() if d["name"] == name))


def test_check_passes(capsys):
    assert main(["check"]) == 0
    assert capsys.readouterr().out.splitlines()[-1].startswith("PASS: 16 scenarios")


def test_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "divisor-HP3" in out and "cubic-case-e" in out


def test_compute_json(tmp_path, capsys):
    assert main(["compute", "--scenario", write(tmp_path, raw("divisor-HP3")), "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["S_X"] == "23/48" and "chambers" not in d


def test_compute_text_with_chambers(capsys):
    assert main(["compute", "--builtin", "ruled-E-e4", "--emit-chambers"]) == 0
    out = capsys.readouterr().out
    assert "S(W;C)" in out and "inner sweep at u" in out


def test_compute_json_chambers(capsys):
    assert main(["compute", "--builtin", "dP4-secant-PinEQ", "--format", "json", "--emit-chambers"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["chambers"]["threefold"] and d["chambers"]["inner"]


def test_bad_file_is_input_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    assert main(["compute", "--scenario", str(path)]) == 3
    assert main(["compute", "--scenario", str(tmp_path / "missing.json")]) == 3
    assert main(["compute", "--builtin", "nope"]) == 3
    assert "error" in capsys.readouterr().err


def test_mismatch_exit_code(tmp_path, capsys):
    d = raw("divisor-HQ")
    d["expected"]["S_X"] = str(Fraction(121, 288) + Fraction(1, 10**6))
    assert main(["compute", "--scenario", write(tmp_path, d)]) == 2


def test_missing_profiles_is_input_error(tmp_path, capsys):
    d = raw("dP4-secant-PinEQ")
    d.pop("profiles")
    d["expected"] = {k: v for k, v in d["expected"].items() if "[" not in k}
    assert main(["compute", "--scenario", write(tmp_path, d)]) == 3
    assert "profile" in capsys.readouterr().err


def test_export_round_trips(tmp_path, capsys):
    out = tmp_path / "scenarios"
    assert main(["export", str(out)]) == 0
    files = sorted(out.glob("*.json"))
    assert len(files) == 16
    assert main(["compute", "--scenario", str(out / "divisor-E.json")]) == 0
