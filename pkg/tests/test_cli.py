import csv
import io
import json
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from padslopes.catalog import ModuleFile, catalog_all
from padslopes.cli import decimal_text, main
from padslopes.slopes import radii_profile

frac = Fraction


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, args in {
        "bessel": ["bessel", "-n", "2", "-p", "2"],
        "exp2": ["exp", "-k", "2", "-p", "2"],
        "exp3": ["exp", "-k", "3", "-p", "2"],
        "adjoint": ["adjoint-bessel2"],
        "system": ["bessel-system", "-n", "2", "-p", "2"],
    }.items():
        path = tmp_path / f"{name}.json"
        assert run("slopes", "catalog", *args, "-o", str(path))[0] == 0
        paths[name] = str(path)
    return paths


@pytest.mark.parametrize("mf", catalog_all(), ids=lambda m: m.label)
def test_module_file_round_trip(mf):
    back = ModuleFile.loads(mf.dumps())
    assert back == mf
    assert back.dumps() == mf.dumps()


def test_formal(files):
    code, out = run("slopes", "formal", files["adjoint"])
    assert code == 0
    assert json.loads(out)["formal_slopes"] == ["1/2", "1/2", "0"]


def test_parametric(files):
    code, out = run("slopes", "parametric", files["bessel"])
    doc = json.loads(out)
    assert code == 0
    assert [iv["lo"] for iv in doc["intervals"]] == ["0", "2"]
    assert doc["thresholds"]["direct_stabilization"] == "2"
    assert doc["thresholds"]["combined"] == "10"


def test_check_certify_bessel(files):
    code, out = run("slopes", "check", files["bessel"], "--certify")
    doc = json.loads(out)
    assert code == 0
    assert [r["verdict"] for r in doc["comparison"]["partial_sums"]] == ["equal", "equal"]


def test_check_declared_exp(files):
    code, out = run("slopes", "check", files["exp2"], "--declared", "1")
    assert code == 0
    assert json.loads(out)["comparison"]["partial_sums"][0]["verdict"] == "strict"
    # metadata carries the declaration too
    assert run("slopes", "check", files["exp2"])[0] == 0


def test_check_violation_exit_code(files):
    assert run("slopes", "check", files["exp2"], "--declared", "3")[0] == 4


def test_check_bound(files):
    code, out = run("slopes", "check", files["exp2"], "--bound")
    assert code == 0
    assert json.loads(out)["comparison"]["partial_sums"][0]["verdict"] == "certified"


def test_error_exit_codes(files, tmp_path):
    assert run("slopes", "formal", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("slopes", "formal", str(bad))[0] == 2
    # no declaration in metadata and no mode given
    assert run("slopes", "check", files["exp3"])[0] == 3
    # wrong number of declared slopes
    assert run("slopes", "check", files["bessel"], "--declared", "1")[0] == 3
    assert run("slopes", "check", files["bessel"], "--declared", "a,b")[0] == 2
    assert run("ramify", "jumps", "--semidirect", "8", "3")[0] == 3
    assert run("bogus")[0] == 2


def test_non_monic_file_is_rejected(files, tmp_path):
    doc = json.loads(open(files["exp2"]).read())
    doc["coefficients"][-1]["laurent"][0]["coeff"] = ["3"]
    path = tmp_path / "nonmonic.json"
    path.write_text(json.dumps(doc))
    assert run("slopes", "formal", str(path))[0] == 3


def test_system_input_uses_cyclic_vector(files):
    code, out = run("slopes", "formal", files["system"])
    assert code == 0
    assert json.loads(out)["formal_slopes"] == ["1/2", "1/2"]
    assert run("--seed", "3", "slopes", "check", files["system"], "--certify")[0] == 0


def test_determinism(files, tmp_path):
    outputs = []
    for k in range(2):
        csv_path, svg_path = tmp_path / f"r{k}.csv", tmp_path / f"r{k}.svg"
        code, out = run("--seed", "1", "slopes", "radii", files["adjoint"], "--at", "7",
                        "--csv", str(csv_path), "--svg", str(svg_path))
        assert code == 0
        outputs.append((out.replace(f"r{k}", "r"), csv_path.read_bytes(), svg_path.read_bytes()))
    assert outputs[0] == outputs[1]


def test_csv_matches_exact_values(files, tmp_path):
    path = tmp_path / "bessel.csv"
    assert run("slopes", "radii", files["bessel"], "--csv", str(path), "--samples", "40", "--s-max", "8")[0] == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["s", "f_1", "f_2", "F_1", "F_2"]
    mf = ModuleFile.loads(open(files["bessel"]).read())
    prof = radii_profile(mf.operator)
    seen_na = False
    for k, row in enumerate(rows[1:], start=1):
        s = frac(8 * k, 40)
        assert row[0] == decimal_text(s)
        exact = [prof.radius_at(1, s), prof.radius_at(2, s), prof.sum_at(1, s), prof.sum_at(2, s)]
        for cell, value in zip(row[1:], exact):
            if value is None:
                assert cell == "NA"
                seen_na = True
            else:
                assert cell == decimal_text(value)
                assert abs(float(cell) - float(value)) <= 1e-11 * max(1, abs(float(value)))
    assert seen_na


def test_decimal_text():
    assert decimal_text(frac(1, 3)) == "0.333333333333"
    assert decimal_text(frac(15, 2)) == "7.5"


def test_svg_well_formed(files, tmp_path):
    path = tmp_path / "plot.svg"
    assert run("slopes", "radii", files["bessel"], "--svg", str(path))[0] == 0
    root = ET.parse(path).getroot()
    assert root.tag.endswith("svg")


def test_radii_at(files):
    code, out = run("slopes", "radii", files["bessel"], "--at", "3")
    assert code == 0
    radii = json.loads(out)["at"]["radii"]
    assert [r["v"] for r in radii] == ["9/2", "9/2"]


def test_ramify_commands():
    code, out = run("ramify", "jumps", "--sl2f3")
    assert code == 0 and json.loads(out)["upper_jumps"] == ["1/3", "1/2"]
    code, out = run("ramify", "swan", "--sl2f3", "--char", "chi2_0")
    doc = json.loads(out)
    assert code == 0 and doc["swan"] == "1"
    code, out = run("ramify", "swan", "--semidirect", "4", "3", "--char", "0")
    assert code == 0 and json.loads(out)["swan"] == "1"
    code, out = run("ramify", "table", "--semidirect", "4", "6")
    assert code == 0
    code, out = run("ramify", "as-compose", "-n", "3", "-p", "2")
    assert code == 0 and json.loads(out)["holds"] is True
    code, out = run("ramify", "quotients", "--semidirect", "4", "3")
    assert code == 0 and json.loads(out)["conforms"] is True


def test_internal_inconsistency_exit_code(files, monkeypatch):
    from padslopes import cli
    from padslopes.errors import InternalInconsistency

    def broken(op):
        raise InternalInconsistency("simulated")

    monkeypatch.setattr(cli, "formal_slopes", broken)
    assert run("slopes", "formal", files["bessel"])[0] == 5
