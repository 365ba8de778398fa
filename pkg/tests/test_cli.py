import json
import math

import pytest
from jsonschema import validate

from spin2.cli import main
from spin2.errors import DomainError
from spin2.params import format_complex, parse_complex

COMPLEX_SCHEMA = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re", "im"],
    "additionalProperties": False,
}

EXACT_SCHEMA = {
    "type": "object",
    "properties": {"Z": COMPLEX_SCHEMA},
    "required": ["Z"],
    "additionalProperties": False,
}

COEFFS_SCHEMA = {
    "type": "object",
    "properties": {"coeffs": {"type": "array", "items": COMPLEX_SCHEMA}},
    "required": ["coeffs"],
    "additionalProperties": False,
}

ROOTS_SCHEMA = {
    "type": "object",
    "properties": {
        "roots": {"type": "array", "items": COMPLEX_SCHEMA},
        "residuals": {"type": "array", "items": {"type": "number"}},
    },
    "required": ["roots", "residuals"],
    "additionalProperties": False,
}

WEITZ_SCHEMA = {
    "type": "object",
    "properties": {
        "Z": COMPLEX_SCHEMA,
        "ratios": {"type": "array", "items": COMPLEX_SCHEMA},
        "depth": {"type": ["integer", "null"]},
        "boundary": COMPLEX_SCHEMA,
    },
    "required": ["Z", "ratios", "depth", "boundary"],
    "additionalProperties": False,
}

BARVINOK_SCHEMA = {
    "type": "object",
    "properties": {
        "order": {"type": "integer"},
        "log_Z_truncated": COMPLEX_SCHEMA,
        "Z_estimate": COMPLEX_SCHEMA,
        "zero_free_radius": {"type": "number"},
        "error_bound": {"type": "number"},
        "radius_source": {"enum": ["supplied", "scanned"]},
    },
    "required": ["order", "log_Z_truncated", "Z_estimate", "zero_free_radius",
                 "error_bound", "radius_source"],
    "additionalProperties": False,
}

CERT_SCHEMA = {
    "type": "object",
    "properties": {
        "set_id": {"enum": ["S1", "S2", "S3", "S4"]},
        "all_matches": {"type": "array", "items": {"type": "string"}},
        "anchor": {"type": "object"},
        "max_degree": {"type": "integer"},
        "interval": {"type": "object"},
        "potential": {"type": "object"},
        "eta": {"type": "number"},
        "eta_strip": {"type": "number"},
        "epsilon": {"type": "number"},
        "M": {"type": "number"},
        "delta": {"type": "number"},
        "sampled_grad_sup": {"type": "number"},
        "caps": {"type": "object"},
        "empirical": {"type": "boolean"},
    },
    "required": ["set_id", "anchor", "interval", "potential", "eta", "epsilon",
                 "M", "delta", "empirical"],
}


@pytest.fixture
def k2_file(tmp_path):
    path = tmp_path / "k2.g"
    path.write_text("n 2\ne 0 1\n")
    return str(path)


@pytest.fixture
def p3_file(tmp_path):
    path = tmp_path / "p3.g"
    path.write_text("n 3\ne 0 1\ne 1 2\n")
    return str(path)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestParseComplex:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("0", 0j),
            ("2i", 2j),
            ("1.5-0.25i", 1.5 - 0.25j),
            ("-3e-2", -0.03 + 0j),
            ("1+i", 1 + 1j),
            ("-i", -1j),
            ("2j", 2j),
            ("1e3-2.5e-1i", 1000 - 0.25j),
        ],
    )
    def test_grammar(self, text, value):
        assert parse_complex(text) == value

    @pytest.mark.parametrize("bad", ["", "abc", "1.5+", "i2", "1..2", "1+2", "1 + 2i"])
    def test_rejects(self, bad):
        with pytest.raises(DomainError):
            parse_complex(bad)

    def test_round_trip(self):
        rng_values = [0j, 2j, 1.5 - 0.25j, -0.03 + 0j, 1 + 1j, 3.5e-2j, 1e3 - 2.5e-1j]
        for z in rng_values:
            assert parse_complex(format_complex(z)) == z


class TestSubcommands:
    def test_exact_k2(self, capsys, k2_file):
        code, data = run_json(capsys, [
            "exact", "--graph", k2_file, "--beta", "1", "--gamma", "2", "--lambda", "1.5",
        ])
        assert code == 0
        validate(data, EXACT_SCHEMA)
        assert abs(data["Z"]["re"] - 7.25) <= 1e-12
        assert data["Z"]["im"] == 0

    def test_coeffs(self, capsys, k2_file):
        code, data = run_json(capsys, [
            "coeffs", "--graph", k2_file, "--beta", "0.5", "--gamma", "2",
        ])
        assert code == 0
        validate(data, COEFFS_SCHEMA)
        assert [c["re"] for c in data["coeffs"]] == [2.0, 2.0, 0.5]

    def test_roots(self, capsys, p3_file):
        code, data = run_json(capsys, [
            "roots", "--graph", p3_file, "--beta", "0", "--gamma", "1",
        ])
        assert code == 0
        validate(data, ROOTS_SCHEMA)
        res = sorted(r["re"] for r in data["roots"])
        assert abs(res[0] - (-3 - math.sqrt(5)) / 2) <= 1e-9
        assert abs(res[1] - (-3 + math.sqrt(5)) / 2) <= 1e-9

    def test_weitz_partition(self, capsys, k2_file):
        code, data = run_json(capsys, [
            "weitz", "--graph", k2_file, "--beta", "1", "--gamma", "2", "--lambda", "1.5",
        ])
        assert code == 0
        validate(data, WEITZ_SCHEMA)
        assert abs(data["Z"]["re"] - 7.25) <= 1e-10

    def test_weitz_ratio_with_depth(self, capsys, p3_file):
        code, data = run_json(capsys, [
            "weitz", "--graph", p3_file, "--beta", "0", "--gamma", "1",
            "--lambda", "1", "--vertex", "0", "--depth", "1",
        ])
        assert code == 0
        assert data["depth"] == 1

    def test_weitz_eps_needs_cert(self, capsys, k2_file, tmp_path):
        code = main([
            "weitz", "--graph", k2_file, "--beta", "1", "--gamma", "1",
            "--lambda", "1", "--eps", "0.001",
        ])
        assert code == 1
        code, cert = run_json(capsys, [
            "certify", "--beta", "1.5", "--gamma", "1.5", "--lambda", "1",
            "--delta-max-degree", "3", "--samples", "256",
        ])
        assert code == 0
        cert_file = tmp_path / "cert.json"
        cert_file.write_text(json.dumps(cert))
        code, data = run_json(capsys, [
            "weitz", "--graph", k2_file, "--beta", "1.5", "--gamma", "1.5",
            "--lambda", "1", "--eps", "0.001", "--cert", str(cert_file),
        ])
        assert code == 0
        assert data["depth"] >= 1

    def test_barvinok(self, capsys, p3_file):
        code, data = run_json(capsys, [
            "barvinok", "--graph", p3_file, "--beta", "0", "--gamma", "1",
            "--lambda", "0.2", "--order", "20",
        ])
        assert code == 0
        validate(data, BARVINOK_SCHEMA)
        assert abs(data["log_Z_truncated"]["re"] - math.log(1.64)) < 1e-6

    def test_barvinok_eps_radius(self, capsys, p3_file):
        code, data = run_json(capsys, [
            "barvinok", "--graph", p3_file, "--beta", "0", "--gamma", "1",
            "--lambda", "0.2", "--eps", "1e-6", "--radius", "0.38",
        ])
        assert code == 0
        assert data["error_bound"] <= 1e-6

    def test_barvinok_swap(self, capsys, tmp_path):
        path = tmp_path / "c5.g"
        path.write_text("n 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 0 4\n")
        code, data = run_json(capsys, [
            "barvinok", "--graph", str(path), "--beta", "2", "--gamma", "2",
            "--lambda", "3", "--order", "40", "--swap-bg-inv-lambda",
        ])
        assert code == 0
        z = complex(data["Z_estimate"]["re"], data["Z_estimate"]["im"])
        from spin2.exact import partition_exact
        from spin2.graphs import parse_graph
        from spin2.params import Params
        g, _ = parse_graph(path.read_text())
        want = partition_exact(g, Params(2, 2, 3))
        assert abs(z - want) <= 1e-8 * abs(want)

    def test_certify_json(self, capsys):
        code, data = run_json(capsys, [
            "certify", "--beta", "1.5", "--gamma", "1.5", "--lambda", "1",
            "--delta-max-degree", "3", "--samples", "256",
        ])
        assert code == 0
        validate(data, CERT_SCHEMA)
        assert data["delta"] > 0
        assert data["empirical"] is True

    def test_certify_with_probe(self, capsys):
        code, data = run_json(capsys, [
            "certify", "--beta", "1.5", "--gamma", "1.5", "--lambda", "1",
            "--delta-max-degree", "3", "--samples", "256",
            "--probe", "1.5+0.001i", "1.5", "1",
        ])
        assert code == 0
        probe = data["probe"]
        assert probe["condition1_ok"] and probe["condition2_ok"]
        assert probe["containment_violations"] == 0

    def test_certify_no_match_exit_code(self, capsys):
        code = main([
            "certify", "--beta", "0", "--gamma", "1", "--lambda", "5",
            "--delta-max-degree", "3",
        ])
        err = capsys.readouterr().err
        assert code == 1
        assert "no set matched" in err

    def test_ssm_probe_csv(self, capsys, tmp_path):
        path = tmp_path / "p5.g"
        path.write_text("n 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\n")
        code = main([
            "ssm-probe", "--graph", str(path), "--beta", "0", "--gamma", "1",
            "--lambda", "1", "--vertex", "0", "--pin-set", "4", "--header",
        ])
        out = capsys.readouterr().out
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "distance,gap"
        dist, gap = lines[1].split(",")
        assert dist == "4"
        assert float(gap) > 0

    def test_scan_end_to_end(self, capsys, tmp_path):
        spec = {
            "axis1": {"name": "lambda", "lo": -1.0, "hi": 0.0, "resolution": 5},
            "axis2": {"name": "im_lambda", "lo": 0.0, "hi": 0.0, "resolution": 2},
            "measurement": "min_root_distance",
            "fixed": {"beta": "0", "gamma": "1"},
            "corpus": "paths(2)",
        }
        spec_file = tmp_path / "spec.json"
        spec_file.write_text(json.dumps(spec))
        out_file = tmp_path / "out.csv"
        code = main(["scan", "--spec", str(spec_file), "--out", str(out_file)])
        assert code == 0
        lines = out_file.read_text().strip().splitlines()
        assert lines[0] == "axis1,axis2,value,witness,error"
        assert len(lines) == 11
        assert (tmp_path / "out.csv.spec.json").exists()

    def test_usage_errors_exit_2(self, k2_file):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["exact", "--graph", k2_file, "--beta", "1"])
        assert exc.value.code == 2

    def test_missing_file_exit_1(self):
        code = main(["exact", "--graph", "/nonexistent.g", "--beta", "1",
                     "--gamma", "1", "--lambda", "1"])
        assert code == 1

    def test_bad_graph_file_exit_1(self, capsys, tmp_path):
        path = tmp_path / "bad.g"
        path.write_text("n 2\ne 0 0\n")
        code = main(["exact", "--graph", str(path), "--beta", "1",
                     "--gamma", "1", "--lambda", "1"])
        assert code == 1
        assert "self-loop" in capsys.readouterr().err
