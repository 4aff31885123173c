"""Command-line interface: subcommands, formats, and the exit-code contract."""

import json
import re

import pytest

from walkergeom.cli import main


def write_config(tmp_path, name, body):
    path = tmp_path / name
    path.write_text(json.dumps(body))
    return str(path)


@pytest.fixture
def flat_cfg(tmp_path):
    return write_config(tmp_path, "flat.json", {"kind": "walker"})


@pytest.fixture
def quad_cfg(tmp_path):
    return write_config(tmp_path, "quad.json",
                        {"kind": "walker", "fields": {"g34": "x1^2"}})


@pytest.fixture
def lemma_cfg(tmp_path):
    return write_config(tmp_path, "lemma.json", {
        "kind": "walker",
        "fields": {"g34": "x1*p + x2*q"},
        "defs": {"p": "-2*lin_inv(1.0, 1.0, 1.0)",
                 "q": "-2*lin_inv(1.0, 1.0, 1.0)"},
        "points": [[0.3, -0.7, 1.1, 0.9]],
        "seed": 11,
    })


def test_curvature_flat(flat_cfg, capsys):
    assert main(["curvature", "--metric", flat_cfg, "--at", "0,0,0,0"]) == 0
    out = capsys.readouterr().out
    assert "no nonzero components" in out
    assert "scalar curvature: 0" in out


def test_curvature_quadratic_fiber(quad_cfg, capsys):
    assert main(["curvature", "--metric", quad_cfg, "--at", "0,0,0,0"]) == 0
    out = capsys.readouterr().out
    assert "R_1314 = 1" in out


def test_curvature_json_format(quad_cfg, capsys):
    assert main(["curvature", "--metric", quad_cfg, "--at", "0,0,0,0",
                 "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    comps = {tuple(c["indices"]): c["value"] for c in payload["components"]}
    assert comps[(1, 3, 1, 4)] == pytest.approx(1.0)
    assert payload["scalar_curvature"] == 0.0


def test_report_clean_metric(lemma_cfg, capsys):
    assert main(["report", "--metric", lemma_cfg]) == 0
    out = capsys.readouterr().out
    assert out.count("holds") == 13
    assert "fails" not in out


def test_report_json_residuals_match_text_to_12_digits(lemma_cfg, capsys):
    main(["report", "--metric", lemma_cfg, "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    main(["report", "--metric", lemma_cfg])
    text = capsys.readouterr().out
    props = payload["reports"][0]["properties"]
    for line in text.splitlines():
        m = re.match(r"\s+(\w+)\s+(holds|fails)\s+residual (\S+)", line)
        if not m:
            continue
        name, _, shown = m.groups()
        assert shown == f"{props[name]['residual']:.12g}"


def test_report_extra_sampled_points(lemma_cfg, capsys):
    assert main(["report", "--metric", lemma_cfg, "--points", "2",
                 "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["points"]) == 3
    assert payload["violations"] == []


def test_report_forced_violation_exits_one(tmp_path, capsys):
    cfg = write_config(tmp_path, "forced.json", {
        "kind": "walker",
        "fields": {"g34": "x1*x3 + x2*x4"},
        "points": [[0.3, -0.7, 1.1, 0.9]],
        "thresholds": {"einstein": 1.0},
    })
    assert main(["report", "--metric", cfg]) == 1
    out = capsys.readouterr().out
    assert "implication violated" in out
    assert "einstein" in out


def test_parse_failures_exit_two(tmp_path, capsys):
    bad = write_config(tmp_path, "bad.json",
                       {"kind": "walker", "fields": {"g34": "x1 + * x2"}})
    assert main(["curvature", "--metric", bad, "--at", "0,0,0,0"]) == 2
    notjson = tmp_path / "notjson.json"
    notjson.write_text("{")
    assert main(["report", "--metric", str(notjson)]) == 2
    cyclic = write_config(tmp_path, "cyclic.json", {
        "kind": "walker", "fields": {"g34": "a"},
        "defs": {"a": "b", "b": "a"}})
    assert main(["report", "--metric", str(cyclic)]) == 2
    capsys.readouterr()


def test_bad_point_argument_exits_two(flat_cfg, capsys):
    assert main(["curvature", "--metric", flat_cfg, "--at", "0,0,0"]) == 2
    assert main(["curvature", "--metric", flat_cfg, "--at", "0,0,0,zzz"]) == 2
    capsys.readouterr()


def test_singular_point_exits_three(lemma_cfg, capsys):
    code = main(["curvature", "--metric", lemma_cfg, "--at", "0,0,-0.5,-0.5"])
    assert code == 3
    assert "lin_inv" in capsys.readouterr().err


def test_verify_pass_and_fail_codes(capsys):
    assert main(["verify", "--suite", "thm1.5"]) == 0
    assert main(["verify", "--suite", "bogus"]) == 2
    capsys.readouterr()


def test_verify_json_includes_calibration(capsys):
    assert main(["verify", "--suite", "oracle", "--seed", "7",
                 "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "pass"
    assert "curvature_table_sign" in payload["calibration"]


def test_extend_round_trip(tmp_path, capsys):
    affine = write_config(tmp_path, "conn.json", {
        "kind": "affine_extension",
        "fields": {"gamma_34_3": "-0.5*p", "gamma_34_4": "-0.5*q"},
        "defs": {"p": "-2*lin_inv(1.0, 1.0, 1.0)",
                 "q": "-2*lin_inv(1.0, 1.0, 1.0)"},
        "seed": 4,
    })
    out_path = str(tmp_path / "derived.json")
    assert main(["extend", "--affine", affine, "--out", out_path]) == 0
    capsys.readouterr()
    derived = json.loads(open(out_path).read())
    assert derived["kind"] == "walker"
    assert derived["seed"] == 4
    assert derived["fields"]["g33"] in ("0", "0.0")
    assert main(["report", "--metric", out_path]) == 0
    assert "fails" not in capsys.readouterr().out


def test_extend_rejects_walker_configs(flat_cfg, tmp_path, capsys):
    assert main(["extend", "--affine", flat_cfg,
                 "--out", str(tmp_path / "x.json")]) == 2
    capsys.readouterr()


def test_usage_errors_from_argparse(capsys):
    assert main([]) == 2
    assert main(["report"]) == 2
    capsys.readouterr()
