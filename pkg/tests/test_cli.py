"""Config parsing, artifact schema, determinism, and exit-code contract."""

import json
import os

import pytest

from edl.cli import main, write_artifacts
from edl.config import (
    ConfigError,
    ExperimentConfig,
    build_config,
    load_config,
    parse_config_text,
    with_overrides,
)
from edl.experiments import EXPERIMENTS, PAPER_ANCHORS, run_experiment
from edl.report import line_plot_svg


# -- config parsing ---------------------------------------------------------------------


def test_empty_config_gives_defaults():
    cfg = parse_config_text("", experiment="conormal")
    assert cfg.l_min == 8
    assert cfg.l_max == 256
    assert cfg.tol == 0.05
    assert cfg.seed == ExperimentConfig().seed


def test_overrides_and_comments():
    text = "# probe band\nl_max = 64\n\nseed=7\ndo_assert = false\n"
    cfg = parse_config_text(text, experiment="conormal")
    assert cfg.l_max == 64
    assert cfg.seed == 7
    assert cfg.do_assert is False


def test_unknown_key_suggests_and_names_line():
    with pytest.raises(ConfigError, match=r"line 2.*n_mdoes.*n_modes"):
        parse_config_text("seed = 1\nn_mdoes = 12\n")


def test_negative_band_rejected():
    with pytest.raises(ConfigError, match="n_modes"):
        parse_config_text("n_modes = -4")


def test_bad_value_reports_line():
    with pytest.raises(ConfigError, match=r"line 1.*invalid value"):
        parse_config_text("tol = very-small")


def test_missing_equals_rejected():
    with pytest.raises(ConfigError, match="key=value"):
        parse_config_text("just a line")


def test_inconsistent_range_rejected():
    with pytest.raises(ConfigError, match="l_max"):
        parse_config_text("l_min = 10\nl_max = 5\n")


def test_load_config_missing_file():
    with pytest.raises(ConfigError, match="not found"):
        load_config("/nonexistent/edl.cfg")


def test_with_overrides_keeps_none():
    cfg = build_config("gram")
    same = with_overrides(cfg, out_dir=None, seed=None)
    assert same == cfg
    bumped = with_overrides(cfg, seed=99)
    assert bumped.seed == 99 and bumped.l_max == cfg.l_max


# -- artifact schema ----------------------------------------------------------------------


def test_summary_schema_and_anchor(tmp_path):
    cfg = with_overrides(build_config("continuation"), out_dir=str(tmp_path))
    outcome = run_experiment(cfg)
    folder = write_artifacts(outcome, cfg.out_dir)
    with open(os.path.join(folder, "summary.json")) as handle:
        summary = json.load(handle)
    for key in ("experiment", "paper_anchor", "pass", "metrics"):
        assert key in summary
    assert summary["experiment"] == "continuation"
    assert summary["paper_anchor"] == PAPER_ANCHORS["continuation"]
    assert summary["pass"] is True
    assert isinstance(summary["metrics"], dict)
    with open(os.path.join(folder, "results.csv")) as handle:
        lines = handle.read().strip().splitlines()
    assert lines[0] == "s,lambda"
    assert len(lines) == len(outcome.rows) + 1


def test_every_command_has_an_anchor():
    assert set(PAPER_ANCHORS) == set(EXPERIMENTS)
    assert all(anchor for anchor in PAPER_ANCHORS.values())


def test_artifacts_byte_identical_across_runs(tmp_path):
    out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
    rc1 = main(["gram", "--out", out1, "--seed", "5"])
    rc2 = main(["gram", "--out", out2, "--seed", "5"])
    assert rc1 == rc2 == 0
    for name in ("results.csv", "summary.json", "plot.svg"):
        with open(os.path.join(out1, "gram", name), "rb") as h1:
            with open(os.path.join(out2, "gram", name), "rb") as h2:
                assert h1.read() == h2.read(), name


# -- exit codes ---------------------------------------------------------------------------


def test_exit_zero_on_pass(tmp_path, capsys):
    rc = main(["conormal", "--out", str(tmp_path)])
    assert rc == 0
    assert "conormal: pass" in capsys.readouterr().out


def test_exit_one_with_failure_list(tmp_path, capsys):
    cfgfile = tmp_path / "strict.cfg"
    cfgfile.write_text("tol = 1e-15\n")
    rc = main(["conormal", "--config", str(cfgfile), "--out", str(tmp_path / "o")])
    assert rc == 1
    out = capsys.readouterr().out
    payload = json.loads(out.strip().splitlines()[-1])
    assert payload["failures"]
    with open(tmp_path / "o" / "conormal" / "summary.json") as handle:
        assert json.load(handle)["pass"] is False


def test_no_assert_downgrades_to_zero(tmp_path):
    cfgfile = tmp_path / "strict.cfg"
    cfgfile.write_text("tol = 1e-15\n")
    rc = main(["conormal", "--config", str(cfgfile), "--no-assert",
               "--out", str(tmp_path / "o")])
    assert rc == 0


def test_exit_two_on_config_error(tmp_path, capsys):
    cfgfile = tmp_path / "bad.cfg"
    cfgfile.write_text("n_modes = -4\n")
    rc = main(["modes", "--config", str(cfgfile), "--out", str(tmp_path)])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_exit_two_on_unknown_command():
    with pytest.raises(SystemExit) as exc:
        main(["not-an-experiment"])
    assert exc.value.code == 2


# -- svg writer ---------------------------------------------------------------------------


def test_svg_structure():
    svg = line_plot_svg(
        [("a", [1.0, 2.0, 4.0], [1.0, 0.1, 0.01])],
        "demo", "x", "y", logx=True, logy=True,
    )
    assert svg.startswith("<svg ")
    assert svg.rstrip().endswith("</svg>")
    assert "polyline" in svg
    assert "demo" in svg


def test_svg_rejects_bad_input():
    with pytest.raises(ValueError, match="nothing"):
        line_plot_svg([], "t", "x", "y")
    with pytest.raises(ValueError, match="matching"):
        line_plot_svg([("a", [1.0], [1.0, 2.0])], "t", "x", "y")
    with pytest.raises(ValueError, match="positive"):
        line_plot_svg([("a", [0.0, 1.0], [1.0, 2.0])], "t", "x", "y", logx=True)


def test_svg_no_external_references(tmp_path):
    rc = main(["continuation", "--out", str(tmp_path)])
    assert rc == 0
    with open(tmp_path / "continuation" / "plot.svg") as handle:
        svg = handle.read()
    assert "http" not in svg.replace("http://www.w3.org/2000/svg", "")
