import csv
import math

import pytest

from subordlab import cli


def write(tmp_path, text, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def read_summary(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_stable_suite_passes(tmp_path, capsys):
    cfg = write(tmp_path, "model: cycle(8)\nsuite: stable\nalpha: [0.5]\n")
    assert cli.main(["run", cfg, "--output-dir", str(tmp_path / "out")]) == 0
    rows = read_summary(tmp_path / "out" / "summary.csv")
    assert rows and all(r["pass"] == "true" for r in rows if r["kind"] == "paper")
    assert (tmp_path / "out" / "stable").is_dir()


def test_domination_sector_constant(tmp_path):
    cfg = write(tmp_path, "model: cycle(16)\nsuite: domination\nbeta: pi/8\nk: 1\n")
    assert cli.main(["run", cfg, "--output-dir", str(tmp_path / "out")]) == 0
    rows = read_summary(tmp_path / "out" / "summary.csv")
    sector = [r for r in rows if r["check"].startswith("complex_function")]
    assert sector
    const = float(sector[0]["paper_constant"])
    gamma = math.sqrt(1 - math.tan(math.pi / 8) ** 2)
    assert const == pytest.approx(4 * math.sqrt(2) / gamma, rel=1e-12)
    assert const == pytest.approx(6.21509, abs=1e-5)
    assert float(sector[0]["value"]) <= const


@pytest.mark.parametrize("text", [
    "model: cycle(16)\nsuite: []\n",
    "model: cycle(16)\nsuite: bogus\n",
    "model: cycle(16)\nsuite: stable\nalpha: 1.5\n",
    "model: cycle(16)\nsuite: stable\nbeta: 1.0\n",
    "model: cycle(16)\nsuite: stable\ncolour: red\n",
    "model: torus(16)\nsuite: stable\n",
    "model: cycle(2)\nsuite: stable\n",
    "suite: stable\n",
    "model: cycle(16)\nsuite: hardy\np: 0.3\n",
    "model: [cycle(16)\n",
])
def test_config_errors_exit_2(tmp_path, text, capsys):
    assert cli.main(["run", write(tmp_path, text), "--output-dir", str(tmp_path / "o")]) == 2
    assert "error:" in capsys.readouterr().err


def test_missing_file_and_bad_flags(tmp_path):
    assert cli.main(["run", str(tmp_path / "nope.yaml")]) == 2
    cfg = write(tmp_path, "model: cycle(8)\nsuite: stable\n")
    assert cli.main(["run", cfg, "--parallel", "0"]) == 2
    assert cli.main(["run", cfg, "--tolerance-scale", "-1"]) == 2
    assert cli.main(["frobnicate"]) == 2


def test_describe(capsys):
    assert cli.main(["describe", "bogus"]) == 2
    assert cli.main(["describe", "domination"]) == 0
    out = capsys.readouterr().out
    assert "4 sqrt(2) / gamma" in out and "subordlab.domination" in out
    assert cli.main(["describe", "all"]) == 0
    out = capsys.readouterr().out
    assert all(f"code: subordlab." in out for _ in cli.SUITES) and "hardy:" in out
    assert out.count("code: subordlab.") == len(cli.SUITES)


def test_determinism_and_parallel(tmp_path):
    cfg = write(tmp_path, "model: path(12)\nsuite: [maximal, subordination]\nseed: 3\n")
    assert cli.main(["run", cfg, "--output-dir", str(tmp_path / "a")]) == 0
    assert cli.main(["run", cfg, "--output-dir", str(tmp_path / "b")]) == 0
    assert cli.main(["run", cfg, "--output-dir", str(tmp_path / "c"), "--parallel", "3"]) == 0
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*.csv"))
    assert files
    for f in files:
        ref = (tmp_path / "a" / f).read_bytes()
        assert (tmp_path / "b" / f).read_bytes() == ref
        assert (tmp_path / "c" / f).read_bytes() == ref


def test_seed_override_changes_samples(tmp_path):
    cfg = write(tmp_path, "model: cycle(8)\nsuite: maximal\nseed: 1\n")
    cli.main(["run", cfg, "--output-dir", str(tmp_path / "a")])
    cli.main(["run", cfg, "--output-dir", str(tmp_path / "b"), "--seed", "2"])
    assert (tmp_path / "a" / "summary.csv").read_bytes() != (tmp_path / "b" / "summary.csv").read_bytes()


def test_computation_failure_exit_1(tmp_path, monkeypatch):
    def boom(ctx):
        raise FloatingPointError("forced")

    monkeypatch.setitem(cli._RUNNERS, "maximal", boom)
    cfg = write(tmp_path, "model: cycle(8)\nsuite: [stable, maximal]\nalpha: [0.5]\n")
    assert cli.main(["run", cfg, "--output-dir", str(tmp_path / "o")]) == 1
    rows = read_summary(tmp_path / "o" / "summary.csv")
    assert any(r["suite"] == "stable" for r in rows)
    assert any(r["suite"] == "maximal" and r["subject"] == "<error>" and r["pass"] == "false" for r in rows)


def test_failed_constant_check_exit_1(tmp_path):
    # a vanishing tolerance scale makes the tolerance-governed constant checks fail
    cfg = write(tmp_path, "model: cycle(8)\nsuite: subordination\n")
    assert cli.main(["run", cfg, "--output-dir", str(tmp_path / "o"), "--tolerance-scale", "1e-30"]) == 1


def test_file_model(tmp_path):
    import numpy as np
    from subordlab import spectral
    spectral.save_operator(spectral.path(6), tmp_path / "op.npz")
    cfg = write(tmp_path, "model: file(op.npz)\nsuite: maximal\n")
    assert cli.main(["run", cfg, "--output-dir", str(tmp_path / "o")]) == 0
