import numpy as np

import featbounds as fb
from featbounds.cli import main
from featbounds.detectors import Keypoint, write_keypoints_csv

from corpus import write_scene_dir


def run(*argv):
    return main([str(a) for a in argv])


# ------------------------------------------------------------------------ gen


def test_gen_three_scenes(tmp_path, scenes_dir3, capsys):
    out = tmp_path / "out"
    rc = run("gen", "--scenes", scenes_dir3, "--out", out, "--transform", "jpeg")
    assert rc == 0
    captured = capsys.readouterr().out
    assert "3 scene(s)" in captured and "42 image(s)" in captured
    assert len(list(out.glob("jpeg/*/manifest.json"))) == 3
    assert len(list(out.glob("jpeg/*/step*.*"))) == 42


def test_gen_empty_scenes_dir(tmp_path, capsys):
    empty = tmp_path / "scenes"
    empty.mkdir()
    rc = run("gen", "--scenes", empty, "--out", tmp_path / "out", "--transform", "jpeg")
    assert rc == 2
    assert "no scenes found" in capsys.readouterr().err


def test_gen_removes_partial_outputs_on_failure(tmp_path, capsys):
    scenes = tmp_path / "scenes"
    write_scene_dir(scenes, 1)
    (scenes / "zz_corrupt.png").write_bytes(b"not an image")
    out = tmp_path / "out"
    rc = run("gen", "--scenes", scenes, "--out", out, "--transform", "light")
    assert rc == 2
    assert list(out.glob("light/*")) == []


def test_gen_custom_steps(tmp_path, scenes_dir3):
    out = tmp_path / "out"
    rc = run("gen", "--scenes", scenes_dir3, "--out", out, "--transform", "light",
             "--steps", "0,30,60,90")
    assert rc == 0
    assert len(list(out.glob("light/*/step*.png"))) == 12


def test_gen_rejects_bad_steps(tmp_path, scenes_dir3, capsys):
    rc = run("gen", "--scenes", scenes_dir3, "--out", tmp_path / "o", "--transform", "light",
             "--steps", "0,95")
    assert rc == 2


# ----------------------------------------------------------------------- eval


def test_eval_two_scene_matrix(tmp_path, capsys):
    scenes = tmp_path / "scenes"
    write_scene_dir(scenes, 2)
    out = tmp_path / "out"
    assert run("gen", "--scenes", scenes, "--out", out, "--transform", "jpeg") == 0
    assert run("eval", "--out", out, "--transform", "jpeg", "--detector", "harris") == 0

    matrix_path = out / "harris_jpeg_matrix.csv"
    lines = matrix_path.read_text().splitlines()
    assert len(lines) == 1 + 2 * 14
    matrix = fb.read_matrix_csv(matrix_path)
    assert all(row[0] == 1.0 for row in matrix.scores)

    first = matrix_path.read_bytes()
    assert run("eval", "--out", out, "--transform", "jpeg", "--detector", "harris") == 0
    assert matrix_path.read_bytes() == first


def test_eval_without_datasets(tmp_path, capsys):
    rc = run("eval", "--out", tmp_path, "--transform", "jpeg", "--detector", "fast")
    assert rc == 2
    assert "no datasets" in capsys.readouterr().err


def test_eval_external_missing_keypoints_is_io_error(tmp_path, capsys):
    scenes = tmp_path / "scenes"
    write_scene_dir(scenes, 1)
    out = tmp_path / "out"
    kp_dir = tmp_path / "kps"
    kp_dir.mkdir()
    assert run("gen", "--scenes", scenes, "--out", out, "--transform", "light",
               "--steps", "0,50") == 0
    rc = run("eval", "--out", out, "--transform", "light", "--detector", "ext",
             "--keypoints", kp_dir)
    assert rc == 3
    assert "scene00_step1.csv" in capsys.readouterr().err


def test_eval_external_requires_keypoint_dir(tmp_path, capsys):
    rc = run("eval", "--out", tmp_path, "--transform", "light", "--detector", "ext")
    assert rc == 2


def test_eval_degenerate_columns_exit_4(tmp_path, capsys):
    scenes = tmp_path / "scenes"
    write_scene_dir(scenes, 1)
    out = tmp_path / "out"
    kp_dir = tmp_path / "kps"
    kp_dir.mkdir()
    assert run("gen", "--scenes", scenes, "--out", out, "--transform", "light",
               "--steps", "0,50") == 0
    write_keypoints_csv([], kp_dir / "scene00_step1.csv")
    write_keypoints_csv([Keypoint(5.0, 5.0)], kp_dir / "scene00_step2.csv")
    rc = run("eval", "--out", out, "--transform", "light", "--detector", "ext",
             "--keypoints", kp_dir)
    assert rc == 4


# --------------------------------------------------------------------- bounds


FIXTURE_MATRIX = (
    "scene_id,step_amount,score\n"
    "a,0.0,1.0\na,45.0,0.8\na,90.0,0.4\n"
    "b,0.0,1.0\nb,45.0,0.6\nb,90.0,0.2\n"
)


def test_bounds_worked_fixture(tmp_path, capsys):
    matrix_path = tmp_path / "demo_matrix.csv"
    matrix_path.write_text(FIXTURE_MATRIX)
    rc = run("bounds", "--matrix", matrix_path, "--out", tmp_path)
    assert rc == 0
    out = capsys.readouterr().out
    printed = dict(
        line.split("=", 1) for line in out.splitlines() if "=" in line and " " not in line
    )
    assert abs(float(printed["guarantee_area"]) - 0.6) <= 1e-12
    assert abs(float(printed["operating_area"]) - 0.15) <= 1e-12
    assert abs(float(printed["max_band_width"]) - 0.2) <= 1e-12
    assert (tmp_path / "demo_curves.csv").exists()
    assert (tmp_path / "demo_bounds.svg").exists()


def test_bounds_single_row_matrix(tmp_path, capsys):
    matrix_path = tmp_path / "one_matrix.csv"
    matrix_path.write_text("scene_id,step_amount,score\na,0.0,1.0\na,90.0,0.5\n")
    assert run("bounds", "--matrix", matrix_path, "--out", tmp_path) == 0
    curves = fb.read_curves_csv(tmp_path / "one_curves.csv")
    assert curves.max_curve == curves.min_curve == curves.median_curve
    assert curves.operating_area == 0.0


def test_bounds_malformed_header(tmp_path, capsys):
    matrix_path = tmp_path / "bad_matrix.csv"
    matrix_path.write_text("oops\n")
    rc = run("bounds", "--matrix", matrix_path, "--out", tmp_path)
    assert rc == 2
    assert "line 1" in capsys.readouterr().err


# ------------------------------------------------------------------------ all


def test_all_pipeline(tmp_path, scenes_dir3, capsys):
    out = tmp_path / "out"
    rc = run("all", "--scenes", scenes_dir3, "--out", out, "--transform", "jpeg",
             "--detector", "fast", "--jobs", "2")
    assert rc == 0
    assert (out / "fast_jpeg_matrix.csv").exists()
    assert (out / "fast_jpeg_curves.csv").exists()
    assert (out / "fast_jpeg_bounds.svg").exists()


def test_all_stops_at_eval_failure(tmp_path, scenes_dir3, capsys):
    out = tmp_path / "out"
    kp_dir = tmp_path / "kps"
    kp_dir.mkdir()
    rc = run("all", "--scenes", scenes_dir3, "--out", out, "--transform", "light",
             "--detector", "ext", "--keypoints", kp_dir)
    assert rc == 3
    assert list(out.glob("*_curves.csv")) == []
    assert list(out.glob("*_bounds.svg")) == []


# --------------------------------------------------------------------- config


def test_config_file_supplies_defaults_and_flags_win(tmp_path, scenes_dir3):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        f"scenes = {scenes_dir3}\n"
        f"out = {tmp_path / 'out'}\n"
        "transform = jpeg  # sweep kind\n"
        "steps = 0,50\n"
    )
    assert run("gen", "--config", cfg) == 0
    assert len(list((tmp_path / "out" / "jpeg").glob("*/step*.*"))) == 6

    assert run("gen", "--config", cfg, "--transform", "light") == 0
    assert len(list((tmp_path / "out" / "light").glob("*/step*.png"))) == 6


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sceness = /tmp\n")
    assert run("gen", "--config", cfg) == 2


def test_missing_required_setting(tmp_path, capsys):
    rc = run("gen", "--out", tmp_path / "out", "--transform", "jpeg")
    assert rc == 2
    assert "--scenes" in capsys.readouterr().err
