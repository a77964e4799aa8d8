import pytest

import featbounds as fb
from featbounds.detectors import (
    KEYPOINT_HEADER,
    Keypoint,
    external_keypoint_path,
    ingest_keypoints,
    write_keypoints_csv,
)
from featbounds.errors import ParseError, ValidationError


def test_ingest_two_rows(tmp_path):
    path = tmp_path / "kps.csv"
    path.write_text("x,y,scale,response\n10.5,20.25,3.2,0.9\n0,0,1,0\n")
    kps = ingest_keypoints(path)
    assert kps == [
        Keypoint(x=10.5, y=20.25, scale=3.2, response=0.9),
        Keypoint(x=0.0, y=0.0, scale=1.0, response=0.0),
    ]


def test_ingest_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(KEYPOINT_HEADER + "\n")
    assert ingest_keypoints(path) == []


def test_ingest_out_of_range_coordinate(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y,scale,response\n-1,5,1,0\n")
    with pytest.raises(ValidationError):
        ingest_keypoints(path, dims=(100, 100))
    # without dims the row parses (bounds are the caller's context)
    assert len(ingest_keypoints(path)) == 1


def test_ingest_malformed_row_names_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y,scale,response\n1,2,3,4\n5,6,oops,8\n")
    with pytest.raises(ParseError, match="line 3"):
        ingest_keypoints(path)
    path.write_text("x,y,scale,response\n1,2,3\n")
    with pytest.raises(ParseError, match="line 2"):
        ingest_keypoints(path)


def test_ingest_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x;y;scale;response\n")
    with pytest.raises(ParseError, match="line 1"):
        ingest_keypoints(path)


def test_ingest_scale_below_one_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y,scale,response\n4,4,0.5,1\n")
    with pytest.raises(ValidationError):
        ingest_keypoints(path)


def test_write_then_ingest_roundtrip(tmp_path):
    kps = [Keypoint(1.25, 2.5, 1.0, 0.125), Keypoint(7.0, 3.0, 4.5, -2.0)]
    path = tmp_path / "out.csv"
    write_keypoints_csv(kps, path)
    text = path.read_bytes().decode("utf-8")
    assert text.startswith(KEYPOINT_HEADER + "\n")
    assert "\r" not in text
    assert ingest_keypoints(path) == kps


def test_external_naming_is_one_based(tmp_path):
    assert external_keypoint_path(tmp_path, "sceneA", 0).name == "sceneA_step1.csv"
    assert external_keypoint_path(tmp_path, "sceneA", 13).name == "sceneA_step14.csv"


def test_ingest_preserves_file_order(tmp_path):
    path = tmp_path / "kps.csv"
    rows = [(5.0, 1.0), (2.0, 9.0), (8.0, 3.0)]
    write_keypoints_csv([Keypoint(x, y) for x, y in rows], path)
    assert [(kp.x, kp.y) for kp in ingest_keypoints(path)] == rows
