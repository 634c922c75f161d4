"""JSON round trips, schema validation, and trajectory CSV logging."""

import csv
import json

import numpy as np
import pytest

from spectral_cmc.frames import offdiag_potential
from spectral_cmc.serialization import (
    ParseError,
    TrajectoryWriter,
    load_potential,
    load_spectral_data,
    save_potential,
    save_spectral_data,
    spectral_data_from_dict,
    spectral_data_to_dict,
)
from spectral_cmc.whitham import FlowState, monitors


def test_spectral_data_round_trip(tmp_path, rot1):
    path = tmp_path / "d.json"
    save_spectral_data(rot1, path)
    back = load_spectral_data(path)
    assert back.g == rot1.g
    assert all(back.a.coeff(k) == rot1.a.coeff(k) for k in range(3))
    assert all(back.b.coeff(k) == rot1.b.coeff(k) for k in range(3))
    assert back.lambda1 == rot1.lambda1


def test_save_is_deterministic(tmp_path, rot0):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_spectral_data(rot0, p1)
    save_spectral_data(rot0, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_potential_round_trip(tmp_path, rot1):
    xi = offdiag_potential(rot1.a, rot1.g)
    path = tmp_path / "xi.json"
    save_potential(xi, path)
    back = load_potential(path)
    assert back.g == xi.g
    for k in range(-1, xi.g + 1):
        assert np.array_equal(back.coeff(k), xi.coeff(k))


def test_rejects_wrong_version(rot0):
    obj = spectral_data_to_dict(rot0)
    obj["version"] = 999
    with pytest.raises(ParseError):
        spectral_data_from_dict(obj)


def test_rejects_missing_field(rot0):
    obj = spectral_data_to_dict(rot0)
    del obj["lambda1"]
    with pytest.raises(ParseError):
        spectral_data_from_dict(obj)


def test_rejects_non_finite(rot0):
    obj = spectral_data_to_dict(rot0)
    obj["a"][0][0] = float("nan")
    with pytest.raises(ParseError):
        spectral_data_from_dict(obj)


def test_rejects_malformed_pairs(rot0):
    obj = spectral_data_to_dict(rot0)
    obj["b"][0] = [1.0]
    with pytest.raises(ParseError):
        spectral_data_from_dict(obj)
    obj = spectral_data_to_dict(rot0)
    obj["b"][0] = [True, 0.0]
    with pytest.raises(ParseError):
        spectral_data_from_dict(obj)


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("not json at all")
    with pytest.raises(ParseError):
        load_spectral_data(path)


def test_load_rejects_wrong_shape(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([1, 2, 3]))
    with pytest.raises(ParseError):
        load_spectral_data(path)


def test_trajectory_writer(tmp_path, rot1):
    path = tmp_path / "traj.csv"
    state = FlowState.from_data(rot1)
    mon = monitors(state)
    with TrajectoryWriter(path, rot1.g) as writer:
        writer.write(state, mon, events=())
        writer.write(state, mon, events=[("projection", 0.1, 1e-12)])
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    assert header[0] == "t"
    for key in ("min_root_a_distance", "min_root_ab_distance",
                "min_sym_b_distance", "short_arc_length"):
        assert key in header
    assert "events" in header
    assert len(rows) == 3
    t_col = header.index("t")
    assert float(rows[1][t_col]) == 0.0
    assert "projection" in rows[2][header.index("events")]
