import os
from pathlib import Path

import numpy as np
import pytest

import skintrack as st

DATA = Path(os.environ.get("SKINTRACK_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


@pytest.fixture(scope="module")
def model():
    m, history = st.train(st.reference_training_set())
    assert len(history) == 200
    return m


def centred_block():
    img = np.zeros((240, 320, 3), dtype=np.uint8)
    img[:, :] = (200, 60, 40)
    img[115:125, 155:165] = (35, 126, 183)
    return img


def test_ppm_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, size=(7, 5, 3), dtype=np.uint8)
    assert np.array_equal(st.decode_ppm(st.encode_ppm(img)), img)
    st.write_ppm(tmp_path / "a.ppm", img)
    assert np.array_equal(st.read_ppm(tmp_path / "a.ppm"), img)
    with pytest.raises(st.ParseError, match="unsupported magic"):
        st.decode_ppm(b"P3\n1 1\n255\n0 0 0\n")


def test_segment_shapes_and_thresholds():
    uniform = np.full((4, 4, 3), 7, dtype=np.uint8)
    assert st.segment(uniform, 1).max() == 1
    rng = np.random.default_rng(1)
    noisy = rng.integers(0, 256, size=(4, 4, 3), dtype=np.uint8)
    labels = st.segment(noisy, 0)
    assert labels.shape == (4, 4) and labels.dtype == np.uint32
    assert sorted(labels.ravel()) == list(range(1, 17))
    with pytest.raises(st.ConfigError):
        st.segment(uniform, 257)


def test_reference_frame_matches_golden_count():
    frame = st.read_ppm(DATA / "reference_320x240.ppm")
    assert np.array_equal(frame, st.reference_frame())
    assert st.segment(frame).max() == 755
    fc = st.false_colour(st.segment(frame))
    assert len(np.unique(fc.reshape(-1, 3), axis=0)) == 755
    stats = st.region_stats(frame)
    assert sum(r["pixels"] for r in stats) == 320 * 240


def test_training_is_deterministic_and_accurate(model):
    again, _ = st.train(st.reference_training_set())
    assert again.params == model.params
    samples = st.reference_training_set()
    correct = sum(model.classify(r, g, b) == bool(t) for r, g, b, t in samples)
    assert correct / len(samples) >= 0.95
    assert 0.0 < model.forward(35, 126, 183) < 1.0


def test_model_json_round_trip(tmp_path, model):
    model.save(tmp_path / "m.json")
    loaded = st.Model.load(tmp_path / "m.json")
    assert loaded.params == model.params and loaded.rho == model.rho
    with pytest.raises(st.SchemaError, match="w_ih"):
        st.Model.loads('{"w_ih": [[0, 0, 0]]}')


def test_detect_centred_block(model):
    d = st.detect(centred_block(), model)
    assert d["centroid"] == (159.5, 119.5)
    assert d["skin_pixels"] == 100
    assert d["mask"].sum() == 100
    assert st.detect(centred_block(), model, rho=0.999999)["centroid"] is None


def test_controller_primitives():
    assert st.displacement(200, 150) == (40.0, 30.0)
    assert st.step(0, 0, 40.0, -3.0) == (1, 0)
    assert st.step(0, 0, 4.0, -4.0) == (0, 0)
    assert st.step(2, 0, 50.0, 0.0, limits=(-2, 2, -2, 2)) == (2, 0)


def test_tracking_static_offset(model):
    run = st.track_scenario(model, 30, offset=(40, 0))
    assert run["converged_at"] == 9
    assert run["final_pan"] == 9 and run["final_tilt"] == 0
    assert run["trace_csv"].startswith("frame,pan_steps,tilt_steps,mu_x,mu_y,dx,dy,skin_pixels\n")


def test_tracking_scripted_world(model):
    world = np.zeros((720, 960, 3), dtype=np.uint8)
    world[:, :] = (20, 90, 30)
    script = "frame,target_id,x,y\n0,1,600,420\n"
    run = st.track(world, script, model, 40)
    mu = run["rows"][-1]["centroid"]
    assert abs(mu[0] - 160) <= 8 and abs(mu[1] - 120) <= 8
