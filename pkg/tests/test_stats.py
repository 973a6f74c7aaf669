import json

import numpy as np
import pytest

from noisewarp import FlowField, RngStream, sample_white_noise
from noisewarp.baselines import random_noise
from noisewarp.errors import DegenerateInputError, InvalidArgumentError
from noisewarp.stats import (
    BatteryConfig,
    battery_passes,
    frame_report,
    gaussianity_battery,
    ks_test,
    morans_i,
    reports_to_ldjson,
    reports_to_table,
    temporal_tracking_score,
)
from noisewarp.warp import warp_sequence_list


def brute_force_morans_i(x):
    # direct double loop over the rook adjacency, as an oracle
    x = np.asarray(x, dtype=np.float64)
    h, w = x.shape
    z = x - x.mean()
    num = 0.0
    w_sum = 0.0
    for i in range(h):
        for j in range(w):
            for di, dj in ((0, 1), (0, -1), (1, 0), (-1, 0)):
                ii, jj = i + di, j + dj
                if 0 <= ii < h and 0 <= jj < w:
                    num += z[i, j] * z[ii, jj]
                    w_sum += 1.0
    return (x.size / w_sum) * num / np.sum(z * z)


def test_morans_i_matches_brute_force():
    gen = np.random.default_rng(0)
    x = gen.standard_normal((10, 12))
    idx, _ = morans_i(x)
    assert idx == pytest.approx(brute_force_morans_i(x), abs=1e-12)


def test_morans_i_checkerboard_is_minus_one():
    board = np.indices((12, 12)).sum(axis=0) % 2
    idx, p = morans_i(board.astype(np.float64))
    assert idx == pytest.approx(-1.0)
    assert p < 1e-6


def test_morans_i_smooth_gradient_is_strongly_positive():
    grad = np.tile(np.linspace(0, 1, 16), (16, 1))
    idx, p = morans_i(grad)
    assert idx > 0.8
    assert p < 1e-6


def test_morans_i_null_calibration():
    # rejection rate at alpha=0.05 on true white noise stays in [0.02, 0.09]
    rejects = sum(
        morans_i(sample_white_noise(64, 64, 1, seed=s).values[0])[1] <= 0.05
        for s in range(400))
    assert 0.02 <= rejects / 400 <= 0.09


def test_morans_i_permutation_p_agrees_on_structure():
    board = np.indices((12, 12)).sum(axis=0) % 2
    _, p = morans_i(board.astype(np.float64), permutations=199)
    assert p <= 0.01


def test_morans_i_rejects_degenerate():
    with pytest.raises(DegenerateInputError):
        morans_i(np.ones((16, 16)))
    with pytest.raises(InvalidArgumentError):
        morans_i(np.zeros((3, 3)))


def test_ks_null_calibration():
    rejects = sum(
        ks_test(sample_white_noise(64, 64, 1, seed=s).values[0],
                rng=RngStream(0), frame=s)[1] <= 0.05
        for s in range(400))
    assert 0.02 <= rejects / 400 <= 0.09


def test_ks_rejects_uniform_sample():
    gen = np.random.default_rng(1)
    flat = gen.uniform(-1, 1, (64, 64))
    stat, p = ks_test(flat)
    assert p < 0.01


def test_ks_detects_constant_field():
    stat, p = ks_test(np.zeros((32, 32)))
    assert stat >= 0.5
    assert p < 1e-6


def test_ks_is_deterministic_and_keyed():
    x = sample_white_noise(64, 64, 1, seed=2).values[0]
    a = ks_test(x, rng=RngStream(7), frame=3)
    b = ks_test(x, rng=RngStream(7), frame=3)
    assert a == b
    assert a != ks_test(x, rng=RngStream(7), frame=4)


def test_ks_validates_sample_size():
    x = np.zeros((32, 32))
    with pytest.raises(InvalidArgumentError):
        ks_test(x, sample_size=10)
    with pytest.raises(InvalidArgumentError):
        ks_test(x, sample_size=5000)


def test_frame_report_fields_and_serialization():
    x = sample_white_noise(64, 64, 1, seed=0).values[0]
    r = frame_report(x, frame=3, channel=1, config=BatteryConfig())
    assert r.frame == 3 and r.channel == 1 and r.n_pixels == 4096
    doc = json.loads(r.to_json())
    assert doc["passed"] == r.passed
    assert doc["morans_p"] == r.morans_p


def test_battery_on_white_noise_sequence():
    seq = random_noise(64, 64, 1, 30, seed=10)
    reports = gaussianity_battery(seq)
    assert len(reports) == 30
    assert battery_passes(reports)
    # table and ldjson cover one row per report
    assert len(reports_to_table(reports).splitlines()) == 31
    assert len(reports_to_ldjson(reports).splitlines()) == 30


def test_battery_quota_boundary():
    seq = random_noise(64, 64, 1, 10, seed=0)
    reports = gaussianity_battery(seq)
    assert battery_passes(reports, quota=0.0)
    assert not battery_passes([], quota=0.5)


def test_tracking_score_perfect_for_exact_shift():
    # under an exact integer pan with nearest transport the score is 1
    from noisewarp.baselines import interp_warped_noise
    init = sample_white_noise(32, 32, 1, seed=5)
    flows = [FlowField(np.ones((32, 32)), np.zeros((32, 32)))] * 4
    seq = interp_warped_noise(init, flows, "nearest")
    assert temporal_tracking_score(seq, flows) == pytest.approx(1.0)


def test_tracking_score_near_zero_for_independent_noise():
    flows = [FlowField.zeros(64, 64)] * 4
    seq = random_noise(64, 64, 1, 5, seed=3)
    assert abs(temporal_tracking_score(seq, flows)) < 0.05


def test_tracking_score_high_for_warped_noise():
    from noisewarp.post import NoiseSequence
    from noisewarp.synth import camera_flow
    init = sample_white_noise(64, 64, 1, seed=12)
    flows = camera_flow("pan", (1.0, 0.0), 64, 64, 11)
    frames = warp_sequence_list(init, flows, RngStream(12))
    seq = NoiseSequence(frames)
    assert temporal_tracking_score(seq, flows) >= 0.7


def test_tracking_score_validates_lengths():
    seq = random_noise(64, 64, 1, 3, seed=0)
    with pytest.raises(InvalidArgumentError):
        temporal_tracking_score(seq, [FlowField.zeros(64, 64)])
