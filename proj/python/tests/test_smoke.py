# Copyright 2026 the maskface authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""End-to-end smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import maskface


def synthetic_face(cx=100.0, cy=90.0, scale=55.0, tilt_deg=0.0):
    """68 plausible iBUG-ordered landmarks for a synthetic upright face.

    The six mask anchors (28, 8, 2, 14, 5, 11) form a similarity image of
    the built-in template anchor layout, so a mask fits with ~0 residual.
    """
    jaw_knots = {
        0: (-0.93, -0.35),
        2: (-0.884, -0.0553),
        5: (-0.676, 0.638),
        8: (0.0, 0.95),
        11: (0.676, 0.638),
        14: (0.884, -0.0553),
        16: (0.93, -0.35),
    }
    local = [(0.0, 0.0)] * 68
    knots = sorted(jaw_knots)
    for a, b in zip(knots, knots[1:]):  # jaw, piecewise linear between knots
        for i in range(a, b + 1):
            t = (i - a) / (b - a)
            local[i] = (
                jaw_knots[a][0] + t * (jaw_knots[b][0] - jaw_knots[a][0]),
                jaw_knots[a][1] + t * (jaw_knots[b][1] - jaw_knots[a][1]),
            )
    for i in range(5):  # brows
        local[17 + i] = (-0.55 + 0.1 * i, -0.55)
        local[22 + i] = (0.15 + 0.1 * i, -0.55)
    for i in range(4):  # nose bridge, 27 at top
        local[27 + i] = (0.0, -0.5 + 0.15 * i)
    for i in range(5):  # nostril row
        local[31 + i] = (-0.15 + 0.075 * i, 0.0)
    for k, (ex, ey) in enumerate([(-0.3, -0.35), (0.3, -0.35)]):  # eyes
        for i in range(6):
            ang = i * math.pi / 3.0
            local[36 + 6 * k + i] = (ex + 0.08 * math.cos(ang), ey + 0.05 * math.sin(ang))
    for i in range(12):  # outer mouth
        ang = i * math.pi / 6.0
        local[48 + i] = (0.25 * math.cos(ang), 0.55 + 0.12 * math.sin(ang))
    for i in range(8):  # inner mouth
        ang = i * math.pi / 4.0
        local[60 + i] = (0.15 * math.cos(ang), 0.55 + 0.06 * math.sin(ang))

    tau = math.radians(tilt_deg)
    pts = np.empty((68, 2))
    for i, (x, y) in enumerate(local):
        xr = x * math.cos(tau) + y * math.sin(tau)
        yr = y * math.cos(tau) - x * math.sin(tau)
        pts[i] = (cx + scale * xr, cy + scale * yr)
    return pts


def test_tilt_bins():
    assert maskface.tilt(synthetic_face(tilt_deg=0.0))["bin"] == "FRONT"
    assert maskface.tilt(synthetic_face(tilt_deg=-25.0))["bin"] == "LEFT"
    assert maskface.tilt(synthetic_face(tilt_deg=25.0))["bin"] == "RIGHT"
    angle = maskface.tilt(synthetic_face(tilt_deg=10.0))["angle_deg"]
    assert angle == pytest.approx(10.0, abs=1e-9)


def test_landmark_count_is_ibug():
    assert synthetic_face().shape == (68, 2)


def test_apply_mask_changes_pixels():
    image = np.full((200, 200, 3), 180, dtype=np.uint8)
    result = maskface.apply_mask(image, synthetic_face(), mask_type="n95")
    assert result["status"] == "MASKED"
    assert result["mask_type"] == "n95"
    assert result["tilt_bin"] == "FRONT"
    assert result["fit_residual_px"] < 4.0
    out = result["image"]
    assert out.shape == image.shape and out.dtype == np.uint8
    assert (out != image).any()


def test_apply_mask_rejects_unknown_type():
    image = np.zeros((64, 64, 3), dtype=np.uint8)
    with pytest.raises(maskface.MaskfaceError):
        maskface.apply_mask(image, synthetic_face(), mask_type="scarf")


def test_distance_and_loss():
    assert maskface.sq_l2([1.0, 0.0], [0.0, 1.0]) == pytest.approx(2.0)
    assert maskface.triplet_loss(0.5, 0.9, alpha=0.2) == pytest.approx(0.0)
    assert maskface.triplet_loss(0.5, 0.4, alpha=0.2) == pytest.approx(0.3)


def test_mine_triplets_semi_hard():
    vecs = np.array(
        [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]], dtype=np.float64
    )
    triplets = maskface.mine_triplets(
        vecs, ["p", "p", "q", "q"], ["s0", "s1", "s2", "s3"], mode="semi_hard"
    )
    # One triplet per valid (anchor, positive) pair, both identities.
    assert triplets == [(0, 1, 2), (1, 0, 3), (2, 3, 0), (3, 2, 1)]


def test_train_toy_unit_norm_and_trace():
    rng = np.random.default_rng(3)
    identities, sources, rows = [], [], []
    for ident in range(4):
        center = rng.normal(size=6)
        for img in range(4):
            rows.append(center + 0.05 * rng.normal(size=6))
            identities.append(f"id{ident}")
            sources.append(f"id{ident}/img{img}")
    result = maskface.train_toy(
        np.asarray(rows), identities, sources, embed_dim=4, epochs=12, batch_size=8
    )
    assert len(result["loss_trace"]) == 12
    norms = np.linalg.norm(result["embeddings"], axis=1)
    assert np.allclose(norms, 1.0, atol=1e-6)


def test_calibrate_and_evaluate_separable():
    distances = np.array([0.1, 0.2, 0.15, 3.0, 3.5, 3.2, 3.8, 2.9, 3.1, 3.3] * 4)
    labels = [True, True, True, False, False, False, False, False, False, False] * 4
    result = maskface.calibrate_and_evaluate(distances, labels, n_folds=4)
    assert result["report"]["max_accuracy"] == pytest.approx(1.0)
    # Smallest grid threshold attaining max accuracy; inclusive compare
    # means t = 0.2 already classifies every pair correctly.
    assert result["threshold_max_acc"] == pytest.approx(0.2)


def test_cluster_two_identities():
    vecs = np.array(
        [[1.0, 0.0], [0.999, 0.0447], [0.0, 1.0], [0.0447, 0.999]], dtype=np.float64
    )
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    result = maskface.cluster(
        vecs, ["a", "a", "b", "b"], ["a/0", "a/1", "b/0", "b/1"], threshold=0.5
    )
    assert len(result["clusters"]) == 2
    assert result["purity"] == pytest.approx(1.0)
    assert result["mean_clusters_per_identity"] == pytest.approx(1.0)
