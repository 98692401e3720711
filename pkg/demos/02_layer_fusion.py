"""Weighted layer fusion and frame alignment.
==========================================

Frozen speech encoders expose one feature matrix per transformer layer.
Downstream heads consume a single matrix: a learnable convex combination
of the layers (weights summing to 1). This script fuses a synthetic layer
stack, then aligns and concatenates the result onto a faster frame grid,
the way a waveform-domain encoder would consume it.
"""

import numpy as np

from diarsep import FeatureStack, align_frames, concat_features, normalize_weights, weighted_sum
from diarsep.features import FeatureMatrix

rng = np.random.default_rng(1)

# 12 layers x 500 frames (10 s at 50 Hz) x 16 dims
stack = FeatureStack(rng.standard_normal((12, 500, 16)).astype(np.float32), frame_rate=50.0)

# -- softmax turns free logits into convex weights ----------------------------

logits = np.zeros(12)
logits[3] = 2.0  # pretend training favored layer 3
alpha = normalize_weights(logits)
print("layer weights:", np.round(alpha, 4))
print("sum:", alpha.sum())

fused = weighted_sum(stack, alpha)
print(f"fused matrix: {fused.n_frames} frames x {fused.dim} dims at {fused.frame_rate} Hz")

# sanity: a one-hot weight vector selects a single layer exactly
one_hot = np.zeros(12)
one_hot[3] = 1.0
assert np.array_equal(weighted_sum(stack, one_hot).data, stack.data[3])
print("one-hot weights reproduce layer 3 bit-exactly")

# -- aligning 50 Hz features to a 1000 Hz encoder grid ------------------------

aligned = align_frames(fused, 10_000)  # e.g. 10 s of latent frames at 1 kHz
print(f"\naligned by replication: {fused.n_frames} -> {aligned.n_frames} frames "
      f"(each row repeated {aligned.n_frames // fused.n_frames}x)")

# -- concatenation onto a latent representation -------------------------------

latent = FeatureMatrix(rng.standard_normal((10_000, 64)).astype(np.float32), 1000.0)
joined = concat_features(latent, aligned)
print(f"latent {latent.dim} dims + features {aligned.dim} dims -> {joined.dim} dims")
assert np.array_equal(joined.data[:, :64], latent.data)
assert np.array_equal(joined.data[:, 64:], aligned.data)
print("slicing the halves back out reproduces both inputs")
