"""The powerset class space: speaker subsets as classes.
====================================================

A segmentation model that tracks K speakers and up to two simultaneous
voices classifies each frame into one of 1 + K + K*(K-1)/2 classes:
silence, each single speaker, each speaker pair. This script walks the
codec between class indices and K-bit activity vectors.
"""

import numpy as np

from diarsep import build_space, decode_class, decode_frames, encode_label

# -- the catalog ------------------------------------------------------------

space = build_space(3)
print(f"K=3 speakers -> {space.n_classes} classes:")
for idx, members in enumerate(space.classes):
    label = " + ".join(f"speaker {m}" for m in members) or "silence"
    print(f"  class {idx}: {label}")

# -- encoding activity vectors ----------------------------------------------

print()
for bits in ([0, 0, 0], [0, 1, 0], [1, 0, 1]):
    print(f"activity {bits} -> class {encode_label(space, bits)}")

# Vectors with more than two active speakers are not classes; they project to
# the nearest class by Hamming distance, lowest index on ties:
print(f"activity [1, 1, 1] -> class {encode_label(space, [1, 1, 1])} "
      f"(= subset {space.classes[encode_label(space, [1, 1, 1])]})")

# -- decoding is the exact inverse on valid classes --------------------------

print()
for idx in range(space.n_classes):
    bits = decode_class(space, idx)
    assert encode_label(space, bits) == idx
print("decode -> encode is the identity on all classes")

# -- per-frame decoding of score matrices ------------------------------------

rng = np.random.default_rng(0)
scores = rng.standard_normal((6, space.n_classes))
activity = decode_frames(space, scores)
print("\nrandom 6-frame score matrix decodes to (rows sum to at most 2):")
print(activity)
