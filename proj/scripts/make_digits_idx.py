#!/usr/bin/env python3
"""Build the committed handwritten-digit fixture in IDX format.

Source: scikit-learn's 8x8 digits dataset (1797 images). Each source digit is
upsampled to 28x28 and expanded into four deterministic variants (identity plus
three one-pixel shifts), giving 6000 training and 1000 test samples with
disjoint source images. Rerunning this script reproduces the files byte for
byte.
"""

import struct
import sys
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits

TRAIN_SAMPLES_PER_CLASS = 600
TEST_SAMPLES_PER_CLASS = 100
TEST_SOURCE_PER_CLASS = 25
MAX_TRAIN_SOURCE_PER_CLASS = 150
OUT = Path(__file__).resolve().parent.parent / "data"


def upsample(img8: np.ndarray) -> np.ndarray:
    """8x8 grayscale (0..16) -> 28x28 bytes (0..255), bilinear."""
    x = np.arange(28) * (8 - 1) / (28 - 1)
    i0 = np.clip(np.floor(x).astype(int), 0, 6)
    frac = x - i0
    rows = img8[i0][:, i0]
    r1 = img8[np.minimum(i0 + 1, 7)][:, i0]
    c1 = img8[i0][:, np.minimum(i0 + 1, 7)]
    rc = img8[np.minimum(i0 + 1, 7)][:, np.minimum(i0 + 1, 7)]
    fy = frac[:, None]
    fx = frac[None, :]
    out = (
        rows * (1 - fy) * (1 - fx)
        + r1 * fy * (1 - fx)
        + c1 * (1 - fy) * fx
        + rc * fy * fx
    )
    return np.clip(out * (255.0 / 16.0), 0, 255).astype(np.uint8)


VARIANT_FNS = [
    lambda im: im,
    lambda im: np.roll(im, 1, axis=1),   # right
    lambda im: np.roll(im, 1, axis=0),   # down
    lambda im: np.roll(im, -1, axis=1),  # left
    lambda im: np.roll(im, -1, axis=0),  # up (only used when sources run short)
]


def expand(sources, count):
    """`count` samples from `sources` by cycling variants over the sources."""
    out = []
    for i in range(count):
        variant = VARIANT_FNS[i // len(sources)]
        out.append(variant(sources[i % len(sources)]))
    return out


def write_idx(images: np.ndarray, labels: np.ndarray, img_path: Path, lbl_path: Path):
    n, rows, cols = images.shape
    with open(img_path, "wb") as f:
        f.write(struct.pack(">iiii", 0x803, n, rows, cols))
        f.write(images.tobytes())
    with open(lbl_path, "wb") as f:
        f.write(struct.pack(">ii", 0x801, n))
        f.write(labels.astype(np.uint8).tobytes())


def main():
    digits = load_digits()
    by_class = {c: np.where(digits.target == c)[0] for c in range(10)}
    for c, idx in by_class.items():
        if len(idx) < TEST_SOURCE_PER_CLASS + 100:
            sys.exit(f"class {c}: only {len(idx)} source digits")

    rng = np.random.default_rng(20240813)
    train_imgs, train_lbls, test_imgs, test_lbls = [], [], [], []
    for c in range(10):
        idx = by_class[c].copy()
        rng.shuffle(idx)
        test_src = [upsample(digits.images[j]) for j in idx[:TEST_SOURCE_PER_CLASS]]
        n_train_src = min(MAX_TRAIN_SOURCE_PER_CLASS, len(idx) - TEST_SOURCE_PER_CLASS)
        train_src = [
            upsample(digits.images[j])
            for j in idx[TEST_SOURCE_PER_CLASS : TEST_SOURCE_PER_CLASS + n_train_src]
        ]
        train_imgs += expand(train_src, TRAIN_SAMPLES_PER_CLASS)
        train_lbls += [c] * TRAIN_SAMPLES_PER_CLASS
        test_imgs += expand(test_src, TEST_SAMPLES_PER_CLASS)
        test_lbls += [c] * TEST_SAMPLES_PER_CLASS

    order = rng.permutation(len(train_imgs))
    train = np.stack(train_imgs)[order]
    train_y = np.array(train_lbls)[order]
    order = rng.permutation(len(test_imgs))
    test = np.stack(test_imgs)[order]
    test_y = np.array(test_lbls)[order]

    OUT.mkdir(exist_ok=True)
    write_idx(train, train_y, OUT / "digits-train-images-idx3-ubyte", OUT / "digits-train-labels-idx1-ubyte")
    write_idx(test, test_y, OUT / "digits-test-images-idx3-ubyte", OUT / "digits-test-labels-idx1-ubyte")
    print(f"wrote {len(train)} train / {len(test)} test samples to {OUT}")


if __name__ == "__main__":
    main()
