#!/usr/bin/env python3
"""Write a handwritten-digits dataset as MNIST-style IDX files.

Uses the scikit-learn bundled digits set (1797 8x8 grayscale images, all ten
classes), upscales each image 3x to 24x24, centers it on a 28x28 canvas, and
augments with one-pixel shifts so every class has enough samples for a
480/120 balanced split. Output is bit-compatible with the MNIST container
format (magic 2051/2049, big-endian headers), so real MNIST files can be
substituted via the same CLI flags.
"""
import argparse
import struct
import sys
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits


def upscale(img8: np.ndarray) -> np.ndarray:
    # 0..16 -> 0..255, 8x8 -> 24x24 nearest, centered on 28x28.
    big = np.kron(img8, np.ones((3, 3)))
    big = np.clip(big * (255.0 / 16.0), 0, 255).astype(np.uint8)
    canvas = np.zeros((28, 28), dtype=np.uint8)
    canvas[2:26, 2:26] = big
    return canvas


def shifted(img: np.ndarray, dy: int, dx: int) -> np.ndarray:
    out = np.zeros_like(img)
    ys, yd = (dy, 0) if dy >= 0 else (0, -dy)
    xs, xd = (dx, 0) if dx >= 0 else (0, -dx)
    h = 28 - abs(dy)
    w = 28 - abs(dx)
    out[ys:ys + h, xs:xs + w] = img[yd:yd + h, xd:xd + w]
    return out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="data", help="output directory")
    ap.add_argument("--prefix", default="digits", help="filename prefix")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    digits = load_digits()
    rng = np.random.default_rng(args.seed)

    images = []
    labels = []
    shifts = [(0, 0), (0, 1), (1, 0), (-1, 0), (0, -1)]
    for img8, label in zip(digits.images, digits.target):
        base = upscale(img8)
        for dy, dx in shifts:
            images.append(shifted(base, dy, dx))
            labels.append(int(label))

    order = rng.permutation(len(images))
    images = [images[i] for i in order]
    labels = [labels[i] for i in order]

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    images_path = out / f"{args.prefix}-images-idx3-ubyte"
    labels_path = out / f"{args.prefix}-labels-idx1-ubyte"

    with open(images_path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(img.tobytes())
    with open(labels_path, "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))

    counts = np.bincount(labels, minlength=10)
    print(f"wrote {images_path} and {labels_path}: {len(images)} images")
    print("per-class counts:", counts.tolist())
    return 0


if __name__ == "__main__":
    sys.exit(main())
