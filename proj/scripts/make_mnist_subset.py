#!/usr/bin/env python3
"""Write the bundled MNIST subset as IDX files.

Source: the `mnist` npm package (MIT, 10,000 test-set digits stored as
per-digit JSON arrays of 784 floats in [0,1]). Usage:

    npm pack mnist && tar xzf mnist-*.tgz
    python3 scripts/make_mnist_subset.py package/src/digits data/mnist-subset
"""
import json
import random
import struct
import sys
from pathlib import Path

TRAIN = 5000
EVAL = 1000


def write_idx(path, images, labels):
    with open(path / "images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(images), 28, 28))
        for img in images:
            f.write(bytes(min(255, max(0, round(v * 255))) for v in img))
    with open(path / "labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))


def main():
    src, dst = Path(sys.argv[1]), Path(sys.argv[2])
    samples = []
    for digit in range(10):
        flat = json.loads((src / f"{digit}.json").read_text())["data"]
        for i in range(0, len(flat), 784):
            samples.append((flat[i:i + 784], digit))
    random.Random(20221).shuffle(samples)
    for name, part in (("train", samples[:TRAIN]), ("eval", samples[TRAIN:TRAIN + EVAL])):
        out = dst / name
        out.mkdir(parents=True, exist_ok=True)
        write_idx(out, [s for s, _ in part], [l for _, l in part])


if __name__ == "__main__":
    main()
