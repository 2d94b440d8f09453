#!/usr/bin/env python3
"""Build IDX image/label files from the 5000-sample MNIST subset bundled
with the mlxtend wheel (classes 1, 2 and 3 only).

    pip download mlxtend --no-deps -d /tmp/wheels
    python3 tools/make_digit_idx.py /tmp/wheels/mlxtend-*.whl data/digits
"""
import gzip
import io
import struct
import sys
import zipfile
from pathlib import Path

import numpy as np

CLASSES = (1, 2, 3)


def main(wheel: str, out_dir: str) -> None:
    with zipfile.ZipFile(wheel) as z:
        raw = z.read("mlxtend/data/data/mnist_5k.csv.gz")
    table = np.loadtxt(io.TextIOWrapper(gzip.open(io.BytesIO(raw))), delimiter=",")
    pixels = table[:, :-1].astype(np.uint8)
    labels = table[:, -1].astype(np.uint8)
    keep = np.isin(labels, CLASSES)
    pixels, labels = pixels[keep], labels[keep]

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n = len(labels)
    with open(out / "digits123-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, n, 28, 28))
        f.write(pixels.tobytes())
    with open(out / "digits123-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x00000801, n))
        f.write(labels.tobytes())
    print(f"wrote {n} images ({np.bincount(labels)[list(CLASSES)]} per class)")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
