"""Regenerate the committed 128x128 PGM test fixture.

Crops scikit-image's bundled "brick" texture (strong patch self-similarity)
so the test suite itself needs no scikit-image dependency. Run from the
repo root:

    python3 tools/make_fixture.py
"""

import os

import numpy as np
import skimage.data

from patchlr.image import write_pgm

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "tests", "data", "texture128.pgm")


def main():
    brick = skimage.data.brick().astype(np.float64)
    crop = brick[256:384, 256:384]
    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    write_pgm(OUT, crop)
    print(f"wrote {os.path.normpath(OUT)} shape={crop.shape}")


if __name__ == "__main__":
    main()
