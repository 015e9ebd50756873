"""Grayscale image I/O and quality metrics.

Images are plain numpy arrays of shape (N, N), float64, row-major. Pixel
values are nominally in [0, 255] for file I/O but unconstrained internally;
quantization happens only when writing to disk.
"""

import math

import numpy as np

from .errors import PgmFormatError

PSNR_PEAK = 255.0


def as_image(a):
    """Coerce to a square float64 image array, checking finiteness."""
    z = np.asarray(a, dtype=np.float64)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise ValueError(f"image must be square 2-D, got shape {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError("image contains non-finite values")
    return z


def psnr(reference, test):
    """Peak signal-to-noise ratio in dB, with peak fixed at 255.

    Returns +inf when the images are identical (zero RMSE).
    """
    ref = np.asarray(reference, dtype=np.float64)
    tst = np.asarray(test, dtype=np.float64)
    if ref.shape != tst.shape:
        raise ValueError(f"dimension mismatch: {ref.shape} vs {tst.shape}")
    mse = np.mean((ref - tst) ** 2)
    if mse == 0.0:
        return math.inf
    return 20.0 * math.log10(PSNR_PEAK / math.sqrt(mse))


def _quantize(z):
    return np.clip(np.rint(np.asarray(z, dtype=np.float64)), 0, 255).astype(np.uint8)


class _PgmScanner:
    """Whitespace/comment-aware tokenizer over raw PGM bytes."""

    def __init__(self, data):
        self.data = data
        self.pos = 0

    def skip_separators(self):
        data, n = self.data, len(self.data)
        while self.pos < n:
            c = data[self.pos]
            if c in b" \t\r\n\f\v":
                self.pos += 1
            elif c == ord("#"):
                # comment runs to end of line
                while self.pos < n and data[self.pos] not in b"\r\n":
                    self.pos += 1
            else:
                return

    def token(self, what):
        self.skip_separators()
        start = self.pos
        data, n = self.data, len(self.data)
        while self.pos < n and data[self.pos] not in b" \t\r\n\f\v#":
            self.pos += 1
        if self.pos == start:
            raise PgmFormatError(f"expected {what}, found end of file", start)
        return data[start:self.pos], start

    def int_token(self, what):
        tok, start = self.token(what)
        try:
            return int(tok), start
        except ValueError:
            raise PgmFormatError(f"expected integer {what}, got {tok!r}", start) from None


def read_pgm(path):
    """Read a P2 (ASCII) or P5 (binary) PGM with maxval 255 into an image."""
    with open(path, "rb") as fh:
        data = fh.read()
    sc = _PgmScanner(data)
    magic, off = sc.token("magic number")
    if magic not in (b"P2", b"P5"):
        raise PgmFormatError(f"unsupported magic {magic!r}, want P2 or P5", off)
    width, _ = sc.int_token("width")
    height, _ = sc.int_token("height")
    maxval, off_max = sc.int_token("maxval")
    if width <= 0 or height <= 0:
        raise PgmFormatError(f"bad dimensions {width}x{height}", off_max)
    if maxval != 255:
        raise PgmFormatError(f"maxval {maxval} unsupported, want 255", off_max)
    count = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the payload
        if sc.pos >= len(data) or data[sc.pos] not in b" \t\r\n\f\v":
            raise PgmFormatError("missing whitespace before binary payload", sc.pos)
        start = sc.pos + 1
        if len(data) - start < count:
            raise PgmFormatError(
                f"truncated payload: need {count} bytes, have {len(data) - start}",
                len(data),
            )
        pix = np.frombuffer(data[start:start + count], dtype=np.uint8)
    else:
        vals = np.empty(count, dtype=np.float64)
        for i in range(count):
            v, off = sc.int_token("pixel value")
            if not 0 <= v <= 255:
                raise PgmFormatError(f"pixel value {v} out of range [0,255]", off)
            vals[i] = v
        pix = vals
    img = pix.astype(np.float64).reshape(height, width)
    if width != height:
        raise ValueError(f"only square images are supported, got {width}x{height}")
    return img


def write_pgm(path, image, binary=True):
    """Write an image as PGM, clamping and rounding values into [0, 255]."""
    z = np.asarray(image, dtype=np.float64)
    if z.ndim != 2:
        raise ValueError("image must be 2-D")
    q = _quantize(z)
    h, w = q.shape
    header = f"{'P5' if binary else 'P2'}\n{w} {h}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        if binary:
            fh.write(q.tobytes())
        else:
            lines = [" ".join(str(v) for v in row) for row in q]
            fh.write(("\n".join(lines) + "\n").encode("ascii"))
