import math

import numpy as np
import pytest

from patchlr.errors import PgmFormatError
from patchlr.image import psnr, read_pgm, write_pgm


def test_psnr_identical_is_infinite():
    z = np.arange(16.0).reshape(4, 4)
    assert math.isinf(psnr(z, z))


def test_psnr_maximal_uniform_error_is_zero_db():
    a = np.zeros((4, 4))
    b = np.full((4, 4), 255.0)
    assert psnr(a, b) == pytest.approx(0.0, abs=1e-12)


def test_psnr_unit_error():
    # 20*log10(255/1), evaluated independently
    a = np.zeros((8, 8))
    b = np.ones((8, 8))
    assert psnr(a, b) == pytest.approx(20.0 * math.log10(255.0), rel=1e-12)


def test_psnr_symmetry():
    rng = np.random.default_rng(0)
    a = rng.uniform(0, 255, (6, 6))
    b = rng.uniform(0, 255, (6, 6))
    assert psnr(a, b) == pytest.approx(psnr(b, a), rel=1e-15)


def test_psnr_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        psnr(np.zeros((3, 3)), np.zeros((4, 4)))


def test_pgm_roundtrip_binary(tmp_path):
    z = np.arange(9.0).reshape(3, 3) * 20
    path = tmp_path / "a.pgm"
    write_pgm(path, z)
    back = read_pgm(path)
    assert np.array_equal(back, z)


def test_pgm_ascii_and_binary_agree(tmp_path):
    rng = np.random.default_rng(1)
    z = np.rint(rng.uniform(0, 255, (5, 5)))
    p2, p5 = tmp_path / "a2.pgm", tmp_path / "a5.pgm"
    write_pgm(p2, z, binary=False)
    write_pgm(p5, z, binary=True)
    assert np.array_equal(read_pgm(p2), read_pgm(p5))


def test_pgm_clamps_and_rounds(tmp_path):
    z = np.array([[255.7, -3.0], [1.4, 1.5]])
    path = tmp_path / "c.pgm"
    write_pgm(path, z)
    back = read_pgm(path)
    assert back[0, 0] == 255.0
    assert back[0, 1] == 0.0
    assert back[1, 0] == 1.0


def test_pgm_roundtrip_is_stable_after_quantization(tmp_path):
    rng = np.random.default_rng(2)
    z = rng.uniform(-10, 300, (7, 7))
    path = tmp_path / "q.pgm"
    write_pgm(path, z)
    once = read_pgm(path)
    write_pgm(path, once)
    assert np.array_equal(read_pgm(path), once)


def test_pgm_comments_are_skipped(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P2 # magic\n# a comment line\n2 2\n255\n1 2\n3 4\n")
    assert np.array_equal(read_pgm(path), np.array([[1.0, 2.0], [3.0, 4.0]]))


@pytest.mark.parametrize(
    "payload, fragment",
    [
        (b"P3\n2 2\n255\n0 0 0 0", "magic"),
        (b"P2\n2 2\n128\n0 0 0 0", "maxval"),
        (b"P5\n2 2\n255\nab", "truncated"),
        (b"P2\n2 2\n255\n0 1 2", "end of file"),
        (b"P2\n2 2\n255\n0 1 2 999", "out of range"),
    ],
)
def test_pgm_malformed_inputs(tmp_path, payload, fragment):
    path = tmp_path / "bad.pgm"
    path.write_bytes(payload)
    with pytest.raises(PgmFormatError, match=fragment) as err:
        read_pgm(path)
    assert err.value.offset >= 0


def test_pgm_rejects_non_square(tmp_path):
    path = tmp_path / "rect.pgm"
    path.write_bytes(b"P2\n3 2\n255\n0 0 0 0 0 0\n")
    with pytest.raises(ValueError, match="square"):
        read_pgm(path)
