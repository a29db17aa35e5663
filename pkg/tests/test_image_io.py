import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from phgrms.image_io import GrayImage, PgmError, read_pgm, synth_image, write_pgm

images = st.tuples(st.integers(1, 12), st.integers(1, 12)).flatmap(
    lambda hw: arrays(np.uint8, hw).map(GrayImage)
)


def test_ascii_decode_by_hand():
    img = read_pgm(b"P2\n2 2\n255\n0 64 128 255")
    assert (img.width, img.height) == (2, 2)
    assert img.tolist() == [0, 64, 128, 255]


def test_binary_single_pixel_bytes():
    data = write_pgm(GrayImage.from_list(1, 1, [200]))
    assert data == b"P5\n1 1\n255\n\xc8"


def test_p5_body_length():
    data = write_pgm(GrayImage(np.zeros((3, 2), dtype=np.uint8)))
    assert data.startswith(b"P5\n2 3\n255\n")
    assert len(data) - len(b"P5\n2 3\n255\n") == 6


def test_ascii_header():
    data = write_pgm(GrayImage.from_list(2, 1, [7, 9]), ascii=True)
    assert data.startswith(b"P2\n2 1\n255\n")
    assert read_pgm(data).tolist() == [7, 9]


@settings(max_examples=60)
@given(images)
def test_roundtrip_both_encodings(img):
    assert read_pgm(write_pgm(img)) == img
    assert read_pgm(write_pgm(img, ascii=True)) == img


def test_comments_and_whitespace_runs():
    data = b"P2 # magic\n# a comment line\n 3\t\t1 \n# before maxval\n255\n1\n2   3\n"
    assert read_pgm(data).tolist() == [1, 2, 3]
    binary = b"P5\n# c\n2 1\n# d\n255\n\x01\x02"
    assert read_pgm(binary).tolist() == [1, 2]


def test_p5_body_may_start_with_whitespace_octet():
    # 0x0a as the first pixel must not be eaten as header whitespace
    assert read_pgm(b"P5\n2 1\n255\n\n\x20").tolist() == [10, 32]


def test_small_maxval_not_rescaled():
    assert read_pgm(b"P2\n2 1\n15\n3 15\n").tolist() == [3, 15]


@pytest.mark.parametrize("data, fragment", [
    (b"P2\n1 1\n65535\n0\n", "16-bit PGM unsupported"),
    (b"P6\n1 1\n255\n\x00\x00\x00", "not a PGM"),
    (b"", "not a PGM"),
    (b"P5\n2 2\n255\n\x00\x01", "truncated"),
    (b"P2\n2 2\n255\n1 2 3", "truncated"),
    (b"P2\n2\n", "malformed header"),
    (b"P2\nx 2\n255\n", "malformed header"),
    (b"P2\n0 2\n255\n", "zero dimension"),
    (b"P2\n1 1\n10\n11\n", "exceeds maxval"),
    (b"P2\n1 1\n255\nabc\n", "malformed pixel"),
])
def test_rejections(data, fragment):
    with pytest.raises(PgmError, match=fragment):
        read_pgm(data)


def test_gray_image_invariants():
    with pytest.raises(ValueError):
        GrayImage(np.array([[256]]))
    with pytest.raises(ValueError):
        GrayImage(np.zeros((0, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        GrayImage.from_list(2, 2, [1, 2, 3])
    img = GrayImage.from_list(2, 1, [1, 2])
    with pytest.raises(ValueError):
        img.pixels[0, 0] = 5


def test_synth_gradient():
    assert synth_image(4, 1, seed=123, kind="gradient").tolist() == [0, 85, 170, 255]
    assert synth_image(1, 3, kind="gradient").tolist() == [0, 0, 0]


def test_synth_checker():
    img = synth_image(16, 16, seed=3, kind="checker")
    assert (img.pixels[:8, :8] == 64).all()
    assert (img.pixels[:8, 8:] == 192).all()
    assert (img.pixels[8:, :8] == 192).all()


@pytest.mark.parametrize("kind", ["gradient", "checker", "smooth-random"])
def test_synth_deterministic(kind):
    assert synth_image(33, 17, 9, kind) == synth_image(33, 17, 9, kind)


def test_smooth_random_is_box_mean_of_seeded_field():
    field = np.random.default_rng(4).integers(0, 256, size=(5, 6), dtype=np.int64)
    img = synth_image(6, 5, 4, "smooth-random")
    for r in range(5):
        for c in range(6):
            cells = field[max(0, r - 1):r + 2, max(0, c - 1):c + 2]
            expected = int(np.floor(cells.sum() / cells.size + 0.5))
            assert img.pixels[r, c] == expected
    assert synth_image(6, 5, 5, "smooth-random") != img


def test_synth_errors():
    with pytest.raises(ValueError):
        synth_image(0, 4)
    with pytest.raises(ValueError):
        synth_image(4, 4, kind="plasma")
