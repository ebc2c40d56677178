import numpy as np
import pytest

from gradsr import PgmParseError, load_pgm, read_pgm, save_pgm, write_pgm


def test_load_plain_p2():
    img = load_pgm(b"P2 2 2 255 0 128 255 64")
    assert img.shape == (2, 2)
    assert img.tolist() == [[0.0, 128.0], [255.0, 64.0]]


def test_load_plain_with_comments_and_newlines():
    data = b"P2\n# a comment\n2 2\n# another\n255\n0 128\n255 64\n"
    assert load_pgm(data).tolist() == [[0.0, 128.0], [255.0, 64.0]]


def test_load_raw_p5():
    data = b"P5\n3 2\n255\n" + bytes([0, 1, 2, 250, 251, 252])
    img = load_pgm(data)
    assert img.shape == (2, 3)
    assert img[1].tolist() == [250.0, 251.0, 252.0]


def test_save_emits_raw_p5():
    data = save_pgm(np.array([[0.0, 128.0], [255.0, 64.0]]))
    assert data == b"P5\n2 2\n255\n" + bytes([0, 128, 255, 64])


def test_plain_roundtrip_normalizes_whitespace():
    plain = b"P2   2  2\n 255 0 128 255 64"
    assert save_pgm(load_pgm(plain)) == b"P5\n2 2\n255\n" + bytes([0, 128, 255, 64])


def test_raw_roundtrip_is_byte_identity():
    data = b"P5\n4 3\n255\n" + bytes(range(12))
    assert save_pgm(load_pgm(data)) == data


def test_roundtrip_identity_on_integer_images():
    rng = np.random.default_rng(42)
    img = rng.integers(0, 256, size=(17, 9)).astype(np.float64)
    assert np.array_equal(load_pgm(save_pgm(img)), img)


def test_save_clamps_out_of_range():
    assert save_pgm(np.array([[300.0]]))[-1] == 255
    assert save_pgm(np.array([[-5.0]]))[-1] == 0


def test_save_rounds_half_up():
    assert save_pgm(np.array([[127.5]]))[-1] == 128
    assert save_pgm(np.array([[0.5]]))[-1] == 1
    assert save_pgm(np.array([[1.4]]))[-1] == 1


def test_color_magic_rejected():
    with pytest.raises(PgmParseError, match="magic"):
        load_pgm(b"P3 1 1 255 0 0 0")


def test_maxval_above_255_rejected():
    with pytest.raises(PgmParseError, match="maxval"):
        load_pgm(b"P2 1 1 65535 0")


def test_zero_width_rejected():
    with pytest.raises(PgmParseError, match="width"):
        load_pgm(b"P2 0 2 255")


def test_truncated_header():
    with pytest.raises(PgmParseError, match="maxval"):
        load_pgm(b"P2 2 2")


def test_raw_payload_size_mismatch():
    with pytest.raises(PgmParseError, match="pixels"):
        load_pgm(b"P5\n2 2\n255\n" + bytes([1, 2, 3]))


def test_plain_payload_count_mismatch():
    with pytest.raises(PgmParseError, match="pixels"):
        load_pgm(b"P2 2 2 255 0 1 2")


def test_plain_non_integer_sample():
    with pytest.raises(PgmParseError, match="pixels"):
        load_pgm(b"P2 1 1 255 abc")


def test_sample_above_maxval():
    with pytest.raises(PgmParseError, match="pixels"):
        load_pgm(b"P2 1 1 100 200")


def test_file_helpers(tmp_path):
    img = np.array([[1.0, 2.0], [3.0, 4.0]])
    path = tmp_path / "img.pgm"
    write_pgm(path, img)
    assert np.array_equal(read_pgm(path), img)
