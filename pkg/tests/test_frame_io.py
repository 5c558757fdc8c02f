import logging

import numpy as np
import pytest

from nlcast.frame_io import FrameSequence, Y4MError, assemble_gops, load_y4m, write_y4m


def _y4m_420(path, w, h, n, payload_bytes=None):
    lum = w * h
    full = lum + 2 * (w // 2) * (h // 2)
    data = [f"YUV4MPEG2 W{w} H{h} F30:1 C420\n".encode()]
    for k in range(n):
        data.append(b"FRAME\n")
        frame = bytes([(k * 10 + j) % 256 for j in range(lum)]) + bytes([128]) * (full - lum)
        data.append(frame if payload_bytes is None or k < n - 1 else frame[:payload_bytes])
    path.write_bytes(b"".join(data))


def test_load_420_header_and_luma(tmp_path):
    p = tmp_path / "a.y4m"
    _y4m_420(p, 16, 16, 2)
    seq = load_y4m(p)
    assert (seq.width, seq.height, len(seq)) == (16, 16, 2)
    assert seq.frame_rate == (30, 1)
    assert seq.frames[1][0, 0] == 10 and seq.frames[0][0, 5] == 5


def test_max_frames(tmp_path):
    p = tmp_path / "a.y4m"
    _y4m_420(p, 16, 16, 2)
    assert len(load_y4m(p, max_frames=1)) == 1


def test_truncated_payload(tmp_path):
    p = tmp_path / "a.y4m"
    _y4m_420(p, 16, 16, 2, payload_bytes=192)
    with pytest.raises(Y4MError, match="expected 384 bytes, got 192"):
        load_y4m(p)


@pytest.mark.parametrize("header, token", [
    (b"YUV4MPEG2 Wxx H16 F30:1\n", "Wxx"),
    (b"YUV4MPEG2 W16 H16 F30\n", "F30"),
    (b"YUV4MPEG2 W16 H16 C444\n", "C444"),
    (b"MPEG W16 H16\n", "MPEG"),
])
def test_malformed_header_names_token(tmp_path, header, token):
    p = tmp_path / "bad.y4m"
    p.write_bytes(header)
    with pytest.raises(Y4MError, match=token):
        load_y4m(p)


def test_round_trip_integer_frames(tmp_path, rng):
    frames = [rng.integers(0, 256, (8, 12)).astype(float) for _ in range(3)]
    seq = FrameSequence(12, 8, frames)
    write_y4m(seq, tmp_path / "o.y4m")
    back = load_y4m(tmp_path / "o.y4m")
    assert len(back) == 3
    for x, y in zip(frames, back.frames):
        np.testing.assert_array_equal(x, y)


def test_write_clamps_and_rounds(tmp_path, rng):
    f = rng.uniform(-20, 280, (4, 4))
    f[0, 0], f[0, 1], f[0, 2] = 255.7, -2.0, 99.4
    write_y4m(FrameSequence(4, 4, [f]), tmp_path / "c.y4m")
    back = load_y4m(tmp_path / "c.y4m").frames[0]
    assert back[0, 0] == 255 and back[0, 1] == 0 and back[0, 2] == 99
    np.testing.assert_array_equal(back, np.clip(np.rint(f), 0, 255))


def test_write_empty_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_y4m(FrameSequence(4, 4, []), tmp_path / "e.y4m")


def test_mismatched_frame_shape():
    with pytest.raises(ValueError):
        FrameSequence(4, 4, [np.zeros((4, 4)), np.zeros((4, 5))])


def _seq(n):
    return FrameSequence(2, 2, [np.full((2, 2), float(k)) for k in range(n)])


@pytest.mark.parametrize("n, expected", [(8, [0, 4]), (7, [0]), (3, [])])
def test_assemble_gops(n, expected, caplog):
    with caplog.at_level(logging.WARNING):
        gops = assemble_gops(_seq(n), 4)
    assert [g.origin_index for g in gops] == expected
    if n % 4:
        assert caplog.records
    flat = [f for g in gops for f in g.data]
    for k, f in enumerate(flat):
        assert f[0, 0] == k


def test_gop_size_must_be_positive():
    with pytest.raises(ValueError):
        assemble_gops(_seq(4), 0)
