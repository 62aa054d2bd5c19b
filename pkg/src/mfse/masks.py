"""MFSM mask-file format.

The binary contract between the engine and any external mask estimator:

    offset  size  field
    0       4     magic "MFSM"
    4       4     version (u32, = 1)
    8       4     num_bins K (u32)
    12      4     num_frames L (u32)
    16      4     sample_rate (u32)
    20      4     frame_len (u32)
    24      4     hop (u32)
    28      ...   speech plane, K*L float32
    ...     ...   noise plane, K*L float32

All integers and floats little-endian, no padding.  Planes are
frame-major: all K bins of frame 0, then frame 1, and so on.  Values
must lie in [0, 1]; float32 keeps files half the size of float64 and
still exceeds the precision any estimator delivers.
"""

import struct

import numpy as np

from .spp import MaskGrid
from .stft import StftConfig

MAGIC = b"MFSM"
VERSION = 1
_HEADER = struct.Struct("<4sIIIIII")
HEADER_SIZE = _HEADER.size


class MaskFileError(ValueError):
    """Malformed, truncated or inconsistent MFSM file."""


def write_masks(path, masks, cfg):
    """Write a mask grid to an MFSM file.

    The grid must match the STFT geometry of ``cfg`` and hold values in
    [0, 1]; both are checked before anything is written.
    """
    speech = np.asarray(masks.speech, dtype=np.float64)
    noise = np.asarray(masks.noise, dtype=np.float64)
    if speech.shape != noise.shape or speech.ndim != 2:
        raise MaskFileError("mask planes must share a 2-D shape")
    num_bins, num_frames = speech.shape
    if num_bins != cfg.num_bins:
        raise MaskFileError("mask bin count does not match STFT config")
    for plane in (speech, noise):
        if not np.all(np.isfinite(plane)) or plane.min() < 0.0 or plane.max() > 1.0:
            raise MaskFileError("mask out of range")
    header = _HEADER.pack(
        MAGIC, VERSION, num_bins, num_frames, cfg.sample_rate, cfg.frame_len, cfg.hop
    )
    with open(path, "wb") as fh:
        fh.write(header)
        # frame-major: transpose to (L, K) before the row-major dump
        fh.write(np.ascontiguousarray(speech.T, dtype="<f4").tobytes())
        fh.write(np.ascontiguousarray(noise.T, dtype="<f4").tobytes())


def read_masks(path, expect_cfg=None):
    """Read and validate an MFSM file.

    Returns ``(MaskGrid, StftConfig)`` where the config summarizes the
    header geometry (default window).  With ``expect_cfg`` given, every
    header field must additionally match that configuration exactly, so
    any header corruption relative to the expected geometry is rejected.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < HEADER_SIZE:
        raise MaskFileError("truncated header")
    magic, version, num_bins, num_frames, rate, frame_len, hop = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise MaskFileError("bad magic")
    if version != VERSION:
        raise MaskFileError(f"unsupported version {version}")
    if min(num_bins, num_frames, rate, frame_len, hop) < 1:
        raise MaskFileError("non-positive header field")
    if hop > frame_len or frame_len % hop != 0:
        raise MaskFileError("inconsistent frame_len/hop")
    if num_bins != frame_len // 2 + 1:
        raise MaskFileError("bin count inconsistent with frame_len")
    if expect_cfg is not None:
        expected = (
            expect_cfg.num_bins,
            expect_cfg.sample_rate,
            expect_cfg.frame_len,
            expect_cfg.hop,
        )
        if (num_bins, rate, frame_len, hop) != expected:
            raise MaskFileError("header does not match expected STFT config")
    plane_bytes = 4 * num_bins * num_frames
    expected_size = HEADER_SIZE + 2 * plane_bytes
    if len(raw) < expected_size:
        raise MaskFileError("truncated payload")
    if len(raw) > expected_size:
        raise MaskFileError("trailing data after payload")
    payload = np.frombuffer(raw, dtype="<f4", offset=HEADER_SIZE)
    speech = payload[: num_bins * num_frames].reshape(num_frames, num_bins).T
    noise = payload[num_bins * num_frames :].reshape(num_frames, num_bins).T
    for plane in (speech, noise):
        if not np.all(np.isfinite(plane)) or plane.min() < 0.0 or plane.max() > 1.0:
            raise MaskFileError("mask out of range")
    cfg = StftConfig(sample_rate=rate, frame_len=frame_len, hop=hop)
    grid = MaskGrid(speech.astype(np.float64), noise.astype(np.float64))
    return grid, cfg
