"""Bit-exact serialization: Middlebury .flo flows, GWTF noise containers,
and PNG visualizations."""

from __future__ import annotations

import io
import struct

import numpy as np
from PIL import Image

from .errors import FormatError
from .fields import FlowField, NoiseField
from .post import NoiseSequence

FLO_MAGIC = 202021.25
CONTAINER_MAGIC = b"GWTF"
CONTAINER_VERSION = 1


def write_flo(flow: FlowField) -> bytes:
    """Middlebury .flo: float32 magic, int32 width/height, then interleaved
    (dx, dy) float32 pairs, row-major, all little-endian."""
    h, w = flow.shape
    header = struct.pack("<fii", FLO_MAGIC, w, h)
    inter = np.empty((h, w, 2), dtype="<f4")
    inter[..., 0] = flow.dx
    inter[..., 1] = flow.dy
    return header + inter.tobytes()


def read_flo(data: bytes) -> FlowField:
    if len(data) < 12:
        raise FormatError(f"flo header truncated: {len(data)} < 12 bytes")
    magic, w, h = struct.unpack("<fii", data[:12])
    if magic != FLO_MAGIC:
        raise FormatError(f"bad flo magic {magic!r}")
    if w <= 0 or h <= 0:
        raise FormatError(f"nonpositive flo dimensions {w}x{h}")
    expected = 12 + h * w * 8
    if len(data) != expected:
        raise FormatError(
            f"flo payload size mismatch: expected {expected} bytes, got {len(data)}")
    inter = np.frombuffer(data, dtype="<f4", offset=12).reshape(h, w, 2)
    return FlowField(inter[..., 0], inter[..., 1])


def write_noise_container(seq: NoiseSequence) -> bytes:
    """GWTF container: magic, u32 version, u32 F/C/H/W, u64 seed, then
    F*C*H*W float32 values, frame-major row-major little-endian."""
    header = CONTAINER_MAGIC + struct.pack(
        "<IIIIIQ", CONTAINER_VERSION, len(seq), seq.channels, seq.height,
        seq.width, seq.seed & 0xFFFFFFFFFFFFFFFF)
    payload = seq.to_array().astype("<f4").tobytes()
    return header + payload


def read_noise_container(data: bytes) -> NoiseSequence:
    header_size = 32
    if len(data) < header_size:
        raise FormatError(f"container header truncated: {len(data)} < {header_size}")
    if data[:4] != CONTAINER_MAGIC:
        raise FormatError(f"bad container magic {data[:4]!r}")
    version, f, c, h, w, seed = struct.unpack("<IIIIIQ", data[4:header_size])
    if version != CONTAINER_VERSION:
        raise FormatError(f"unsupported container version {version}")
    if min(f, c, h, w) < 1:
        raise FormatError(f"nonpositive container dimensions F={f} C={c} H={h} W={w}")
    expected = header_size + f * c * h * w * 4
    if len(data) != expected:
        raise FormatError(
            f"container payload size mismatch: expected {expected} bytes, "
            f"got {len(data)}")
    values = np.frombuffer(data, dtype="<f4", offset=header_size)
    return NoiseSequence.from_array(values.reshape(f, c, h, w), seed=seed)


def _hsv_to_rgb(hue, sat, val):
    i = np.floor(hue * 6.0).astype(np.int64) % 6
    f = hue * 6.0 - np.floor(hue * 6.0)
    p = val * (1.0 - sat)
    q = val * (1.0 - f * sat)
    t = val * (1.0 - (1.0 - f) * sat)
    r = np.choose(i, [val, q, p, p, t, val])
    g = np.choose(i, [t, val, val, q, p, p])
    b = np.choose(i, [p, p, t, val, val, q])
    return np.stack([r, g, b], axis=-1)


def visualize_flow(flow: FlowField) -> Image.Image:
    """HSV color-wheel encoding: hue = direction, saturation = magnitude
    normalized to the 99th percentile; zero flow renders neutral white."""
    dx = np.asarray(flow.dx, dtype=np.float64)
    dy = np.asarray(flow.dy, dtype=np.float64)
    mag = np.hypot(dx, dy)
    scale = np.percentile(mag, 99)
    sat = np.clip(mag / scale, 0.0, 1.0) if scale > 0 else np.zeros_like(mag)
    hue = (np.arctan2(dy, dx) / (2.0 * np.pi)) % 1.0
    rgb = _hsv_to_rgb(hue, sat, np.ones_like(sat))
    return Image.fromarray((rgb * 255.0).round().astype(np.uint8), mode="RGB")


def visualize_noise(field: NoiseField, channel: int = 0) -> Image.Image:
    """Grayscale mapping of [-3, 3] to [0, 255]; value 0 maps to 128."""
    v = np.clip(field.values[channel].astype(np.float64), -3.0, 3.0)
    gray = np.round((v + 3.0) / 6.0 * 255.0).astype(np.uint8)
    return Image.fromarray(gray, mode="L")


def image_to_png_bytes(img: Image.Image) -> bytes:
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()
