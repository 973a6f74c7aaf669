"""Fundamental field types and the deterministic RNG contract.

All noise values are float32; accumulations elsewhere run in float64.
Field objects are immutable after construction (arrays are marked
non-writeable) and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

# Draw-space lanes keep the different consumers of the stream from ever
# colliding on the same counter: changing how many draws one consumer makes
# can never perturb another consumer's values.
LANE_FRESH = 0  # frame-0 sampling and orphan-pixel resampling
LANE_SPLIT = 1  # per-edge split draws inside the warp kernel
LANE_DEGRADE = 2  # degradation blending
LANE_AUX = 3  # subsampling / auditing helpers

_C1 = np.uint64(0x9E3779B97F4A7C15)
_C2 = np.uint64(0xBF58476D1CE4E5B9)
_C3 = np.uint64(0x94D049BB133111EB)
_C4 = np.uint64(0xD6E8FEB86659FD93)
_U32 = np.float64(1.0 / 4294967296.0)


def _mix64(x: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    """SplitMix64 finalizer: a bijective avalanche mix on 64-bit words."""
    with np.errstate(over="ignore"):  # wraparound is the point
        x = (x ^ (x >> np.uint64(30))) * _C2
        x = (x ^ (x >> np.uint64(27))) * _C3
        return x ^ (x >> np.uint64(31))


@dataclass(frozen=True)
class RngStream:
    """Counter-based standard normal stream addressed by (frame, pixel, draw).

    Identical (seed, coordinates) always produce identical values: draws are
    pure hashes of their address, so the number of workers or the order of
    generation cannot change any output.
    """

    seed: int

    def _words(self, frame, channel, lane, pixel, draw):
        with np.errstate(over="ignore"):
            base = _mix64(
                np.uint64(self.seed & 0xFFFFFFFFFFFFFFFF)
                ^ (np.uint64(frame) * _C1)
                ^ (np.uint64(channel) * _C3)
                ^ (np.uint64(lane) * _C4)
            )
            pixel = np.asarray(pixel, dtype=np.uint64)
            draw = np.asarray(draw, dtype=np.uint64)
            return _mix64(_mix64(base ^ (pixel * _C2)) ^ (draw * _C1) ^ _C4)

    def normal(self, frame, pixel, draw, channel=0, lane=LANE_FRESH):
        """Standard normal draws for broadcastable pixel/draw index arrays."""
        h = self._words(frame, channel, lane, pixel, draw)
        hi = (h >> np.uint64(32)).astype(np.float64)
        lo = (h & np.uint64(0xFFFFFFFF)).astype(np.float64)
        # Box-Muller; u1, u2 in (0, 1) so the log is finite.
        u1 = ((hi + 0.5) * _U32).astype(np.float32)
        u2 = ((lo + 0.5) * _U32).astype(np.float32)
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(np.float32(2.0 * np.pi) * u2)

    def uniform_indices(self, frame, count, upper, lane=LANE_AUX):
        """`count` deterministic indices in [0, upper), for subsampling."""
        if upper <= 0:
            raise InvalidArgumentError("upper bound must be positive")
        h = self._words(frame, 0, lane, np.arange(count, dtype=np.uint64), 0)
        return (h % np.uint64(upper)).astype(np.int64)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class NoiseField:
    """A single frame of noise: (channels, height, width) float32 values."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float32)
        if v.ndim == 2:
            v = v[None, :, :]
        if v.ndim != 3:
            raise InvalidArgumentError("noise values must be (C, H, W) or (H, W)")
        if v.shape[0] < 1 or v.shape[1] < 1 or v.shape[2] < 1:
            raise InvalidArgumentError("noise dimensions must be >= 1")
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError("noise values must be finite")
        object.__setattr__(self, "values", _freeze(v))

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> int:
        return self.values.shape[1]

    @property
    def width(self) -> int:
        return self.values.shape[2]


@dataclass(frozen=True)
class DensityField:
    """Per-pixel aggregated mass (paper-free reading: how many original
    noise pixels were merged into each location). Strictly positive."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise InvalidArgumentError("density must be a 2D grid")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise InvalidArgumentError("density entries must be finite and > 0")
        object.__setattr__(self, "values", _freeze(v))

    @classmethod
    def ones(cls, height: int, width: int) -> "DensityField":
        return cls(np.ones((height, width)))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class FlowField:
    """Per-pixel displacement map; destination = source + (dx, dy).

    Out-of-bounds destinations are permitted; dx/dy must be finite.
    """

    dx: np.ndarray
    dy: np.ndarray

    def __post_init__(self):
        dx = np.asarray(self.dx, dtype=np.float32)
        dy = np.asarray(self.dy, dtype=np.float32)
        if dx.ndim != 2 or dx.shape != dy.shape:
            raise InvalidArgumentError("dx/dy must be equal-shape 2D grids")
        if dx.shape[0] < 1 or dx.shape[1] < 1:
            raise InvalidArgumentError("flow dimensions must be >= 1")
        if not (np.all(np.isfinite(dx)) and np.all(np.isfinite(dy))):
            raise InvalidArgumentError("flow displacements must be finite")
        object.__setattr__(self, "dx", _freeze(dx))
        object.__setattr__(self, "dy", _freeze(dy))

    @classmethod
    def zeros(cls, height: int, width: int) -> "FlowField":
        return cls(np.zeros((height, width)), np.zeros((height, width)))

    @property
    def height(self) -> int:
        return self.dx.shape[0]

    @property
    def width(self) -> int:
        return self.dx.shape[1]

    @property
    def shape(self):
        return self.dx.shape

    def quantized_ints(self, dtype=np.int32):
        """Integer displacement arrays, quantizing (round half away from
        zero) if needed; cached on the instance."""
        cached = self.__dict__.get("_int_cache")
        if cached is None or cached[0].dtype != dtype:
            dx, dy = np.asarray(self.dx), np.asarray(self.dy)
            if not (np.all(dx == np.round(dx)) and np.all(dy == np.round(dy))):
                q = quantize_flow(self)
                dx, dy = q.dx, q.dy
            cached = (dx.astype(dtype), dy.astype(dtype))
            object.__setattr__(self, "_int_cache", cached)
        return cached


def sample_white_noise(height: int, width: int, channels: int, seed: int,
                       frame: int = 0) -> NoiseField:
    """i.i.d. standard normal field; deterministic for a fixed seed."""
    if height < 1 or width < 1 or channels < 1:
        raise InvalidArgumentError("dimensions must be >= 1")
    rng = RngStream(seed)
    pix = np.arange(height * width, dtype=np.uint64)
    planes = [
        rng.normal(frame, pix, 0, channel=c, lane=LANE_FRESH).reshape(height, width)
        for c in range(channels)
    ]
    return NoiseField(np.stack(planes, axis=0))


def quantize_flow(flow: FlowField) -> FlowField:
    """Round displacements to integers, half away from zero (sign-symmetric)."""
    def _round(a):
        return np.sign(a) * np.floor(np.abs(a) + 0.5)

    return FlowField(_round(np.asarray(flow.dx, dtype=np.float64)),
                     _round(np.asarray(flow.dy, dtype=np.float64)))
