"""Post-processing of warped noise sequences: degradation blending and
latent-resolution downsampling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .fields import LANE_DEGRADE, NoiseField, RngStream


@dataclass(frozen=True)
class NoiseSequence:
    """An ordered, uniformly-sized stack of noise frames plus provenance."""

    frames: tuple
    seed: int = 0
    provenance: tuple = ()

    def __post_init__(self):
        frames = tuple(self.frames)
        if not frames:
            raise InvalidArgumentError("sequence must be nonempty")
        shape = frames[0].values.shape
        if any(f.values.shape != shape for f in frames):
            raise InvalidArgumentError("all frames must share dimensions")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @classmethod
    def from_array(cls, values: np.ndarray, seed: int = 0,
                   provenance=()) -> "NoiseSequence":
        """Build from a (F, C, H, W) array."""
        values = np.asarray(values, dtype=np.float32)
        if values.ndim != 4:
            raise InvalidArgumentError("expected a (F, C, H, W) array")
        return cls(tuple(NoiseField(v) for v in values), seed=seed,
                   provenance=provenance)

    def to_array(self) -> np.ndarray:
        return np.stack([f.values for f in self.frames], axis=0)

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def channels(self) -> int:
        return self.frames[0].channels

    @property
    def height(self) -> int:
        return self.frames[0].height

    @property
    def width(self) -> int:
        return self.frames[0].width


def degrade(seq: NoiseSequence, gamma: float, rng: RngStream) -> NoiseSequence:
    """Blend the sequence with fresh white noise at level gamma in [0, 1].

    out = ((1 - gamma) * q + gamma * fresh) / sqrt((1 - gamma)^2 + gamma^2),
    which keeps unit variance for any gamma. gamma=0 is the bit-exact
    identity; gamma=1 is fully fresh noise.
    """
    if not (0.0 <= gamma <= 1.0) or not np.isfinite(gamma):
        raise InvalidArgumentError("gamma must lie in [0, 1]")
    if gamma == 0.0:
        return NoiseSequence(seq.frames, seed=seq.seed,
                             provenance=seq.provenance + ("degrade:0.0",))
    norm = np.sqrt((1.0 - gamma) ** 2 + gamma ** 2)
    out = []
    n_pix = seq.height * seq.width
    pix = np.arange(n_pix, dtype=np.uint64)
    for t, frame in enumerate(seq.frames):
        planes = np.empty_like(frame.values)
        for c in range(seq.channels):
            zeta = rng.normal(t, pix, 0, channel=c, lane=LANE_DEGRADE)
            blended = ((1.0 - gamma) * frame.values[c].ravel()
                       + gamma * zeta) / norm
            planes[c] = blended.reshape(seq.height, seq.width)
        out.append(NoiseField(planes))
    return NoiseSequence(out, seed=seq.seed,
                         provenance=seq.provenance + (f"degrade:{gamma}",))


def downsample_to_latent(seq: NoiseSequence, spatial: int,
                         temporal: int) -> NoiseSequence:
    """Downsample to latent resolution, preserving unit variance.

    Temporal: keep every `temporal`-th frame starting at frame 0. Spatial:
    mean-pool s x s blocks and scale by s (= sqrt of the pool area), so the
    pooled average of unit-variance noise stays unit variance.
    """
    if spatial < 1 or temporal < 1:
        raise InvalidArgumentError("factors must be >= 1")
    if seq.height % spatial or seq.width % spatial:
        raise InvalidArgumentError(
            f"dims {seq.height}x{seq.width} not divisible by spatial={spatial}")
    kept = seq.frames[::temporal]
    if spatial == 1:
        out = kept
    else:
        hh, ww = seq.height // spatial, seq.width // spatial
        out = []
        for frame in kept:
            v = frame.values.reshape(seq.channels, hh, spatial, ww, spatial)
            pooled = v.astype(np.float64).mean(axis=(2, 4)) * spatial
            out.append(NoiseField(pooled.astype(np.float32)))
    return NoiseSequence(out, seed=seq.seed,
                         provenance=seq.provenance
                         + (f"latent:{spatial}x{temporal}",))
