"""Reference noise generators for the comparison harness.

fixed/random noise are the no-warping oracles; the interpolation generators
(bilinear, bicubic, nearest) transport noise along flows with standard image
resampling and no Gaussianity correction, so they accumulate spatial
correlation by design.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .fields import FlowField, NoiseField, sample_white_noise
from .post import NoiseSequence

INTERP_MODES = ("bilinear", "bicubic", "nearest")


def fixed_noise(height: int, width: int, channels: int, frames: int,
                seed: int) -> NoiseSequence:
    """One white-noise frame replicated across the whole sequence."""
    frame = sample_white_noise(height, width, channels, seed)
    return NoiseSequence([frame] * frames, seed=seed, provenance=("fixed",))


def random_noise(height: int, width: int, channels: int, frames: int,
                 seed: int) -> NoiseSequence:
    """Independently sampled white noise per frame."""
    out = [sample_white_noise(height, width, channels, seed, frame=t)
           for t in range(frames)]
    return NoiseSequence(out, seed=seed, provenance=("random",))


def _clip_gather(plane: np.ndarray, yy: np.ndarray, xx: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    return plane[np.clip(yy, 0, h - 1), np.clip(xx, 0, w - 1)]


def _resample_nearest(plane, sx, sy):
    return _clip_gather(plane, np.round(sy).astype(np.int64),
                        np.round(sx).astype(np.int64))


def _resample_bilinear(plane, sx, sy):
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    fx = sx - x0
    fy = sy - y0
    v00 = _clip_gather(plane, y0, x0)
    v01 = _clip_gather(plane, y0, x0 + 1)
    v10 = _clip_gather(plane, y0 + 1, x0)
    v11 = _clip_gather(plane, y0 + 1, x0 + 1)
    top = v00 * (1 - fx) + v01 * fx
    bot = v10 * (1 - fx) + v11 * fx
    return top * (1 - fy) + bot * fy


def _catmull_rom_weights(t: np.ndarray) -> list[np.ndarray]:
    # Cubic convolution kernel with a = -0.5 (Catmull-Rom).
    a = -0.5
    w = []
    for off in (-1, 0, 1, 2):
        d = np.abs(t - off)
        w.append(np.where(
            d <= 1, (a + 2) * d ** 3 - (a + 3) * d ** 2 + 1,
            np.where(d < 2, a * d ** 3 - 5 * a * d ** 2 + 8 * a * d - 4 * a, 0.0)))
    return w


def _resample_bicubic(plane, sx, sy):
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    wx = _catmull_rom_weights(sx - x0)
    wy = _catmull_rom_weights(sy - y0)
    out = np.zeros(sx.shape)
    for j, wyj in enumerate(wy):
        row = np.zeros(sx.shape)
        for i, wxi in enumerate(wx):
            row += wxi * _clip_gather(plane, y0 + j - 1, x0 + i - 1)
        out += wyj * row
    return out


_RESAMPLERS = {
    "nearest": _resample_nearest,
    "bilinear": _resample_bilinear,
    "bicubic": _resample_bicubic,
}


def interp_warped_noise(init: NoiseField, flows, mode: str) -> NoiseSequence:
    """Transport noise by backward resampling: frame t+1 gathers frame t at
    (x - flow). No variance or Gaussianity correction is applied."""
    if mode not in INTERP_MODES:
        raise InvalidArgumentError(f"unknown interpolation mode {mode!r}")
    resample = _RESAMPLERS[mode]
    h, w = init.height, init.width
    ys, xs = np.mgrid[0:h, 0:w].astype(np.float64)
    frames = [init]
    prev = init.values.astype(np.float64)
    for flow in flows:
        if flow.shape != (h, w):
            raise InvalidArgumentError("flow dimensions differ from noise")
        sx = xs - np.asarray(flow.dx, dtype=np.float64)
        sy = ys - np.asarray(flow.dy, dtype=np.float64)
        cur = np.stack([resample(prev[c], sx, sy) for c in range(init.channels)])
        frames.append(NoiseField(cur.astype(np.float32)))
        prev = cur
    return NoiseSequence(frames, provenance=(f"interp:{mode}",))
