"""Composition helpers shared by the CLI and the HTTP service."""

from __future__ import annotations

import time

from .errors import InvalidArgumentError
from .fields import RngStream, quantize_flow, sample_white_noise
from .post import NoiseSequence, degrade, downsample_to_latent
from .synth import SceneSpec, render_scene_flows
from .warp import derive_backward_flow, warp_sequence


def flows_from_scene(scene: SceneSpec):
    return render_scene_flows(scene)


def run_warp_pipeline(flows, seed: int, channels: int = 1,
                      gamma: float = 0.0, spatial_down: int = 1,
                      temporal_down: int = 1,
                      collect_timings: bool = False):
    """warp -> optional degrade -> optional latent downsample.

    Returns (NoiseSequence, per-frame warp seconds or None).
    """
    flows = list(flows)
    if not flows:
        raise InvalidArgumentError("need at least one flow field")
    h, w = flows[0].shape
    for fl in flows:
        if fl.shape != (h, w):
            raise InvalidArgumentError("flow fields must share dimensions")

    rng = RngStream(seed)
    init = sample_white_noise(h, w, channels, seed)
    pairs = [(quantize_flow(f), quantize_flow(derive_backward_flow(f)))
             for f in flows]

    frames = []
    timings = [] if collect_timings else None
    gen = warp_sequence(init, pairs, rng)
    frames.append(next(gen))
    for _ in pairs:
        t0 = time.perf_counter()
        frames.append(next(gen))
        if collect_timings:
            timings.append(time.perf_counter() - t0)

    seq = NoiseSequence(frames, seed=seed, provenance=("warp",))
    if gamma > 0.0:
        seq = degrade(seq, gamma, RngStream(seed ^ 0x5DEECE66D))
    if spatial_down > 1 or temporal_down > 1:
        seq = downsample_to_latent(seq, spatial_down, temporal_down)
    return seq, timings
