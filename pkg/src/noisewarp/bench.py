"""Wall-time scaling benchmark for the warp kernel."""

from __future__ import annotations

import json
import platform
import statistics
import time

import numpy as np

from .errors import InvalidArgumentError
from .fields import DensityField, RngStream, quantize_flow, sample_white_noise
from .synth import camera_flow
from .warp import derive_backward_flow, warp_next_frame


def bench_warp(sizes, frames: int = 30, warmup: int = 3,
               flow_kind: str = "zoom", seed: int = 0) -> dict:
    """Median per-frame warp wall time per resolution plus the log-log slope
    of time vs pixel count."""
    if not sizes:
        raise InvalidArgumentError("need at least one size")
    magnitude = 1.02 if flow_kind == "zoom" else (
        2.0 if flow_kind == "pan" else 0.02)
    state = {}
    for size in sizes:
        fwd = quantize_flow(camera_flow(flow_kind, magnitude, size, size, 2)[0])
        bwd = quantize_flow(derive_backward_flow(fwd))
        state[size] = {
            "fwd": fwd, "bwd": bwd, "rng": RngStream(seed),
            "noise": sample_white_noise(size, size, 1, seed),
            "density": DensityField.ones(size, size), "times": [],
        }
    # Interleave sizes round-robin so transient machine load perturbs all
    # resolutions alike instead of biasing whichever ran during a busy burst.
    for i in range(warmup + frames):
        for size in sizes:
            st = state[size]
            t0 = time.perf_counter()
            st["noise"], st["density"] = warp_next_frame(
                st["noise"], st["density"], st["fwd"], st["bwd"], st["rng"],
                frame=i + 1)
            dt = time.perf_counter() - t0
            if i >= warmup:
                st["times"].append(dt)
    results = [{"size": size, "pixels": size * size,
                "median_s": statistics.median(state[size]["times"]),
                "mean_s": statistics.fmean(state[size]["times"]),
                "min_s": min(state[size]["times"]),
                "frames": frames}
               for size in sizes]

    log_n = np.log([r["pixels"] for r in results])
    log_t = np.log([r["median_s"] for r in results])
    slope = float(np.polyfit(log_n, log_t, 1)[0]) if len(results) > 1 else float("nan")
    return {
        "machine": {
            "platform": platform.platform(),
            "python": platform.python_version(),
            "processor": platform.processor(),
        },
        "flow_kind": flow_kind,
        "warmup": warmup,
        "results": results,
        "loglog_slope": slope,
    }


def bench_report_ldjson(report: dict) -> str:
    """One JSON line per resolution, then one summary line."""
    lines = [json.dumps({"kind": "timing", **r, "machine": report["machine"],
                         "flow_kind": report["flow_kind"]})
             for r in report["results"]]
    lines.append(json.dumps({"kind": "summary",
                             "loglog_slope": report["loglog_slope"],
                             "machine": report["machine"]}))
    return "\n".join(lines)
