"""Next-frame noise warping.

One warp step transports a noise field and its density field along a pair of
integer flows. Pixels moving forward and landing in bounds contribute
"contraction" edges; destination pixels left uncovered pull a source back
along the backward flow ("expansion" edges). Each source's noise value is
split into as many independent sub-Gaussians as it has outgoing edges, each
destination aggregates its incoming mass-weighted splits, and the result is
renormalized to unit variance. Destinations reached by neither mechanism are
orphans: they get fresh white noise and density 1.

The transfer graph is held densely (one contraction slot per source pixel,
out-of-bounds pushes routed to a sink) so the hot path runs as sequential
array passes; per-frame cost is O(H*W) plus a sort of the expansion edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import InvalidArgumentError
from .fields import (
    LANE_FRESH,
    LANE_SPLIT,
    DensityField,
    FlowField,
    NoiseField,
    RngStream,
    quantize_flow,
)

# Below this accumulated variance the renormalization would blow up; treat
# the destination as an orphan instead.
S_UNDERFLOW = 1e-20


def derive_backward_flow(forward: FlowField) -> FlowField:
    """Cheap backward flow: per-pixel negation of the forward displacements."""
    return FlowField(-np.asarray(forward.dx), -np.asarray(forward.dy))


@dataclass(frozen=True)
class TransferGraph:
    """Bipartite edge set from previous-frame pixels to next-frame pixels.

    Contraction edges are stored densely: `c_dst[v]` is v's destination, or
    the sink index H*W when the push leaves the domain (`c_valid[v]` False).
    Expansion edges are the sparse arrays `e_src -> e_dst`. Each edge carries
    a draw index fixing which split sample it consumes: a source's
    contraction edge takes draw 0, its expansion edges take subsequent draws
    in destination row-major order (`e_draw`).
    """

    height: int
    width: int
    c_valid: np.ndarray      # (H*W,) bool: contraction edge lands in bounds
    c_dst: np.ndarray        # (H*W,) int: contraction destination or sink H*W
    e_src: np.ndarray        # expansion edge sources (flat pixel index)
    e_dst: np.ndarray        # expansion edge destinations
    e_draw: np.ndarray       # draw index of each expansion edge in its source
    deg: np.ndarray          # (H*W,) out-degree per source pixel
    orphans: np.ndarray      # flat destination indices with no incoming edge

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(self.c_valid)) + self.e_src.size

    @cached_property
    def edges(self):
        """Compressed (src, dst, draw) arrays, contraction edges first."""
        c_src = np.nonzero(self.c_valid)[0]
        src = np.concatenate([c_src, self.e_src])
        dst = np.concatenate([self.c_dst[c_src], self.e_dst])
        draw = np.concatenate([np.zeros(c_src.size, dtype=np.int64),
                               self.e_draw])
        return src, dst, draw


@lru_cache(maxsize=8)
def _flat_coords(h: int, w: int, dtype=np.int32):
    ys, xs = np.divmod(np.arange(h * w, dtype=dtype), dtype(w))
    ys.flags.writeable = False
    xs.flags.writeable = False
    return ys, xs


def build_transfer_graph(forward: FlowField, backward: FlowField) -> TransferGraph:
    """Construct the contraction/expansion edge set for one warp step."""
    if forward.shape != backward.shape:
        raise InvalidArgumentError("forward/backward flow dimensions differ")
    h, w = forward.shape
    n = h * w
    idx_t = np.int32 if n < 2 ** 31 - 1 else np.int64
    fdx, fdy = forward.quantized_ints(idx_t)
    bdx, bdy = backward.quantized_ints(idx_t)
    ys, xs = _flat_coords(h, w, idx_t)

    # Contraction: each source pushes to source + forward flow; out-of-bounds
    # pushes are routed to the sink slot n.
    cx = xs + fdx.ravel()
    cy = ys + fdy.ravel()
    c_valid = (cx >= 0) & (cx < w) & (cy >= 0) & (cy < h)
    c_dst = np.where(c_valid, cy * idx_t(w) + cx, idx_t(n))

    covered = np.zeros(n + 1, dtype=bool)
    covered[c_dst] = True

    # Expansion: each uncovered destination pulls one source back along the
    # backward flow, if that source is in bounds.
    e_cand = np.nonzero(~covered[:n])[0]
    ex = xs[e_cand] + bdx.ravel()[e_cand]
    ey = ys[e_cand] + bdy.ravel()[e_cand]
    e_in = (ex >= 0) & (ex < w) & (ey >= 0) & (ey < h)
    e_dst = e_cand[e_in]
    e_src = ey[e_in] * w + ex[e_in]

    deg = c_valid.astype(np.int64)
    deg += np.bincount(e_src, minlength=n)

    # Rank expansion edges within their source group; e_src is already in
    # destination row-major order, so a stable sort keeps that ordering.
    order = np.argsort(e_src, kind="stable")
    grouped = e_src[order]
    first = np.ones(grouped.size, dtype=bool)
    first[1:] = grouped[1:] != grouped[:-1]
    group_start = np.maximum.accumulate(np.where(first, np.arange(grouped.size), 0))
    rank_sorted = np.arange(grouped.size) - group_start
    e_rank = np.empty(grouped.size, dtype=np.int64)
    e_rank[order] = rank_sorted
    e_draw = c_valid[e_src].astype(np.int64) + e_rank

    reached = covered[:n].copy()
    reached[e_dst] = True
    orphans = np.nonzero(~reached)[0]

    assert int(c_valid.sum()) + e_src.size <= 2 * n
    return TransferGraph(h, w, c_valid, c_dst, e_src, e_dst, e_draw, deg,
                         orphans)


def split_gaussian(value: float, count: int, z: np.ndarray) -> np.ndarray:
    """Split one value into `count` pieces that sum exactly to it.

    When `value` is N(0,1) and `z` holds `count` independent standard normal
    draws, each output is N(0, 1/count) and the outputs are mutually
    independent.
    """
    if count < 1:
        raise InvalidArgumentError("count must be >= 1")
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (count,):
        raise InvalidArgumentError("need exactly `count` normal draws")
    if count == 1:
        return np.asarray([float(value)])
    s = z.sum()
    return value / count + (z - s / count) / np.sqrt(count)


def warp_next_frame(prev_noise: NoiseField, prev_density: DensityField,
                    forward: FlowField, backward: FlowField, rng: RngStream,
                    frame: int = 1,
                    graph: TransferGraph | None = None):
    """One warp step: returns (next_noise, next_density).

    If the input pixels are i.i.d. N(0,1), so are the output pixels; density
    tracks how much source mass was aggregated into each destination.
    `frame` indexes the RNG draw space of this step.
    """
    h, w = prev_noise.height, prev_noise.width
    if (prev_density.height, prev_density.width) != (h, w) or forward.shape != (h, w):
        raise InvalidArgumentError("noise/density/flow dimensions differ")
    if graph is None:
        graph = build_transfer_graph(forward, backward)
    elif (graph.height, graph.width) != (h, w):
        raise InvalidArgumentError("graph dimensions differ from fields")

    n = h * w
    p = prev_density.values.ravel()
    safe_deg = np.maximum(graph.deg, 1).astype(np.float64)

    # Per-source contraction weight (zero where the push left the domain) and
    # per-expansion-edge weight.
    alpha_c = np.where(graph.c_valid, p / safe_deg, 0.0)
    e_deg = safe_deg[graph.e_src]
    alpha_e = p[graph.e_src] / e_deg

    p_next = (np.bincount(graph.c_dst, weights=alpha_c, minlength=n + 1)[:n]
              + np.bincount(graph.e_dst, weights=alpha_e, minlength=n))
    s_acc = (np.bincount(graph.c_dst, weights=alpha_c * alpha_c / safe_deg,
                         minlength=n + 1)[:n]
             + np.bincount(graph.e_dst, weights=alpha_e * alpha_e / e_deg,
                           minlength=n))
    orphan = s_acc <= S_UNDERFLOW
    p_next[orphan] = 1.0

    inv_sqrt_s = np.zeros(n)
    np.divide(1.0, np.sqrt(s_acc, where=~orphan, out=np.ones(n)),
              where=~orphan, out=inv_sqrt_s)
    orphan_idx = np.nonzero(orphan)[0]

    # Sources with a single outgoing edge pass their value through exactly;
    # only multi-edge sources consume split draws.
    multi = graph.deg > 1
    mc_src = np.nonzero(multi & graph.c_valid)[0]   # their contraction edges
    me_mask = multi[graph.e_src]                    # their expansion edges
    me_src = graph.e_src[me_mask]
    me_draw = graph.e_draw[me_mask]

    out = np.empty((prev_noise.channels, h, w), dtype=np.float32)
    for c in range(prev_noise.channels):
        q = prev_noise.values[c].ravel().astype(np.float64)
        x_c = q.copy()
        x_e = q[graph.e_src]
        if mc_src.size or me_src.size:
            z_c = rng.normal(frame, mc_src, 0, channel=c,
                             lane=LANE_SPLIT).astype(np.float64)
            z_e = rng.normal(frame, me_src, me_draw, channel=c,
                             lane=LANE_SPLIT).astype(np.float64)
            s_sum = np.bincount(mc_src, weights=z_c, minlength=n)
            s_sum += np.bincount(me_src, weights=z_e, minlength=n)
            d_c = safe_deg[mc_src]
            x_c[mc_src] = q[mc_src] / d_c + (z_c - s_sum[mc_src] / d_c) / np.sqrt(d_c)
            d_e = e_deg[me_mask]
            x_e[me_mask] = q[me_src] / d_e + (z_e - s_sum[me_src] / d_e) / np.sqrt(d_e)

        q_next = (np.bincount(graph.c_dst, weights=alpha_c * x_c,
                              minlength=n + 1)[:n]
                  + np.bincount(graph.e_dst, weights=alpha_e * x_e,
                                minlength=n))
        q_next *= inv_sqrt_s
        plane = q_next.astype(np.float32)
        if orphan_idx.size:
            plane[orphan_idx] = rng.normal(frame, orphan_idx, 0, channel=c,
                                           lane=LANE_FRESH)
        out[c] = plane.reshape(h, w)

    return NoiseField(out), DensityField(p_next.reshape(h, w))


def warp_sequence(init_noise: NoiseField, flows, rng: RngStream,
                  backward_flows=None):
    """Iteratively warp `init_noise` through a sequence of forward flows.

    `flows` may be FlowField items or (forward, backward) pairs; when only a
    forward flow is given the backward flow is its negation. Yields frame 0
    first; memory stays O(H*W*C) regardless of sequence length.
    """
    noise = init_noise
    density = DensityField.ones(init_noise.height, init_noise.width)
    yield noise
    for t, item in enumerate(flows):
        if isinstance(item, FlowField):
            fwd = item
            bwd = backward_flows[t] if backward_flows is not None \
                else derive_backward_flow(item)
        else:
            fwd, bwd = item
        fwd = quantize_flow(fwd)
        bwd = quantize_flow(bwd)
        noise, density = warp_next_frame(noise, density, fwd, bwd, rng,
                                         frame=t + 1)
        yield noise


def warp_sequence_list(init_noise: NoiseField, flows, rng: RngStream,
                       backward_flows=None):
    """Eager variant of warp_sequence."""
    return list(warp_sequence(init_noise, flows, rng, backward_flows))
