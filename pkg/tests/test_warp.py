import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisewarp import (
    DensityField,
    FlowField,
    InvalidArgumentError,
    RngStream,
    build_transfer_graph,
    derive_backward_flow,
    sample_white_noise,
    split_gaussian,
    warp_next_frame,
    warp_sequence_list,
)
from noisewarp.fields import LANE_SPLIT, quantize_flow

OOB = 100.0  # displacement that always leaves the small test grids


def row_flow(dx_row, dy_row=None):
    dx = np.asarray([dx_row], dtype=np.float64)
    dy = np.zeros_like(dx) if dy_row is None else np.asarray([dy_row], dtype=np.float64)
    return FlowField(dx, dy)


# --- transfer graph ---------------------------------------------------------

def test_graph_identity_flow():
    g = build_transfer_graph(FlowField.zeros(3, 4), FlowField.zeros(3, 4))
    src, dst, draw = g.edges
    assert g.n_edges == 12
    assert np.array_equal(np.sort(src), np.arange(12))
    assert np.array_equal(src, dst)
    assert np.all(draw == 0)
    assert np.all(g.deg == 1)
    assert g.orphans.size == 0


def test_graph_all_out_of_bounds():
    f = row_flow([OOB, OOB])
    g = build_transfer_graph(f, f)
    assert g.n_edges == 0
    assert np.all(g.deg == 0)
    assert np.array_equal(np.sort(g.orphans), [0, 1])


def test_graph_1x2_hand_trace():
    # pixel 0 pushes onto pixel 1; pixel 1 leaves the grid; pixel 0 stays
    # uncovered and its backward pullback is out of bounds too.
    fwd = row_flow([1.0, 1.0])
    g = build_transfer_graph(fwd, derive_backward_flow(fwd))
    src, dst, draw = g.edges
    assert (src.tolist(), dst.tolist(), draw.tolist()) == ([0], [1], [0])
    assert g.deg.tolist() == [1, 0]
    assert g.orphans.tolist() == [0]


def test_graph_expansion_edges_and_draw_order():
    # 1x3: all pixels contract onto pixel 1. Uncovered pixels 0 and 2 pull
    # themselves back (zero backward flow), giving sources 0 and 2 a second
    # outgoing edge with draw index 1.
    fwd = row_flow([1.0, 0.0, -1.0])
    g = build_transfer_graph(fwd, FlowField.zeros(1, 3))
    assert g.deg.tolist() == [2, 1, 2]
    assert g.orphans.size == 0
    assert sorted(zip(g.e_src.tolist(), g.e_dst.tolist(), g.e_draw.tolist())) \
        == [(0, 0, 1), (2, 2, 1)]


def test_graph_dimension_mismatch():
    with pytest.raises(InvalidArgumentError):
        build_transfer_graph(FlowField.zeros(2, 2), FlowField.zeros(2, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 9), st.integers(2, 9), st.integers(0, 10 ** 6))
def test_graph_edge_bound_property(h, w, seed):
    # never more than two edges per pixel: one contraction plus at most one
    # expansion pull per uncovered destination
    gen = np.random.default_rng(seed)
    fwd = FlowField(gen.integers(-3, 4, (h, w)).astype(np.float64),
                    gen.integers(-3, 4, (h, w)).astype(np.float64))
    bwd = FlowField(gen.integers(-3, 4, (h, w)).astype(np.float64),
                    gen.integers(-3, 4, (h, w)).astype(np.float64))
    g = build_transfer_graph(fwd, bwd)
    assert g.n_edges <= 2 * h * w
    # every destination is either reached by an edge or listed as an orphan
    _, dst, _ = g.edges
    reached = np.zeros(h * w, dtype=bool)
    reached[dst] = True
    reached[g.orphans] = True
    assert reached.all()
    # out-degrees match the edge list
    src, _, draw = g.edges
    assert np.array_equal(np.bincount(src, minlength=h * w), g.deg)
    # draw indices within a source are distinct
    assert len(set(zip(src.tolist(), draw.tolist()))) == src.size


# --- split ------------------------------------------------------------------

def test_split_count_one_passthrough():
    assert split_gaussian(1.25, 1, np.array([9.9])).tolist() == [1.25]


def test_split_rejects_bad_args():
    with pytest.raises(InvalidArgumentError):
        split_gaussian(0.0, 0, np.array([]))
    with pytest.raises(InvalidArgumentError):
        split_gaussian(0.0, 2, np.array([1.0]))


@given(st.floats(-100, 100), st.integers(2, 10), st.integers(0, 10 ** 6))
def test_split_sums_exactly(value, count, seed):
    z = np.random.default_rng(seed).standard_normal(count)
    parts = split_gaussian(value, count, z)
    assert parts.shape == (count,)
    assert np.isclose(parts.sum(), value, atol=1e-9)


@pytest.mark.parametrize("d", [2, 3, 8])
def test_split_pieces_are_iid_scaled_normals(d):
    # Monte-Carlo check of the split identities: each piece has variance
    # 1/d and distinct pieces are uncorrelated. 20k trials gives a moment
    # standard error of about 0.01.
    gen = np.random.default_rng(d)
    trials = 20_000
    q = gen.standard_normal(trials)
    parts = np.stack([split_gaussian(q[i], d, gen.standard_normal(d))
                      for i in range(trials)])
    var = parts.var(axis=0)
    assert np.all(np.abs(var - 1.0 / d) < 0.02)
    cov = np.cov(parts.T)
    off = cov[~np.eye(d, dtype=bool)]
    assert np.all(np.abs(off) < 0.02)
    # renormalized pieces are standard normal
    assert abs((parts[:, 0] * np.sqrt(d)).var() - 1.0) < 0.05


# --- warp step --------------------------------------------------------------

def test_identity_flow_is_bit_exact():
    noise = sample_white_noise(32, 32, 2, seed=5)
    density = DensityField.ones(32, 32)
    zero = FlowField.zeros(32, 32)
    out, out_d = warp_next_frame(noise, density, zero, zero, RngStream(5))
    assert out.values.tobytes() == noise.values.tobytes()
    assert np.array_equal(out_d.values, density.values)


def test_kernel_matches_scalar_reference():
    # Recompute the 1x3 contraction/expansion example with the scalar split
    # and explicit aggregation formulas; the vectorized kernel must agree.
    noise = sample_white_noise(1, 3, 1, seed=11)
    q = noise.values[0, 0].astype(np.float64)
    fwd = row_flow([1.0, 0.0, -1.0])
    bwd = FlowField.zeros(1, 3)
    rng = RngStream(11)
    out, out_d = warp_next_frame(noise, DensityField.ones(1, 3), fwd, bwd,
                                 rng, frame=1)

    def draws(pixel, n):
        return np.array([float(rng.normal(1, np.uint64(pixel), k,
                                          lane=LANE_SPLIT)) for k in range(n)])

    x0 = split_gaussian(q[0], 2, draws(0, 2))  # [contraction, expansion]
    x2 = split_gaussian(q[2], 2, draws(2, 2))
    # destination 1: three incoming edges with weights alpha = p/deg
    s1 = 0.25 / 2 + 1.0 + 0.25 / 2
    v1 = (0.5 * x0[0] + 1.0 * q[1] + 0.5 * x2[0]) / np.sqrt(s1)
    v0 = 0.5 * x0[1] / np.sqrt(0.25 / 2)
    v2 = 0.5 * x2[1] / np.sqrt(0.25 / 2)
    assert np.allclose(out.values[0, 0], [v0, v1, v2], atol=1e-5)
    assert np.allclose(out_d.values[0], [0.5, 2.0, 0.5])


def test_orphan_gets_fresh_noise_and_unit_density():
    noise = sample_white_noise(1, 2, 1, seed=3)
    fwd = row_flow([1.0, 1.0])
    out, out_d = warp_next_frame(noise, DensityField.ones(1, 2), fwd,
                                 derive_backward_flow(fwd), RngStream(3),
                                 frame=1)
    # destination 1 receives pixel 0 exactly (single-edge source)
    assert out.values[0, 0, 1] == noise.values[0, 0, 0]
    assert out_d.values[0, 1] == 1.0
    # destination 0 is an orphan: fresh draw, density reset to 1
    fresh = RngStream(3).normal(1, np.uint64(0), 0)
    assert out.values[0, 0, 0] == np.float32(fresh)
    assert out_d.values[0, 0] == 1.0


def test_mass_conserved_without_boundary_loss():
    # all contractions stay in bounds and every source keeps at least one
    # edge, so aggregated density equals total input density
    noise = sample_white_noise(1, 3, 1, seed=0)
    fwd = row_flow([1.0, 0.0, -1.0])
    _, out_d = warp_next_frame(noise, DensityField.ones(1, 3), fwd,
                               FlowField.zeros(1, 3), RngStream(0))
    assert np.isclose(out_d.values.sum(), 3.0)


def test_expansion_then_contraction_recovers_noise():
    # 1x4 grid: pixel 0 splits over destinations 1 and 2 (contraction plus a
    # backward pullback), then both halves contract onto pixel 2. The
    # recombined pixel must reproduce pixel 0's original value and density.
    noise = sample_white_noise(1, 4, 1, seed=21)
    rng = RngStream(21)
    f1 = row_flow([1.0, OOB, OOB, OOB])
    b1 = row_flow([OOB, OOB, -2.0, OOB])
    n1, d1 = warp_next_frame(noise, DensityField.ones(1, 4), f1, b1, rng, frame=1)
    assert np.allclose(d1.values[0, 1:3], 0.5)
    # each half carries sqrt(2) times its split piece
    assert np.isclose(n1.values[0, 0, 1] + n1.values[0, 0, 2],
                      np.sqrt(2.0) * noise.values[0, 0, 0], atol=1e-5)

    f2 = row_flow([OOB, 1.0, 0.0, OOB])
    b2 = row_flow([OOB, OOB, OOB, OOB])
    n2, d2 = warp_next_frame(n1, d1, f2, b2, rng, frame=2)
    assert abs(n2.values[0, 0, 2] - noise.values[0, 0, 0]) < 1e-5
    assert np.isclose(d2.values[0, 2], 1.0)


def test_warp_rejects_mismatched_fields():
    noise = sample_white_noise(2, 2, 1, seed=0)
    with pytest.raises(InvalidArgumentError):
        warp_next_frame(noise, DensityField.ones(3, 3), FlowField.zeros(2, 2),
                        FlowField.zeros(2, 2), RngStream(0))
    with pytest.raises(InvalidArgumentError):
        warp_next_frame(noise, DensityField.ones(2, 2), FlowField.zeros(3, 3),
                        FlowField.zeros(3, 3), RngStream(0))


def test_warp_is_deterministic():
    noise = sample_white_noise(16, 16, 1, seed=4)
    fwd = quantize_flow(FlowField(np.full((16, 16), 1.0), np.full((16, 16), -1.0)))
    bwd = derive_backward_flow(fwd)
    a, _ = warp_next_frame(noise, DensityField.ones(16, 16), fwd, bwd, RngStream(4))
    b, _ = warp_next_frame(noise, DensityField.ones(16, 16), fwd, bwd, RngStream(4))
    assert a.values.tobytes() == b.values.tobytes()


def test_derive_backward_is_negation_involution():
    f = FlowField(np.array([[1.0, -2.0]]), np.array([[0.5, 3.0]]))
    b = derive_backward_flow(f)
    assert np.array_equal(b.dx, -f.dx) and np.array_equal(b.dy, -f.dy)
    bb = derive_backward_flow(b)
    assert np.array_equal(bb.dx, f.dx) and np.array_equal(bb.dy, f.dy)


def test_warp_sequence_shapes_and_first_frame():
    init = sample_white_noise(8, 8, 1, seed=1)
    flows = [FlowField(np.full((8, 8), 1.0), np.zeros((8, 8)))] * 3
    seq = warp_sequence_list(init, flows, RngStream(1))
    assert len(seq) == 4
    assert seq[0] is init
    for f in seq:
        assert f.values.shape == (1, 8, 8)


def test_pan_transports_noise_coherently():
    # under a 1px-per-frame pan, frame t+1 at (x+1) should equal frame t at x
    # in the interior (correlation 1 up to split noise at the boundary)
    init = sample_white_noise(32, 32, 1, seed=8)
    flows = [FlowField(np.ones((32, 32)), np.zeros((32, 32)))] * 10
    seq = warp_sequence_list(init, flows, RngStream(8))
    a = seq[5].values[0][:, :-1].ravel().astype(np.float64)
    b = seq[6].values[0][:, 1:].ravel().astype(np.float64)
    assert np.corrcoef(a, b)[0, 1] > 0.99
