"""Optical-flow noise warping toolkit.

Transports Gaussian white-noise fields along optical flow while keeping each
frame spatially i.i.d. N(0, 1), plus the surrounding authoring, statistics,
and benchmarking pipeline.
"""

from .errors import (
    DegenerateInputError,
    FormatError,
    InvalidArgumentError,
    NoiseWarpError,
    NumericError,
)
from .fields import (
    DensityField,
    FlowField,
    NoiseField,
    RngStream,
    quantize_flow,
    sample_white_noise,
)
from .post import NoiseSequence, degrade, downsample_to_latent
from .warp import (
    TransferGraph,
    build_transfer_graph,
    derive_backward_flow,
    split_gaussian,
    warp_next_frame,
    warp_sequence,
    warp_sequence_list,
)

__all__ = [
    "DegenerateInputError",
    "DensityField",
    "FlowField",
    "FormatError",
    "InvalidArgumentError",
    "NoiseField",
    "NoiseSequence",
    "NoiseWarpError",
    "NumericError",
    "RngStream",
    "TransferGraph",
    "build_transfer_graph",
    "degrade",
    "derive_backward_flow",
    "downsample_to_latent",
    "quantize_flow",
    "sample_white_noise",
    "split_gaussian",
    "warp_next_frame",
    "warp_sequence",
    "warp_sequence_list",
]

__version__ = "0.1.0"
