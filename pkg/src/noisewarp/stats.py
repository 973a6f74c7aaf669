"""Gaussianity verification battery.

Per-frame diagnostics: Moran's I spatial autocorrelation with rook
(4-neighbor) binary weights, a one-sample Kolmogorov-Smirnov test of a pixel
subsample against the standard normal, and moment checks. A sequence passes
the battery when a configured quota of frames passes all thresholds.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats as sps

from .errors import DegenerateInputError, InvalidArgumentError
from .fields import LANE_AUX, RngStream
from .post import NoiseSequence


@dataclass(frozen=True)
class BatteryConfig:
    moran_alpha: float = 0.05
    ks_alpha: float = 0.05
    ks_sample: int = 200
    mean_tol: float = 0.05
    var_tol: float = 0.1
    quota: float = 0.9
    subsample_seed: int = 0


@dataclass(frozen=True)
class GaussianityReport:
    frame: int
    channel: int
    morans_i: float
    morans_p: float
    ks_stat: float
    ks_p: float
    mean: float
    variance: float
    n_pixels: int
    passed: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def morans_i(plane: np.ndarray, permutations: int = 0,
             perm_seed: int = 0) -> tuple[float, float]:
    """Global Moran's I with rook binary weights on a 2D grid.

    Returns (index, two-sided p-value). The default p-value uses the normal
    approximation under the normality assumption with E[I] = -1/(N-1);
    `permutations > 0` switches to a permutation p-value for auditing.
    """
    x = np.asarray(plane, dtype=np.float64)
    if x.ndim != 2 or x.size < 100:
        raise InvalidArgumentError("need a 2D grid with at least 100 cells")
    h, w = x.shape
    n = x.size
    z = x - x.mean()
    denom = np.sum(z * z)
    if denom == 0.0:
        raise DegenerateInputError("zero-variance field")

    # Each horizontally/vertically adjacent unordered pair carries weight 1
    # in both directions.
    pairs_h = h * (w - 1)
    pairs_v = (h - 1) * w
    w_sum = 2.0 * (pairs_h + pairs_v)
    num = 2.0 * (np.sum(z[:, :-1] * z[:, 1:]) + np.sum(z[:-1, :] * z[1:, :]))
    index = (n / w_sum) * num / denom

    e_i = -1.0 / (n - 1)
    if permutations > 0:
        rng = np.random.default_rng(perm_seed)
        flat = x.ravel()
        hits = 0
        obs_dev = abs(index - e_i)
        for _ in range(permutations):
            perm = rng.permutation(flat).reshape(h, w)
            zp = perm - perm.mean()
            nump = 2.0 * (np.sum(zp[:, :-1] * zp[:, 1:])
                          + np.sum(zp[:-1, :] * zp[1:, :]))
            i_p = (n / w_sum) * nump / np.sum(zp * zp)
            if abs(i_p - e_i) >= obs_dev:
                hits += 1
        p = (hits + 1.0) / (permutations + 1.0)
        return float(index), float(p)

    # Variance of I under normality.
    deg = np.full((h, w), 4.0)
    deg[0, :] -= 1
    deg[-1, :] -= 1
    deg[:, 0] -= 1
    deg[:, -1] -= 1
    s1 = 2.0 * w_sum                 # 0.5 * sum (w_ij + w_ji)^2, binary symmetric
    s2 = 4.0 * np.sum(deg * deg)     # sum (row_i + col_i)^2
    var_i = ((n * n * s1 - n * s2 + 3.0 * w_sum * w_sum)
             / (w_sum * w_sum * (n * n - 1.0))) - e_i * e_i
    zscore = (index - e_i) / np.sqrt(var_i)
    p = 2.0 * sps.norm.sf(abs(zscore))
    return float(index), float(p)


def ks_test(plane: np.ndarray, sample_size: int = 200,
            rng: RngStream | None = None,
            frame: int = 0) -> tuple[float, float]:
    """One-sample K-S test of a uniform pixel subsample against N(0, 1).

    The subsample is drawn without replacement from a counter-keyed Philox
    stream, so results are deterministic; the p-value uses the asymptotic
    Kolmogorov distribution.
    """
    x = np.asarray(plane, dtype=np.float64).ravel()
    if sample_size < 50:
        raise InvalidArgumentError("sample_size must be >= 50")
    if sample_size > x.size:
        raise InvalidArgumentError("sample_size exceeds pixel count")
    if rng is None:
        rng = RngStream(0)
    gen = np.random.Generator(np.random.Philox(
        key=[rng.seed & 0xFFFFFFFFFFFFFFFF, (frame << 8) | LANE_AUX]))
    idx = gen.choice(x.size, size=sample_size, replace=False)
    stat, p = sps.kstest(x[idx], "norm", mode="asymp")
    return float(stat), float(p)


def frame_report(plane: np.ndarray, frame: int, channel: int,
                 config: BatteryConfig) -> GaussianityReport:
    x = np.asarray(plane, dtype=np.float64)
    mean = float(x.mean())
    var = float(x.var())
    m_i, m_p = morans_i(x)
    k_s, k_p = ks_test(x, sample_size=config.ks_sample,
                       rng=RngStream(config.subsample_seed), frame=frame)
    passed = (m_p > config.moran_alpha and k_p > config.ks_alpha
              and abs(mean) < config.mean_tol
              and abs(var - 1.0) < config.var_tol)
    return GaussianityReport(frame=frame, channel=channel, morans_i=m_i,
                             morans_p=m_p, ks_stat=k_s, ks_p=k_p, mean=mean,
                             variance=var, n_pixels=x.size, passed=passed)


def gaussianity_battery(seq: NoiseSequence,
                        config: BatteryConfig = BatteryConfig()
                        ) -> list[GaussianityReport]:
    """One report per frame per channel."""
    reports = []
    for t, fld in enumerate(seq.frames):
        for c in range(seq.channels):
            reports.append(frame_report(fld.values[c], t, c, config))
    return reports


def battery_passes(reports, quota: float = 0.9) -> bool:
    if not reports:
        return False
    frac = sum(r.passed for r in reports) / len(reports)
    return frac >= quota


def reports_to_ldjson(reports) -> str:
    return "\n".join(r.to_json() for r in reports)


def reports_to_table(reports) -> str:
    header = (f"{'frame':>5} {'chan':>4} {'moran_i':>10} {'moran_p':>8} "
              f"{'ks_stat':>8} {'ks_p':>8} {'mean':>8} {'var':>7} pass")
    lines = [header]
    for r in reports:
        lines.append(f"{r.frame:>5} {r.channel:>4} {r.morans_i:>10.5f} "
                     f"{r.morans_p:>8.3f} {r.ks_stat:>8.4f} {r.ks_p:>8.3f} "
                     f"{r.mean:>8.4f} {r.variance:>7.3f} "
                     f"{'ok' if r.passed else 'FAIL'}")
    return "\n".join(lines)


def temporal_tracking_score(seq: NoiseSequence, flows) -> float:
    """Mean Pearson correlation between frame t+1 pixels and their
    flow-source pixels in frame t, over in-bounds transported pixels."""
    if len(flows) != len(seq) - 1:
        raise InvalidArgumentError("need exactly one flow per frame pair")
    h, w = seq.height, seq.width
    ys, xs = np.mgrid[0:h, 0:w]
    corrs = []
    for t, flow in enumerate(flows):
        dx = np.round(np.asarray(flow.dx)).astype(np.int64)
        dy = np.round(np.asarray(flow.dy)).astype(np.int64)
        tx = xs + dx
        ty = ys + dy
        ok = (tx >= 0) & (tx < w) & (ty >= 0) & (ty < h)
        if not ok.any():
            continue
        for c in range(seq.channels):
            src = seq.frames[t].values[c][ok].astype(np.float64)
            dst = seq.frames[t + 1].values[c][ty[ok], tx[ok]].astype(np.float64)
            if src.std() == 0 or dst.std() == 0:
                continue
            corrs.append(np.corrcoef(src, dst)[0, 1])
    return float(np.mean(corrs)) if corrs else 0.0
