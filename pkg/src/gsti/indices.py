"""GTI / GSI / GSTI indices and the end-to-end scoring pipeline."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .bandpass import build_haar_packet, spatial_ms_stack, temporal_filter_stack
from .ggd_stats import block_scaled_entropies
from .video_io import LumaVideo, as_fps, spatial_downsample, temporal_downsample_drop

__all__ = [
    "SCHEMA_VERSION",
    "GstiConfig",
    "EntropyField",
    "GstiReport",
    "partition_blocks",
    "partition_stack",
    "entropy_field",
    "average_reference_entropies",
    "gti_terms",
    "gti_frame",
    "gsi_frame",
    "gsti_frame",
    "pool",
    "score_pipeline",
]

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class GstiConfig:
    levels: int = 3
    block: int = 5
    noise_var: float = 0.1
    downsample: int = 16
    workers: int = 1


@dataclass(frozen=True)
class EntropyField:
    """Scaled entropies indexed ``values[k, t, p]`` (spatial fields use ``k = 0`` only)."""

    values: np.ndarray
    kind: str
    fps: Fraction

    @property
    def frame_count(self) -> int:
        return self.values.shape[1]

    @property
    def block_count(self) -> int:
        return self.values.shape[2]


def partition_stack(frames, block: int = 5) -> np.ndarray:
    """Tile ``(T, H, W)`` frames into ``(T, P, block*block)`` raster-order blocks."""
    frames = np.asarray(frames)
    t, h, w = frames.shape
    if h < block or w < block:
        raise ValueError(f"frame {w}x{h} is smaller than one {block}x{block} block")
    rows, cols = h // block, w // block
    crop = frames[:, :rows * block, :cols * block]
    tiles = crop.reshape(t, rows, block, cols, block).transpose(0, 1, 3, 2, 4)
    return tiles.reshape(t, rows * cols, block * block)


def partition_blocks(frame, block: int = 5) -> np.ndarray:
    """Non-overlapping ``block x block`` tiles of one frame as rows of an array."""
    frame = np.asarray(frame)
    if frame.ndim != 2:
        raise ValueError(f"expected a 2D frame, got shape {frame.shape}")
    return partition_stack(frame[None], block)[0]


def entropy_field(coeffs, fps, kind: str, block: int = 5,
                  noise_var: float = 0.1) -> EntropyField:
    """Blockwise scaled entropies of coefficient frames shaped ``(K, T, H, W)``."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    k, t, h, w = coeffs.shape
    blocks = partition_stack(coeffs.reshape(k * t, h, w), block)
    eps, _, _ = block_scaled_entropies(blocks, noise_var)
    return EntropyField(eps.reshape(k, t, -1), kind, as_fps(fps))


def _group_means(values: np.ndarray, ratio: Fraction, n_out: int) -> np.ndarray:
    # group g collects 1-based frames t' with floor((t' - 1) / F) = g - 1
    out = np.empty(values.shape[:1] + (n_out,) + values.shape[2:], dtype=np.float64)
    for g in range(n_out):
        start = math.ceil(g * ratio)
        stop = math.ceil((g + 1) * ratio)
        group = values[:, start:stop]
        acc = group[:, 0].copy()
        for i in range(1, group.shape[1]):
            acc += group[:, i]
        out[:, g] = acc / group.shape[1]
    return out


def average_reference_entropies(field_: EntropyField, fps_ref, fps_dist,
                                n_out: Optional[int] = None) -> EntropyField:
    """Average reference entropies down to the distorted frame rate.

    With ``F = fps_ref / fps_dist``, output frame ``t`` (1-based) is the
    mean of input frames ``t'`` whose group index ``floor((t' - 1) / F) + 1``
    equals ``t``. For integer ``F`` these are frames ``(t-1)F+1 .. tF``.
    Only complete groups are emitted; ``n_out`` truncates further.
    """
    fps_ref, fps_dist = as_fps(fps_ref), as_fps(fps_dist)
    if fps_ref < fps_dist:
        raise ValueError(f"reference fps {fps_ref} is below distorted fps {fps_dist}")
    ratio = fps_ref / fps_dist
    available = math.floor(field_.frame_count / ratio)
    if n_out is None:
        n_out = available
    n_out = min(n_out, available)
    if n_out < 1:
        raise ValueError(f"fps ratio {ratio} leaves no complete group in "
                         f"{field_.frame_count} reference frames")
    if ratio == 1:
        return EntropyField(field_.values[:, :n_out], field_.kind, fps_dist)
    return EntropyField(_group_means(field_.values, ratio, n_out), field_.kind, fps_dist)


def gti_terms(eps_ref_avg, eps_dist, eps_pr):
    """Per-block absolute-difference and ratio factors of the temporal index."""
    eps_ref_avg, eps_dist, eps_pr = (np.asarray(a, dtype=np.float64)
                                     for a in (eps_ref_avg, eps_dist, eps_pr))
    if not eps_ref_avg.shape == eps_dist.shape == eps_pr.shape:
        raise ValueError(f"block count mismatch: {eps_ref_avg.shape}, "
                         f"{eps_dist.shape}, {eps_pr.shape}")
    absdiff = np.abs(eps_dist - eps_pr)
    ratio = (eps_ref_avg + 1.0) / (eps_pr + 1.0)
    return absdiff, ratio


def _gti(absdiff, ratio):
    return np.abs((1.0 + absdiff) * ratio - 1.0).mean(axis=-1)


def gti_frame(eps_ref_avg, eps_dist, eps_pr) -> float:
    """Temporal index for one frame from per-block scaled entropies."""
    return float(_gti(*gti_terms(eps_ref_avg, eps_dist, eps_pr)))


def gsi_frame(theta_ref_avg, theta_dist) -> float:
    """Spatial index for one frame: mean absolute entropy difference."""
    theta_ref_avg = np.asarray(theta_ref_avg, dtype=np.float64)
    theta_dist = np.asarray(theta_dist, dtype=np.float64)
    if theta_ref_avg.shape != theta_dist.shape:
        raise ValueError(f"block count mismatch: {theta_ref_avg.shape} vs {theta_dist.shape}")
    return float(np.abs(theta_dist - theta_ref_avg).mean(axis=-1))


def gsti_frame(gti: float, gsi: float) -> float:
    return gti * gsi


def pool(values) -> float:
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("cannot pool an empty trace")
    return float(values.mean())


@dataclass
class GstiReport:
    config: Dict
    subband_scores: Dict[int, float]
    gti: np.ndarray
    gsi: np.ndarray
    gsti: np.ndarray
    ref_fps: Fraction
    dist_fps: Fraction
    primary_subband: int = 1
    traces: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def primary_score(self) -> float:
        return self.subband_scores[self.primary_subband]

    def to_dict(self, verbose: bool = False) -> Dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "generator": f"gsti {__version__}",
            "config": dict(self.config),
            "ref_fps": str(self.ref_fps),
            "dist_fps": str(self.dist_fps),
            "frames_scored": int(self.gsi.shape[0]),
            "primary_subband": self.primary_subband,
            "primary_score": self.primary_score,
            "subbands": [
                {"k": k, "gsti": self.subband_scores[k],
                 "gti_mean": float(self.gti[k - 1].mean())}
                for k in sorted(self.subband_scores)
            ],
            "gsi_mean": float(self.gsi.mean()),
        }
        if verbose:
            out["frames"] = {
                "gti": self.gti.tolist(),
                "gsi": self.gsi.tolist(),
                "gsti": self.gsti.tolist(),
            }
        return out


def _subband_entropies(frames, filt, fps, config):
    coeffs = temporal_filter_stack(frames, filt)
    return entropy_field(coeffs[None], fps, "temporal", config.block,
                         config.noise_var).values[0]


def _temporal_fields(video, bank, config, pool_):
    per_k = list(pool_.map(lambda f: _subband_entropies(video.frames, f, video.fps, config),
                           bank.filters))
    return EntropyField(np.stack(per_k), "temporal", video.fps)


def score_pipeline(ref: LumaVideo, dist: LumaVideo, config: Optional[GstiConfig] = None,
                   keep_traces: bool = False) -> GstiReport:
    """Full-reference GSTI score of ``dist`` against ``ref``.

    ``ref`` must have at least the frame rate of ``dist`` and the same
    spatial size. All entropy fields are truncated to the shortest common
    frame count after reference averaging.
    """
    config = config or GstiConfig()
    if (ref.width, ref.height) != (dist.width, dist.height):
        raise ValueError(f"resolution mismatch: ref {ref.width}x{ref.height}, "
                         f"dist {dist.width}x{dist.height}")
    if dist.fps > ref.fps:
        raise ValueError(f"distorted fps {dist.fps} exceeds reference fps {ref.fps}")

    bank = build_haar_packet(config.levels)
    ref_ds = spatial_downsample(ref, config.downsample)
    dist_ds = spatial_downsample(dist, config.downsample)
    pr_ds = temporal_downsample_drop(ref_ds, dist.fps)
    for name, v in (("reference", ref_ds), ("distorted", dist_ds), ("pseudo-reference", pr_ds)):
        if v.frame_count < bank.length:
            raise ValueError(f"{name} video has {v.frame_count} frames, fewer than the "
                             f"temporal filter support {bank.length}")

    with ThreadPoolExecutor(max_workers=max(1, config.workers)) as ex:
        eps_ref = _temporal_fields(ref_ds, bank, config, ex)
        eps_dist = _temporal_fields(dist_ds, bank, config, ex)
        eps_pr = _temporal_fields(pr_ds, bank, config, ex)
        ms_ref, ms_dist = ex.map(spatial_ms_stack, (ref_ds.frames, dist_ds.frames))

    theta_ref = entropy_field(ms_ref[None], ref.fps, "spatial", config.block, config.noise_var)
    theta_dist = entropy_field(ms_dist[None], dist.fps, "spatial", config.block,
                               config.noise_var)

    eps_ref_avg = average_reference_entropies(eps_ref, ref.fps, dist.fps)
    theta_ref_avg = average_reference_entropies(theta_ref, ref.fps, dist.fps)

    n = min(eps_ref_avg.frame_count, eps_dist.frame_count, eps_pr.frame_count,
            theta_ref_avg.frame_count, theta_dist.frame_count)
    e_r = eps_ref_avg.values[:, :n]
    e_d = eps_dist.values[:, :n]
    e_pr = eps_pr.values[:, :n]
    absdiff, ratio = gti_terms(e_r, e_d, e_pr)
    gti = _gti(absdiff, ratio)
    gsi = np.abs(theta_dist.values[0, :n] - theta_ref_avg.values[0, :n]).mean(axis=-1)
    gsti = gti * gsi[None, :]

    scores = {k: pool(gsti[k - 1]) for k in range(1, len(bank) + 1)}
    traces = {}
    if keep_traces:
        traces = {"absdiff": absdiff, "ratio": ratio, "eps_ref_avg": e_r,
                  "eps_dist": e_d, "eps_pr": e_pr,
                  "theta_ref_avg": theta_ref_avg.values[0, :n],
                  "theta_dist": theta_dist.values[0, :n]}
    cfg = asdict(config)
    cfg.pop("workers")
    return GstiReport(cfg, scores, gti, gsi, gsti, ref.fps, dist.fps, traces=traces)
