"""Temporal Haar wavelet-packet filtering and spatial mean subtraction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import ndimage

from .video_io import LumaVideo

__all__ = [
    "TemporalFilterBank",
    "SubbandVideo",
    "haar_packet_basis",
    "build_haar_packet",
    "temporal_filter",
    "temporal_filter_stack",
    "gaussian_window",
    "spatial_ms",
    "spatial_ms_stack",
    "coefficient_histogram",
]

MAX_LEVELS = 6
MS_HALF_WIDTH = 7

_HAAR_LOW = np.array([1.0, 1.0]) / np.sqrt(2.0)
_HAAR_HIGH = np.array([1.0, -1.0]) / np.sqrt(2.0)


@dataclass(frozen=True)
class TemporalFilterBank:
    """Band-pass filters ordered by increasing center frequency.

    ``filters[k - 1]`` is subband ``k``; the low-pass member is not included.
    """

    filters: np.ndarray
    levels: int

    @property
    def length(self) -> int:
        return self.filters.shape[1]

    def __len__(self):
        return self.filters.shape[0]

    def __getitem__(self, k):
        """Filter for 1-based subband index ``k``."""
        if not 1 <= k <= len(self):
            raise IndexError(f"subband {k} outside 1..{len(self)}")
        return self.filters[k - 1]


@dataclass(frozen=True)
class SubbandVideo:
    k: int
    frames: np.ndarray
    fps: Fraction
    valid_range: tuple

    @property
    def frame_count(self) -> int:
        return self.frames.shape[0]


def _upsample(h, factor):
    out = np.zeros((len(h) - 1) * factor + 1)
    out[::factor] = h
    return out


def _sequency(f):
    return int(np.count_nonzero(np.diff(np.sign(f)) != 0))


def haar_packet_basis(levels: int) -> np.ndarray:
    """All ``2**levels`` equivalent filters of the full Haar packet tree.

    Rows are sorted by sequency (zero-crossing count), so row 0 is the
    low-pass filter and the last row alternates sign every sample.
    """
    if not 1 <= levels <= MAX_LEVELS:
        raise ValueError(f"levels must be in 1..{MAX_LEVELS}, got {levels}")
    nodes = [np.array([1.0])]
    for level in range(levels):
        # noble identity: stage ``level`` sees its filters upsampled by 2**level
        low = _upsample(_HAAR_LOW, 2 ** level)
        high = _upsample(_HAAR_HIGH, 2 ** level)
        nodes = [np.convolve(node, h) for node in nodes for h in (low, high)]
    basis = np.array(nodes)
    order = np.argsort([_sequency(f) for f in basis], kind="stable")
    return basis[order]


def build_haar_packet(levels: int = 3) -> TemporalFilterBank:
    """Band-pass part of the Haar packet tree: ``2**levels - 1`` filters."""
    basis = haar_packet_basis(levels)
    filters = basis[1:].copy()
    filters.flags.writeable = False
    return TemporalFilterBank(filters, levels)


def temporal_filter_stack(frames: np.ndarray, filt: np.ndarray) -> np.ndarray:
    """Valid-mode correlation along axis 0: ``out[t] = sum_i filt[i] * frames[t + i]``."""
    frames = np.asarray(frames)
    n = len(filt)
    if frames.shape[0] < n:
        raise ValueError(f"too few frames: {frames.shape[0]} < filter length {n}")
    n_out = frames.shape[0] - n + 1
    # positive and negative taps are summed apart so a constant input cancels exactly
    pos = np.zeros((n_out,) + frames.shape[1:], dtype=np.float64)
    neg = np.zeros_like(pos)
    for i, c in enumerate(filt):
        if c > 0:
            pos += c * frames[i:i + n_out]
        elif c < 0:
            neg += -c * frames[i:i + n_out]
    return pos - neg


def temporal_filter(video: LumaVideo, filt, k: Optional[int] = None) -> SubbandVideo:
    """Band-pass response of ``video`` to one temporal filter."""
    filt = np.asarray(filt, dtype=np.float64)
    frames = temporal_filter_stack(video.frames, filt)
    return SubbandVideo(k if k is not None else 0, frames, video.fps,
                        (0, video.frame_count - len(filt)))


def gaussian_window(half_width: int = MS_HALF_WIDTH, sigma: Optional[float] = None) -> np.ndarray:
    """Unit-sum 2D Gaussian sampled over ``[-half_width, half_width]``.

    ``sigma`` defaults to ``half_width / 3`` so the window spans three
    standard deviations.
    """
    if sigma is None:
        sigma = half_width / 3.0
    x = np.arange(-half_width, half_width + 1, dtype=np.float64)
    g = np.exp(-0.5 * (x / sigma) ** 2)
    w = np.outer(g, g)
    return w / w.sum()


def spatial_ms_stack(frames: np.ndarray, window: Optional[np.ndarray] = None) -> np.ndarray:
    """Mean-subtracted coefficients for every frame of a ``(T, H, W)`` stack.

    Borders are handled by symmetric reflection. Frames smaller than the
    window are reflected repeatedly, so every pixel still sees a full
    window.
    """
    if window is None:
        window = gaussian_window()
    frames = np.asarray(frames, dtype=np.float64)
    out = np.empty_like(frames)
    for t, frame in enumerate(frames):
        out[t] = frame - ndimage.correlate(frame, window, mode="reflect")
    return out


def spatial_ms(frame, window: Optional[np.ndarray] = None) -> np.ndarray:
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 2:
        raise ValueError(f"expected a 2D frame, got shape {frame.shape}")
    return spatial_ms_stack(frame[None], window)[0]


def coefficient_histogram(coeffs, bins: int = 101, value_range=None):
    """Normalized histogram of band-pass coefficients.

    ``value_range`` defaults to ``(-m, m)`` with ``m`` the largest absolute
    coefficient (or 1 for an all-zero input). Values outside the range are
    clipped into the edge bins so the frequencies sum to one. Returns
    ``(centers, frequencies)``.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64).ravel()
    if coeffs.size == 0:
        raise ValueError("no coefficients to histogram")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    if value_range is None:
        m = float(np.abs(coeffs).max()) or 1.0
        value_range = (-m, m)
    lo, hi = map(float, value_range)
    if not hi > lo:
        raise ValueError(f"empty histogram range {value_range}")
    counts, edges = np.histogram(np.clip(coeffs, lo, hi), bins=bins, range=(lo, hi))
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, counts / coeffs.size
