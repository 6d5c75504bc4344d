"""Luma video containers, Y4M / raw YUV readers and resampling helpers.

Only the luma plane is kept. Samples stay on their native 8-bit scale
(0..255); loaders keep them as ``uint8`` and every resampler that has to
average returns ``float64``.
"""

from __future__ import annotations

import io
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import BinaryIO, Union

import numpy as np

__all__ = [
    "VideoFormatError",
    "LumaVideo",
    "VideoMeta",
    "as_fps",
    "parse_y4m",
    "read_y4m",
    "load_raw_yuv",
    "spatial_downsample",
    "temporal_downsample_drop",
    "temporal_upsample_duplicate",
]

FpsLike = Union[Fraction, int, float, str]

_Y4M_SIGNATURE = b"YUV4MPEG2"
_Y4M_420_TAGS = {"420", "420jpeg", "420paldv", "420mpeg2"}
_Y4M_MONO_TAGS = {"mono"}
_RAW_FORMATS = ("yuv420p", "gray8")


class VideoFormatError(ValueError):
    """Raised for malformed, truncated or unsupported video input."""


def as_fps(value: FpsLike) -> Fraction:
    """Coerce ``value`` to a positive rational frame rate.

    Accepts ``Fraction``, ints, floats and strings such as ``"120"``,
    ``"120/1"``, ``"120:1"`` or ``"59.94"``.
    """
    if isinstance(value, str):
        value = value.strip().replace(":", "/")
    if isinstance(value, float):
        fps = Fraction(value).limit_denominator(1001 * 1000)
    else:
        fps = Fraction(value)
    if fps <= 0:
        raise ValueError(f"frame rate must be positive, got {value!r}")
    return fps


@dataclass(frozen=True)
class LumaVideo:
    """A frame-rate-annotated stack of luma frames, shape ``(T, H, W)``."""

    frames: np.ndarray
    fps: Fraction
    source_bit_depth: int = 8

    def __post_init__(self):
        frames = np.asarray(self.frames)
        if frames.ndim != 3:
            raise ValueError(f"frames must have shape (T, H, W), got {frames.shape}")
        if min(frames.shape) < 1:
            raise ValueError(f"empty video, shape {frames.shape}")
        frames.flags.writeable = False
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "fps", as_fps(self.fps))

    @property
    def frame_count(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    def __len__(self):
        return self.frame_count

    def __repr__(self):
        return (f"<LumaVideo {self.width}x{self.height} {self.frame_count} frames "
                f"@ {self.fps} fps>")


@dataclass(frozen=True)
class VideoMeta:
    width: int
    height: int
    fps: Fraction
    frame_count: int
    pixel_format: str


def _y4m_luma_and_frame_size(width, height, colorspace):
    tag = colorspace.lower()
    luma = width * height
    if tag in _Y4M_420_TAGS:
        return luma, luma + 2 * ((width + 1) // 2) * ((height + 1) // 2)
    if tag in _Y4M_MONO_TAGS:
        return luma, luma
    raise VideoFormatError(f"unsupported Y4M colorspace C{colorspace} "
                           "(only 8-bit 4:2:0 and mono are accepted)")


def _parse_y4m_header(line: bytes):
    tokens = line.split()
    if not tokens or tokens[0] != _Y4M_SIGNATURE:
        raise VideoFormatError("missing YUV4MPEG2 signature")
    params = {}
    for tok in tokens[1:]:
        tok = tok.decode("ascii", errors="replace")
        params[tok[0]] = tok[1:]
    try:
        width, height = int(params["W"]), int(params["H"])
        num, den = (int(v) for v in params["F"].split(":"))
    except (KeyError, ValueError) as exc:
        raise VideoFormatError(f"malformed Y4M header: {line!r}") from exc
    if width < 1 or height < 1 or num <= 0 or den <= 0:
        raise VideoFormatError(f"malformed Y4M header: {line!r}")
    return width, height, Fraction(num, den), params.get("C", "420jpeg")


def parse_y4m(stream: Union[bytes, BinaryIO]):
    """Parse a YUV4MPEG2 byte stream and return ``(VideoMeta, LumaVideo)``.

    Chroma payload is skipped. Accepts raw ``bytes`` or a binary file
    object.
    """
    if isinstance(stream, (bytes, bytearray, memoryview)):
        stream = io.BytesIO(bytes(stream))

    header = stream.readline()
    if not header.endswith(b"\n"):
        raise VideoFormatError("malformed Y4M header: no terminating newline")
    width, height, fps, colorspace = _parse_y4m_header(header)
    luma_size, frame_size = _y4m_luma_and_frame_size(width, height, colorspace)

    frames = []
    while True:
        marker = stream.readline()
        if not marker:
            break
        if not marker.startswith(b"FRAME") or not marker.endswith(b"\n"):
            raise VideoFormatError(f"bad frame marker at frame {len(frames)}: {marker[:16]!r}")
        payload = stream.read(frame_size)
        if len(payload) != frame_size:
            raise VideoFormatError(
                f"truncated frame payload at frame {len(frames)}: "
                f"expected {frame_size} bytes, got {len(payload)}")
        luma = np.frombuffer(payload, dtype=np.uint8, count=luma_size)
        frames.append(luma.reshape(height, width))
    if not frames:
        raise VideoFormatError("truncated frame payload: stream contains no frames")

    video = LumaVideo(np.stack(frames), fps)
    tag = "gray8" if colorspace.lower() in _Y4M_MONO_TAGS else "yuv420p"
    return VideoMeta(width, height, fps, len(frames), tag), video


def read_y4m(path) -> LumaVideo:
    with open(path, "rb") as fh:
        return parse_y4m(fh)[1]


def _raw_frame_size(width, height, pixel_format):
    if pixel_format == "yuv420p":
        return width * height + 2 * ((width + 1) // 2) * ((height + 1) // 2)
    if pixel_format == "gray8":
        return width * height
    raise VideoFormatError(f"unsupported pixel format {pixel_format!r}; "
                           f"expected one of {_RAW_FORMATS}")


def load_raw_yuv(path, width: int, height: int, fps: FpsLike,
                 pixel_format: str = "yuv420p") -> LumaVideo:
    """Read the luma planes of a headerless planar 8-bit file."""
    if width < 1 or height < 1:
        raise ValueError(f"invalid geometry {width}x{height}")
    frame_size = _raw_frame_size(width, height, pixel_format)
    size = os.path.getsize(path)
    if size == 0 or size % frame_size:
        raise VideoFormatError(
            f"size mismatch: {size} bytes is not a multiple of the "
            f"{frame_size}-byte {pixel_format} frame for {width}x{height}")
    data = np.fromfile(path, dtype=np.uint8).reshape(size // frame_size, frame_size)
    luma = data[:, :width * height].reshape(-1, height, width)
    return LumaVideo(np.ascontiguousarray(luma), as_fps(fps))


def spatial_downsample(video: LumaVideo, factor: int) -> LumaVideo:
    """Average-pool every frame over non-overlapping ``factor x factor`` blocks.

    Trailing rows and columns that do not fill a block are dropped. With
    ``factor == 1`` the frames are returned unchanged.
    """
    if factor < 1:
        raise ValueError(f"downsample factor must be >= 1, got {factor}")
    if factor == 1:
        return video
    if factor > video.height or factor > video.width:
        raise ValueError(f"degenerate output: factor {factor} exceeds frame size "
                         f"{video.width}x{video.height}")
    h, w = video.height // factor, video.width // factor
    out = np.empty((video.frame_count, h, w), dtype=np.float64)
    # frame by frame to bound memory on full-HD input
    for t, frame in enumerate(video.frames):
        crop = frame[:h * factor, :w * factor].astype(np.float64)
        out[t] = crop.reshape(h, factor, w, factor).mean(axis=(1, 3))
    return LumaVideo(out, video.fps, video.source_bit_depth)


def _resample_indices(n_in: int, fps_in: Fraction, fps_out: Fraction) -> np.ndarray:
    # output frame n <- input frame floor(n * fps_in / fps_out)
    ratio = fps_in / fps_out
    n_out = math.ceil(n_in / ratio)
    return np.array([(n * ratio.numerator) // ratio.denominator for n in range(n_out)],
                    dtype=np.intp)


def temporal_downsample_drop(video: LumaVideo, target_fps: FpsLike) -> LumaVideo:
    """Lower the frame rate by dropping frames (pseudo-reference construction)."""
    target = as_fps(target_fps)
    if target > video.fps:
        raise ValueError(f"target fps {target} exceeds source fps {video.fps}")
    if target == video.fps:
        return video
    idx = _resample_indices(video.frame_count, video.fps, target)
    return LumaVideo(video.frames[idx], target, video.source_bit_depth)


def temporal_upsample_duplicate(video: LumaVideo, target_fps: FpsLike) -> LumaVideo:
    """Raise the frame rate by repeating frames."""
    target = as_fps(target_fps)
    if target < video.fps:
        raise ValueError(f"target fps {target} is below source fps {video.fps}")
    if target == video.fps:
        return video
    idx = _resample_indices(video.frame_count, video.fps, target)
    return LumaVideo(video.frames[idx], target, video.source_bit_depth)
