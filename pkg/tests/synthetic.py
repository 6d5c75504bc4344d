"""Seeded synthetic video generators shared by the test modules."""

import numpy as np
from scipy import ndimage

from gsti.video_io import LumaVideo


def texture(rng, height, width, smooth=2.0, contrast=40.0):
    field = ndimage.gaussian_filter(rng.standard_normal((height, width)), smooth, mode="wrap")
    field *= contrast / field.std()
    return 128.0 + field


def moving_texture(seed=0, frames=64, height=108, width=192, speed=3, fps=120,
                   smooth=2.0, contrast=40.0):
    """A smooth random texture panning horizontally by ``speed`` pixels per frame."""
    rng = np.random.default_rng(seed)
    tex = texture(rng, height, width + speed * frames, smooth, contrast)
    stack = np.stack([tex[:, speed * t:speed * t + width] for t in range(frames)])
    return LumaVideo(stack, fps)


def hold_frames(video, r):
    """Emulate a ``1/r`` frame rate by holding every ``r``-th frame (same fps tag)."""
    idx = (np.arange(video.frame_count) // r) * r
    return LumaVideo(video.frames[idx], video.fps)


def add_noise(video, sigma, seed=1):
    rng = np.random.default_rng(seed)
    return LumaVideo(video.frames + sigma * rng.standard_normal(video.frames.shape), video.fps)


def write_y4m(path, video, fps_text=None):
    """Serialize the luma plane as 4:2:0 Y4M with neutral chroma."""
    t, h, w = video.frames.shape
    fps = fps_text or f"{video.fps.numerator}:{video.fps.denominator}"
    chroma = bytes([128]) * (2 * ((w + 1) // 2) * ((h + 1) // 2))
    with open(path, "wb") as fh:
        fh.write(f"YUV4MPEG2 W{w} H{h} F{fps} Ip A1:1 C420jpeg\n".encode("ascii"))
        for frame in video.frames:
            fh.write(b"FRAME\n")
            fh.write(np.clip(np.rint(frame), 0, 255).astype(np.uint8).tobytes())
            fh.write(chroma)


def write_raw(path, video):
    t, h, w = video.frames.shape
    chroma = bytes([128]) * (2 * ((w + 1) // 2) * ((h + 1) // 2))
    with open(path, "wb") as fh:
        for frame in video.frames:
            fh.write(np.clip(np.rint(frame), 0, 255).astype(np.uint8).tobytes())
            fh.write(chroma)
