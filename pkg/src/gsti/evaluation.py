"""Correlation of objective scores with subjective opinion scores, and PSNR."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy import optimize
from scipy.stats import rankdata

from .video_io import LumaVideo, temporal_upsample_duplicate

__all__ = [
    "EvalRecord",
    "LogisticFit",
    "srocc",
    "krocc",
    "plcc",
    "rmse",
    "logistic",
    "logistic_fit",
    "psnr_frame",
    "psnr_video",
    "read_records",
    "eval_report",
    "format_report",
]

PSNR_CAP = 100.0
MIN_RECORDS = 3
MIN_LOGISTIC = 5
CSV_FIELDS = ("video_id", "fps", "predicted", "subjective")


@dataclass(frozen=True)
class EvalRecord:
    video_id: str
    fps: float
    predicted: float
    subjective: float
    content_id: Optional[str] = None

    def __post_init__(self):
        if not (math.isfinite(self.predicted) and math.isfinite(self.subjective)):
            raise ValueError(f"non-finite score in record {self.video_id!r}")


def _pair(xs, ys):
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError(f"length mismatch: {xs.shape} vs {ys.shape}")
    if xs.size < 3:
        raise ValueError(f"need at least 3 pairs, got {xs.size}")
    return xs, ys


def _pearson(xs, ys):
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0 or sy == 0:
        raise ValueError("correlation undefined: zero variance")
    return float(dx @ dy) / (sx * sy)


def srocc(xs, ys) -> float:
    """Spearman rank correlation with average ranks for ties."""
    xs, ys = _pair(xs, ys)
    return _pearson(rankdata(xs), rankdata(ys))


def krocc(xs, ys) -> float:
    """Kendall tau-a; tied pairs count as neither concordant nor discordant."""
    xs, ys = _pair(xs, ys)
    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        raise ValueError("correlation undefined: zero variance")
    n = xs.size
    sx = np.sign(xs[:, None] - xs[None, :])
    sy = np.sign(ys[:, None] - ys[None, :])
    s = int(np.triu(sx * sy, 1).sum())
    return s / (n * (n - 1) // 2)


def plcc(xs, ys) -> float:
    xs, ys = _pair(xs, ys)
    return _pearson(xs, ys)


def rmse(xs, ys) -> float:
    xs, ys = _pair(xs, ys)
    return float(np.sqrt(np.mean((xs - ys) ** 2)))


def logistic(s, t1, t2, t3, t4):
    """Monotone four-parameter logistic ``(t1 - t2) / (1 + exp(-(s - t3)/|t4|)) + t2``."""
    s = np.asarray(s, dtype=np.float64)
    z = np.clip(-(s - t3) / abs(t4), -700.0, 700.0)
    return (t1 - t2) / (1.0 + np.exp(z)) + t2


@dataclass(frozen=True)
class LogisticFit:
    params: tuple
    residual: float
    converged: bool

    def __call__(self, s):
        return logistic(s, *self.params)


def logistic_fit(predicted, subjective, max_restarts: int = 8) -> LogisticFit:
    """Least-squares fit of the logistic map by Nelder-Mead simplex search.

    The simplex is restarted from its best vertex until the objective stops
    improving. ``residual`` is the RMSE of the mapped predictions.
    """
    x = np.asarray(predicted, dtype=np.float64)
    y = np.asarray(subjective, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < MIN_LOGISTIC:
        raise ValueError(f"logistic fit needs at least {MIN_LOGISTIC} points, got {x.size}")
    if np.ptp(y) == 0:
        raise ValueError("degenerate spread: subjective scores are all equal")
    if np.ptp(x) == 0:
        raise ValueError("degenerate spread: predicted scores are all equal")

    # fit in standardized units so the simplex tolerances are scale free
    x0, xs = float(np.median(x)), float(x.std())
    y0, ys = float(y.min()), float(np.ptp(y))
    u = (x - x0) / xs
    v = (y - y0) / ys

    def sse(p):
        r = logistic(u, *p) - v
        return float(r @ r)

    # start with the orientation of the data; distortion scores fall as MOS rises
    p = np.array([1.0, 0.0, 0.0, 1.0] if u @ (v - v.mean()) >= 0 else [0.0, 1.0, 0.0, 1.0])
    best = sse(p)
    converged = False
    for _ in range(max_restarts):
        res = optimize.minimize(sse, p, method="Nelder-Mead",
                                options={"xatol": 1e-10, "fatol": 1e-15,
                                         "maxiter": 4000, "maxfev": 8000})
        improved = res.fun < best - max(1e-15, 1e-10 * best)
        if res.fun <= best:
            p, best = res.x, res.fun
        if res.success and not improved:
            converged = True
            break
    t1, t2, t3, t4 = (float(c) for c in p)
    params = (y0 + ys * t1, y0 + ys * t2, x0 + xs * t3, xs * abs(t4))
    fit = LogisticFit(params, 0.0, converged)
    residual = float(np.sqrt(np.mean((fit(x) - y) ** 2)))
    return LogisticFit(params, residual, converged)


def psnr_frame(ref, dist, peak: float = 255.0) -> float:
    ref = np.asarray(ref, dtype=np.float64)
    dist = np.asarray(dist, dtype=np.float64)
    mse = float(np.mean((ref - dist) ** 2))
    if mse == 0:
        return PSNR_CAP
    return min(PSNR_CAP, 10.0 * math.log10(peak * peak / mse))


def psnr_video(ref: LumaVideo, dist: LumaVideo) -> float:
    """Mean per-frame PSNR after duplicating frames to a common rate."""
    if (ref.width, ref.height) != (dist.width, dist.height):
        raise ValueError(f"resolution mismatch: ref {ref.width}x{ref.height}, "
                         f"dist {dist.width}x{dist.height}")
    if dist.fps < ref.fps:
        dist = temporal_upsample_duplicate(dist, ref.fps)
    elif ref.fps < dist.fps:
        ref = temporal_upsample_duplicate(ref, dist.fps)
    n = min(ref.frame_count, dist.frame_count)
    return float(np.mean([psnr_frame(ref.frames[t], dist.frames[t]) for t in range(n)]))


def read_records(path) -> List[EvalRecord]:
    """Load ``video_id,fps,predicted,subjective[,content_id]`` CSV rows."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = tuple(reader.fieldnames or ())
        if header[:4] != CSV_FIELDS or header[4:] not in ((), ("content_id",)):
            raise ValueError(f"malformed header {','.join(header)!r}; expected "
                             f"{','.join(CSV_FIELDS)}[,content_id]")
        records = []
        for row in reader:
            records.append(EvalRecord(row["video_id"], float(Fraction(row["fps"])),
                                      float(row["predicted"]), float(row["subjective"]),
                                      row.get("content_id") or None))
    return records


def _metrics(pred, mos, mapping):
    mapped = mapping(pred) if mapping is not None else pred
    return {"n": int(pred.size), "srocc": srocc(pred, mos), "krocc": krocc(pred, mos),
            "plcc": plcc(mapped, mos), "rmse": rmse(mapped, mos)}


def eval_report(records: Sequence[EvalRecord]) -> Dict:
    """Overall and per-frame-rate correlation metrics.

    One logistic map is fitted on the whole dataset and applied to every
    group before PLCC and RMSE. Groups with fewer than three records are
    skipped with a note.
    """
    records = list(records)
    if len(records) < MIN_RECORDS:
        raise ValueError(f"need at least {MIN_RECORDS} records, got {len(records)}")
    pred = np.array([r.predicted for r in records])
    mos = np.array([r.subjective for r in records])
    notes = []
    fit = None
    if len(records) >= MIN_LOGISTIC:
        fit = logistic_fit(pred, mos)
        if not fit.converged:
            notes.append("logistic fit did not converge; using best parameters found")
    else:
        notes.append(f"fewer than {MIN_LOGISTIC} records: PLCC/RMSE use unmapped scores")

    groups = []
    for fps in sorted({r.fps for r in records}):
        idx = [i for i, r in enumerate(records) if r.fps == fps]
        if len(idx) < MIN_RECORDS:
            notes.append(f"fps {fps:g}: {len(idx)} records, group skipped")
            continue
        row = {"fps": fps}
        row.update(_metrics(pred[idx], mos[idx], fit))
        groups.append(row)

    return {
        "overall": _metrics(pred, mos, fit),
        "groups": groups,
        "logistic": None if fit is None else {
            "params": list(fit.params), "residual": fit.residual,
            "converged": fit.converged},
        "notes": notes,
    }


def format_report(report: Dict) -> str:
    """Aligned-column text table of an :func:`eval_report` result."""
    rows = [("set", "n", "SROCC", "KROCC", "PLCC", "RMSE")]
    for g in report["groups"]:
        rows.append((f"{g['fps']:g} fps", str(g["n"]), f"{g['srocc']:.4f}",
                     f"{g['krocc']:.4f}", f"{g['plcc']:.4f}", f"{g['rmse']:.4f}"))
    o = report["overall"]
    rows.append(("overall", str(o["n"]), f"{o['srocc']:.4f}", f"{o['krocc']:.4f}",
                 f"{o['plcc']:.4f}", f"{o['rmse']:.4f}"))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(c.rjust(w) if i else c.ljust(w) for i, (c, w) in
                       enumerate(zip(r, widths))) for r in rows]
    lines.extend(f"note: {n}" for n in report["notes"])
    return "\n".join(lines)
