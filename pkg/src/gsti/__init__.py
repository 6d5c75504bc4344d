"""Entropic-differencing full-reference video quality (GSTI) for mixed frame rates."""

__version__ = "0.1.0"

from .video_io import (LumaVideo, VideoFormatError, VideoMeta, load_raw_yuv, parse_y4m,
                       read_y4m, spatial_downsample, temporal_downsample_drop,
                       temporal_upsample_duplicate)
from .bandpass import (build_haar_packet, coefficient_histogram, spatial_ms, temporal_filter,
                       temporal_filter_stack)
from .ggd_stats import (GgdParams, ggd_alpha, ggd_entropy, ggd_kurtosis, invert_kurtosis,
                        latent_block_params, scaled_entropy)
from .indices import GstiConfig, GstiReport, score_pipeline
from .evaluation import (EvalRecord, eval_report, format_report, krocc, logistic_fit, plcc,
                         psnr_video, read_records, rmse, srocc)
