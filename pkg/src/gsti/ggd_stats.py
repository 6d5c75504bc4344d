"""Zero-mean generalized Gaussian (GGD) models of band-pass coefficients.

Block parameters are recovered by kurtosis matching after removing an
additive Gaussian noise channel of known variance from the sample
moments. Everything here is vectorized over a leading batch of blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, gammaln, poch

__all__ = [
    "GgdParams",
    "ScaledEntropy",
    "BETA_GRID",
    "ggd_kurtosis",
    "invert_kurtosis",
    "ggd_alpha",
    "ggd_variance",
    "ggd_entropy",
    "latent_moments",
    "latent_block_params",
    "scaled_entropy",
    "block_scaled_entropies",
]

BETA_MIN = 0.05
BETA_MAX = 10.0
BETA_STEP = 0.001
VAR_FLOOR = 1e-6
# kurtosis of the uniform law, the beta -> inf limit of the family
KURTOSIS_LIMIT = 1.8


@dataclass(frozen=True)
class GgdParams:
    alpha: float
    beta: float
    sigma2: float


@dataclass(frozen=True)
class ScaledEntropy:
    epsilon: float
    raw_entropy: float
    gamma: float


def ggd_kurtosis(beta):
    """Kurtosis of a GGD with shape ``beta``: G(5/b) G(1/b) / G(3/b)^2."""
    beta = np.asarray(beta, dtype=np.float64)
    if np.any(~(beta > 0)):
        raise ValueError("beta must be positive")
    inv = 1.0 / beta
    # Pochhammer ratios keep the Gaussian and Laplacian cases exact
    k = poch(3.0 * inv, 2.0 * inv) / poch(inv, 2.0 * inv)
    return k[()] if k.ndim == 0 else k


def _build_grid():
    n = int(round((BETA_MAX - BETA_MIN) / BETA_STEP)) + 1
    betas = BETA_MIN + BETA_STEP * np.arange(n)
    kurt = ggd_kurtosis(betas)
    betas.flags.writeable = False
    kurt.flags.writeable = False
    return betas, kurt


BETA_GRID, KURTOSIS_GRID = _build_grid()
KURTOSIS_MIN = float(KURTOSIS_GRID[-1])
KURTOSIS_MAX = float(KURTOSIS_GRID[0])

# ascending copies for searchsorted
_KURT_ASC = KURTOSIS_GRID[::-1]
_BETA_ASC = BETA_GRID[::-1]


def invert_kurtosis(kurtosis):
    """Grid-search the shape parameter whose kurtosis is closest to ``kurtosis``.

    Inputs outside the attainable range are clamped to the grid ends.
    """
    kurt = np.asarray(kurtosis, dtype=np.float64)
    if np.any(np.isnan(kurt)):
        raise ValueError("kurtosis is NaN")
    kurt = np.clip(kurt, KURTOSIS_MIN, KURTOSIS_MAX)
    hi = np.clip(np.searchsorted(_KURT_ASC, kurt), 1, len(_KURT_ASC) - 1)
    lo = hi - 1
    pick = np.where(kurt - _KURT_ASC[lo] <= _KURT_ASC[hi] - kurt, lo, hi)
    beta = _BETA_ASC[pick]
    return beta[()] if beta.ndim == 0 else beta


def ggd_alpha(sigma, beta):
    """Scale parameter from standard deviation: sigma * sqrt(G(1/b) / G(3/b))."""
    sigma = np.asarray(sigma, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    if np.any(~(beta > 0)):
        raise ValueError("beta must be positive")
    if np.any(sigma < 0):
        raise ValueError("sigma must be non-negative")
    alpha = sigma * np.sqrt(gamma(1.0 / beta) / gamma(3.0 / beta))
    return alpha[()] if alpha.ndim == 0 else alpha


def ggd_variance(alpha, beta):
    alpha = np.asarray(alpha, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    return alpha ** 2 * gamma(3.0 / beta) / gamma(1.0 / beta)


def _entropy(alpha, beta):
    return 1.0 / beta - np.log(beta) + np.log(2.0 * alpha) + gammaln(1.0 / beta)


def ggd_entropy(params) -> float:
    """Differential entropy (nats): 1/b - log(b / (2 a G(1/b)))."""
    if params.alpha <= 0 or params.beta <= 0:
        raise ValueError(f"invalid GGD parameters {params}")
    return float(_entropy(params.alpha, params.beta))


def latent_moments(blocks, noise_var: float):
    """Noise-corrected second moment and kurtosis of each block.

    ``blocks`` has shape ``(..., M)``. Moments are taken about zero with
    the divide-by-M estimator. Returns ``(var_raw, var, kurtosis)`` where
    ``var_raw = max(E[B^2] - noise_var, 0)`` and ``var`` is that value
    floored at ``VAR_FLOOR``.
    """
    if noise_var < 0:
        raise ValueError("noise_var must be non-negative")
    blocks = np.asarray(blocks, dtype=np.float64)
    if blocks.ndim == 0 or blocks.shape[-1] == 0:
        raise ValueError("empty block")
    # canonical summation order makes the moments exactly permutation invariant
    sq = np.sort(blocks, axis=-1) ** 2
    m2 = sq.mean(axis=-1)
    m4 = (sq * sq).mean(axis=-1)
    var_raw = np.maximum(m2 - noise_var, 0.0)
    var = np.maximum(var_raw, VAR_FLOOR)
    # E[B^4] = E[Bt^4] + 6 E[Bt^2] s2 + 3 s2^2 for independent Gaussian noise
    m4_latent = m4 - 6.0 * var * noise_var - 3.0 * noise_var ** 2
    m4_latent = np.maximum(m4_latent, KURTOSIS_LIMIT * var * var)
    return var_raw, var, m4_latent / (var * var)


def latent_block_params(block, noise_var: float = 0.1) -> GgdParams:
    """Fit the latent (pre-noise) GGD of one block by kurtosis matching."""
    block = np.asarray(block, dtype=np.float64).ravel()
    if block.size < 4:
        raise ValueError(f"block needs at least 4 samples, got {block.size}")
    _, var, kurt = latent_moments(block, noise_var)
    beta = float(invert_kurtosis(kurt))
    alpha = float(ggd_alpha(np.sqrt(var), beta))
    return GgdParams(alpha, beta, float(var))


def block_scaled_entropies(blocks, noise_var: float = 0.1):
    """Scaled entropies of a batch of blocks shaped ``(..., M)``.

    Returns ``(epsilon, entropy, gamma)`` arrays of shape ``blocks.shape[:-1]``.
    The scaling factor is ``log(1 + var)`` with the unfloored latent
    variance, so a block with no energy above the noise gets weight 0.
    """
    var_raw, var, kurt = latent_moments(blocks, noise_var)
    beta = invert_kurtosis(kurt)
    alpha = ggd_alpha(np.sqrt(var), beta)
    h = _entropy(alpha, beta)
    g = np.log1p(var_raw)
    eps = np.where(g > 0, g * h, 0.0)
    return eps, h, g


def scaled_entropy(block, noise_var: float = 0.1) -> ScaledEntropy:
    block = np.asarray(block, dtype=np.float64).ravel()
    if block.size < 4:
        raise ValueError(f"block needs at least 4 samples, got {block.size}")
    eps, h, g = block_scaled_entropies(block, noise_var)
    return ScaledEntropy(float(eps), float(h), float(g))
