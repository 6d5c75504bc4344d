# %% [markdown]
# # Temporal Haar packet filters
# Three levels of Haar splits give eight length-8 filters. Dropping the
# low-pass one leaves seven band-pass filters, ordered by how often they
# change sign.

# %%
import numpy as np

from gsti import build_haar_packet

bank = build_haar_packet(3)
np.set_printoptions(precision=3, suppress=True)
for k in range(1, len(bank) + 1):
    signs = "".join("+" if c > 0 else "-" for c in bank[k])
    print(f"b{k}: {signs}  sum={bank[k].sum():+.1e}")

# %% [markdown]
# The filters are orthonormal, so the Gram matrix is the identity.

# %%
print(np.round(bank.filters @ bank.filters.T, 12))

# %% [markdown]
# Frequency response magnitude: each filter covers an equal slice of the
# band (constant linear bandwidth), with b1 closest to DC.

# %%
freqs = np.linspace(0, 0.5, 9)
for k in range(1, len(bank) + 1):
    resp = np.abs(np.exp(-2j * np.pi * np.outer(freqs, np.arange(8))) @ bank[k])
    print(f"b{k}", " ".join(f"{r:4.2f}" for r in resp))
