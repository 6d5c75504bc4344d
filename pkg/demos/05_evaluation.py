# %% [markdown]
# # Correlating scores with opinion scores
# A made-up study: 40 videos at three frame rates. The score is a noisy,
# decreasing function of MOS, as a distortion measure should be.

# %%
import numpy as np

from gsti import EvalRecord, eval_report, format_report

rng = np.random.default_rng(2)
mos = rng.uniform(30, 85, 40)
score = 0.05 / (1 + np.exp((mos - 55) / 8)) + rng.normal(0, 0.004, 40)
fps = rng.choice([30, 60, 120], 40)
records = [EvalRecord(f"v{i}", float(f), float(s), float(m))
           for i, (f, s, m) in enumerate(zip(fps, score, mos))]

# %%
report = eval_report(records)
print(format_report(report))
print("logistic parameters:", np.round(report["logistic"]["params"], 4))

# %% [markdown]
# Rank correlations are negative because lower GSTI means better quality;
# PLCC is taken after the logistic mapping, so it is positive.
