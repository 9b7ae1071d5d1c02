# %% [markdown]
# What a cohort's gains look like
#
# A synthetic cohort stands in for real classroom data here.

# %%
import numpy as np

import gainstats as gs
from gainstats import descriptive as desc

records = gs.generate_cohort(gs.CohortSpec(n=155, seed=11))
gains = gs.build_gain_records(records)
g = np.array([r.gain for r in gains])

s = gs.summarize(g)
print(f"n={s.n} mean={s.mean:.3f} sd={s.sd:.3f} skew={s.skewness:.3f} "
      f"kurtosis={s.kurtosis:.3f} (excess {s.excess_kurtosis:.3f})")

# %% [markdown]
# Averaging the gains is not the same as taking the gain of the averages.

# %%
hake, mean_ind = gs.hake_vs_individual(records)
print(f"gain of the means {hake:.4f}, mean of the gains {mean_ind:.4f}")

# %%
hist = gs.histogram(g)
for left, right, c in zip(hist.bin_edges[:-1], hist.bin_edges[1:], hist.counts):
    print(f"[{left:+.2f}, {right:+.2f}) {'#' * int(c)}")

# %% [markdown]
# Kernel density with Silverman's bandwidth, and the normal quantile plot data.

# %%
curve = gs.kde(g)
print(f"bandwidth {curve.bandwidth:.4f}, area under curve {curve.integral():.4f}")
qq = gs.qq_normal(g)
print(np.column_stack([qq.theoretical_quantiles, qq.sample_quantiles])[:: len(g) // 8])

# %% [markdown]
# Students far from the cohort in gain, and the labels built from gain and
# initial-score z-scores.

# %%
high, low = gs.extreme_gain_counts(gains, z_threshold=1.0)
print(f"gain z >= 1: {high}, gain z <= -1: {low} of {len(gains)}")
labels = gs.classify_gain_groups(gains)
print({grp.value: labels.count(grp) for grp in gs.GainGroup})
print(f"IQR {desc.iqr(g):.3f}, Freedman-Diaconis bins {desc.freedman_diaconis_bins(g)}")
