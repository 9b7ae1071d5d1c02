# %% [markdown]
# Individual gain from one pre/post pair
#
# Scores live on [0, 1]. The gain is the share of the available headroom a
# student actually used.

# %%
import numpy as np

import gainstats as gs

initial = 0.73
finals = np.array([0.93, 0.90, 0.85, 0.67])
gains = gs.individual_gain(initial, finals)
for y, g in zip(finals, gains):
    print(f"{initial:.2f} -> {y:.2f}: gain {g:+.2f}")

# %% [markdown]
# Going back: the final score is recovered from the initial score and the gain.

# %%
print(gs.final_from_gain(initial, gains))

# %% [markdown]
# The fractional increase measures change relative to the starting score
# instead. The two are linked through the initial score.

# %%
inc = gs.fractional_increase(0.6, 0.8)
print(f"increase {inc:.4f}, gain {gs.individual_gain(0.6, 0.8):.4f}, "
      f"gain via increase {gs.gain_from_increase(inc, 0.6):.4f}")

# %% [markdown]
# Chaining two stages. Gains compose with x*y = x + y - xy, log
# differences simply add.

# %%
x, y, z = 0.2, 0.5, 0.8
two_stage = gs.change_combine(gs.individual_gain(x, y), gs.individual_gain(y, z))
print(f"g(x,z) = {gs.individual_gain(x, z):.4f}, combined stages = {two_stage:.4f}")
print(f"L(x,z) = {gs.log_difference(x, z):.4f}, "
      f"sum of stages = {gs.log_difference(x, y) + gs.log_difference(y, z):.4f}")

# %% [markdown]
# Halving both scores changes the gain, so it is not a scale-free measure of change.

# %%
print(gs.individual_gain(0.5, 0.75), gs.individual_gain(0.25, 0.375))
print(gs.scale_invariance_check("gain", 0.5, 0.75, 0.5))
print(gs.scale_invariance_check("log_difference", 0.5, 0.75, 0.5))

# %% [markdown]
# Undefined cases raise.

# %%
for func, args in ((gs.individual_gain, (1.0, 1.0)), (gs.fractional_increase, (0.0, 0.4))):
    try:
        func(*args)
    except gs.GainStatsError as exc:
        print(type(exc).__name__, exc)
