# %% [markdown]
# Comparing mean gains of two cohorts

# %%
import gainstats as gs

a = gs.generate_cohort(gs.CohortSpec(n=155, gain_dist=gs.Normal(0.45, 0.2), seed=1, cohort="A"))
b = gs.generate_cohort(gs.CohortSpec(n=155, gain_dist=gs.Normal(0.55, 0.2), seed=2, cohort="B"))
ga = [r.gain for r in gs.build_gain_records(a)]
gb = [r.gain for r in gs.build_gain_records(b)]

cmp = gs.compare_cohorts(ga, gb, labels=("A", "B"))
print(f"means {cmp.mean_a:.3f} vs {cmp.mean_b:.3f}")
print(f"difference {cmp.diff:.3f}, 95% CI [{cmp.ci_low:.3f}, {cmp.ci_high:.3f}]")
print(f"Welch t = {cmp.t_stat:.3f} on {cmp.df:.1f} df, p = {cmp.p_value:.4f}")

# %% [markdown]
# Effect size. Under normality, Phi(d / sqrt 2) is the chance a random
# student from B out-gains a random student from A.

# %%
print(f"Cohen's d {cmp.cohens_d:.3f}, probability of superiority {cmp.prob_superiority:.3f}")
for d in (0.2, 0.37, 0.5, 0.8):
    print(f"d={d:.2f}: {gs.probability_of_superiority(d):.4f}")

# %% [markdown]
# The pooled-variance test is available when equal spread is a fair assumption.

# %%
pooled = gs.compare_cohorts(ga, gb, equal_var=True)
print(f"pooled t = {pooled.t_stat:.3f}, df = {pooled.df:.0f}, p = {pooled.p_value:.4f}")
