"""Moving the tail beyond a quantile: quantiles do not notice, expectiles do.

Draw a generalized Pareto sample, push every value above the 0.975 quantile
further out by 0.1, and compare the risk measures before and after.
"""

from expectile_hydro.tail_demo import GpParams, gp_inverse_cdf, run_tail_experiment

params = GpParams(mu=0.0, sigma=1.0, xi=0.2)
print(f"exact 0.975 quantile: {gp_inverse_cdf(0.975, params):.4f}")

rep = run_tail_experiment(params, n=1_000_000, level=0.975, shift=0.1, seed=42)
print(f"quantile  {rep.q_before:.4f} -> {rep.q_after:.4f}")
print(f"expectile {rep.e_before:.4f} -> {rep.e_after:.4f}")

# The old expectile value is now exceeded more often relative to its
# distance mass, so its return period shrinks.
print(f"return period of e_before: {rep.rp_before:.2f} -> {rep.rp_after:.2f}")

for (lv, dq), (_, de) in zip(rep.lower_level_quantile_deltas, rep.all_level_expectile_deltas):
    print(f"level {lv}: quantile change {dq:+.5f}, expectile change {de:+.5f}")
