"""Quantile and expectile losses side by side.

Both losses are zero when the prediction hits the observation. The quantile
loss grows linearly, the expectile loss quadratically, and both tilt their
penalty with the level: at a high level, under-prediction costs more than
over-prediction.
"""

import numpy as np

from expectile_hydro import (
    expectile_loss,
    quantile_loss,
    sample_expectile,
    sample_quantile,
)

# Loss of a prediction r when x = 0 materializes.
r = np.linspace(-2, 2, 9)
for level in (0.05, 0.5, 0.95):
    print(f"level {level}")
    print("   r      quantile  expectile")
    for ri, ql, el in zip(r, quantile_loss(r, 0.0, level), expectile_loss(r, 0.0, level)):
        print(f"{ri:5.1f}  {ql:9.4f}  {el:9.4f}")

# The sample minimisers of the mean losses are the sample quantile and expectile.
rng = np.random.default_rng(0)
x = rng.gamma(0.8, 2.0, size=5000)
grid = np.linspace(x.min(), np.quantile(x, 0.999), 4001)
for level in (0.5, 0.9, 0.975):
    q_grid = grid[np.argmin([quantile_loss(g, x, level).mean() for g in grid])]
    e_grid = grid[np.argmin([expectile_loss(g, x, level).mean() for g in grid])]
    print(
        f"level {level}: quantile {sample_quantile(x, level):.3f} (grid {q_grid:.3f}), "
        f"expectile {sample_expectile(x, level):.3f} (grid {e_grid:.3f})"
    )

# At level 1/2 the expectile is the mean.
print(f"mean {x.mean():.6f}, expectile_0.5 {sample_expectile(x, 0.5):.6f}")
