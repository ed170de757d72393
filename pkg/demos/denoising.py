#!/usr/bin/env python3
"""Blur-and-project denoising ablations on the noisy spiral.

Runs all five variants (blur only, tangent projection only, blur+tangent,
blur+sphere, sphere only) with the same neighborhood size and bandwidth
and scores mean squared distance to the noise-free curve. Wide neighborhoods on a tightly wound spiral break the
tangent-plane methods while the spherical projection keeps working;
blurring alone is strong here but leaves curvature bias behind.

Writes spiral_denoising.png when matplotlib is available.
"""
import numpy as np

from spherelets import DenoiseConfig, denoise
from spherelets.datasets import distance_to_curve, noisy_spiral

sample = noisy_spiral(500, noise_sd=0.2, seed=0)
base = np.mean(distance_to_curve(sample.points, "spiral", 100_000) ** 2)
print(f"noisy input: mean squared distance to curve {base:.4e}\n")

results = {}
for method in ("gbms", "ltp", "mbms", "smbms", "lsp"):
    cfg = DenoiseConfig(method=method, k=36, sigma=1.0, iters=1, d=1)
    out, fallbacks = denoise(sample.points, cfg, return_info=True)
    msd = np.mean(distance_to_curve(out, "spiral", 100_000) ** 2)
    results[method] = (out, msd)
    print(f"{method:6s}: msd {msd:.4e}  ({(1 - msd / base) * 100:+6.1f}% vs noisy, {fallbacks} fallbacks)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not available; skipping plot")
else:
    fig, axes = plt.subplots(1, 4, figsize=(16, 4))
    panels = [
        ("clean", sample.clean),
        ("noisy", sample.points),
        ("mbms", results["mbms"][0]),
        ("smbms", results["smbms"][0]),
    ]
    for ax, (title, pts) in zip(axes, panels):
        ax.scatter(pts[:, 0], pts[:, 1], s=3)
        ax.set_title(title)
        ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig("spiral_denoising.png", dpi=120)
    print("\nwrote spiral_denoising.png")
