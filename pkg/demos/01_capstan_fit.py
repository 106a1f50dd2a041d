"""Recover belt friction from tension readings at several pre-bend angles."""

import numpy as np

from torus_retract import TensionSample, belt_tension, data_path, fit_belt_friction
from torus_retract.cli import read_samples

# Shipped placeholder tables
for name in ("tension_film.csv", "tension_guide_tube.csv"):
    res = fit_belt_friction(read_samples(data_path(name)))
    print(f"{name:24s} F0 = {res.F0_hat:6.3f} N   mu_b = {res.mu_belt_hat:.4f}")

# Synthetic readings with 5 % multiplicative noise, five per angle
rng = np.random.default_rng(1)
angles = np.repeat(np.radians([0, 15, 30, 45, 60, 75]), 5)
T = np.array([belt_tension(10.0, 0.55, a) for a in angles]) * np.exp(rng.normal(0, 0.05, angles.size))
res = fit_belt_friction([TensionSample(a, t) for a, t in zip(angles, T)])
print(f"noisy synthetic           F0 = {res.F0_hat:6.3f} N   mu_b = {res.mu_belt_hat:.4f}"
      f"   rms log residual {res.rms_log_residual:.3f}")
