"""Step a retraction through a bend with and without the guide tube."""

import math

from torus_retract import SimScenario, data_path, simulate
from torus_retract.config import load_config

bare = load_config(data_path("calibrated_elbow.json"))
tube = load_config(data_path("calibrated_guide_tube.json"))

for deg in (15, 30, 45, 60):
    row = [f"{deg:3d} deg"]
    for cfg in (bare, tube):
        sc = cfg.scenario.replace(theta=math.radians(deg))
        tr = simulate(SimScenario(sc, cfg.step, cfg.guide_tube))
        if tr.passed:
            row.append("passed the bend".ljust(34))
        else:
            row.append(f"{tr.failure_mode.value} at L = {tr.L_fail * 1e3:.0f} mm".ljust(34))
    print("   ".join(row).rstrip())
print("columns: bare body, guide tube")
