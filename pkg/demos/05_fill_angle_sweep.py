"""Fill ratio by pre-bend angle grid, bare body against guide tube."""

import numpy as np

from torus_retract import data_path, run_sweep
from torus_retract.config import load_config

for name in ("fill_sweep_bare.json", "fill_sweep_guide_tube.json"):
    cfg = load_config(data_path(name))
    rows = run_sweep(cfg.sweep)
    fills = sorted({r.coords["fill_ratio"] for r in rows})
    print(name)
    print("  fill  " + "  ".join(f"{np.degrees(t):8.0f}" for t in cfg.sweep.axes[1].values))
    for f in fills:
        cells = [r for r in rows if r.coords["fill_ratio"] == f]
        marks = ["      ok" if r.trace.passed else f"{r.peak_severity:8.3g}" for r in cells]
        print(f"  {f:4.0%}  " + "  ".join(marks))
print("failing cells show the peak severity along the retraction")
