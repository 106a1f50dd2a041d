"""Critical tip length and critical pre-bend angle for the calibrated robot."""

import math

from torus_retract import critical_prebend_angle, critical_tip_length, data_path
from torus_retract.config import load_config

sc = load_config(data_path("calibrated_elbow.json")).scenario

print("theta [deg]   L* [mm]   status")
for deg in (15, 30, 45, 60, 75):
    c = critical_tip_length(sc.replace(theta=math.radians(deg)))
    val = f"{c.value * 1e3:8.2f}" if c.value is not None else "       -"
    print(f"{deg:10d}  {val}   {c.status}")

print("\nL [m]   theta* [deg]   status")
for L in (0.1, 0.3, 0.5, 0.8):
    c = critical_prebend_angle(sc.replace(L=L))
    print(f"{L:5.2f}   {math.degrees(c.value):12.2f}   {c.status}")
