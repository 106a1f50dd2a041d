"""Failure mode for each pre-bend angle and tip length of the calibrated robot."""

import math

import numpy as np

from torus_retract import classify, data_path
from torus_retract.config import load_config

sc = load_config(data_path("calibrated_elbow.json")).scenario
short = {"RETRACT_OK": ".", "ELBOW_BENDING": "B", "ELBOW_BUCKLING": "K",
         "STRAIGHT_BENDING": "b", "STRAIGHT_BUCKLING": "k"}

lengths = np.linspace(0.05, 1.0, 20)
print(f"tip length from {lengths[0]:.2f} m (left) to {lengths[-1]:.2f} m (right)")
print("theta")
for deg in (0, 15, 30, 45, 60, 75):
    row = []
    for L in lengths:
        s = sc.replace(theta=math.radians(deg), L=float(L))
        row.append(short[classify(s.state, s.rho, s.friction, s.geometry, s.environment).mode.value])
    print(f"{deg:4d}   " + "".join(row))
print("legend: . ok, B elbow bending, K elbow buckling, b straight bending, k straight buckling")
