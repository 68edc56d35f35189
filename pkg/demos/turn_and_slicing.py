"""Turn, one-Lipschitz decomposition, Steiner areas and halfplane slicing.

Decomposes closed curves into few 1-Lipschitz graph pieces, certifies DC
graphs through the turn bound, verifies the Steiner polynomial on parallel
sets, and spot-checks the chi slicing identity with random halfplanes.
"""

import math

import numpy as np

from plancurv.curvature import slicing_identity_check, steiner_check
from plancurv.errors import TouchingHalfplane
from plancurv.planar import Polyline, dc_certify, decompose_one_lipschitz, turn
from plancurv.samples import square, two_squares_scene
from plancurv.scene import Disk, Segment

print("one-Lipschitz decomposition of regular n-gons (bound is 5 pieces):")
for n in (8, 16, 64, 256):
    th = 2 * math.pi * np.arange(n) / n
    poly = Polyline(np.c_[np.cos(th), np.sin(th)], closed=True)
    pieces = decompose_one_lipschitz(poly)
    print(f"  {n:4d}-gon: turn = {turn(poly):.4f}, pieces = {len(pieces)}")

print("\nDC certification of a semicircle polyline:")
th = np.linspace(0, math.pi, 65)
half = Polyline(np.c_[np.cos(th), np.sin(th)])
slopes = np.abs(np.diff(half.vertices[:, 1]) / np.diff(half.vertices[:, 0]))
cert = dc_certify(half, np.array([0.0, 1.0]), float(slopes.max()) + 1, math.pi)
print(f"  certified = {cert.ok}, turn = {cert.total_turn:.4f} (analytic limit pi = {math.pi:.4f})")

print("\nSteiner parallel-set areas:")
for piece, eps, closed_form in [
    (square(), 1.0, 5 + math.pi),
    (Disk([0, 0], 1.0, tol=1e-5, name="disk"), 1.0, 4 * math.pi),
    (Segment([0, 0], [3, 0], name="seg"), 0.5, 3 + math.pi / 4),
]:
    rep = steiner_check(piece, eps, quad_segs=512)
    print(
        f"  {piece.name:8s} eps={eps}: measured {rep.parallel_area:.6f}, "
        f"predicted {rep.predicted:.6f}, closed form {closed_form:.6f}"
    )

print("\nslicing identity on the two-squares scene (20 random halfplanes):")
rng = np.random.default_rng(5)
sc = two_squares_scene()
passes = 0
trials = 0
while trials < 20:
    a = rng.uniform(0, 2 * math.pi)
    v = np.array([math.cos(a), math.sin(a)])
    t = rng.uniform(-2, 2)
    try:
        rep = slicing_identity_check(sc, v, t)
    except TouchingHalfplane:
        continue
    trials += 1
    passes += rep.ok
print(f"  {passes}/{trials} exact chi identities")
