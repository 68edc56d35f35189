"""Cone-type classification and the boundary-decomposition certificate.

Classifies boundary points of a disk in outward, inward and tangent
directions, lists exceptional directions at corners and crossings, and runs
the full certification pipeline on union scenes.
"""

import numpy as np

from plancurv.classify import classify_point, exceptional_directions, uwdc_verdict
from plancurv.samples import comb_scene, square, two_squares_scene
from plancurv.scene import Disk, Scene, Segment

disk_scene = Scene([Disk([0, 0], 1.0, tol=1e-5, name="disk")])
x = np.array([1.0, 0.0])

print("unit disk at the boundary point (1, 0), scale r=0.1, u=0.5:")
for label, v in [("outward", [1, 0]), ("inward", [-1, 0]), ("tangent", [0, 1])]:
    ct = classify_point(disk_scene, x, np.array(v, dtype=float), 0.1, 0.5)
    print(f"  {label:8s} -> {ct.kind} ({len(ct.witness)} boundary graph(s))")

print("\nexceptional directions:")
for label, scene, pt in [
    ("disk point", disk_scene, x),
    ("square corner", Scene([square()]), np.array([0.0, 0.0])),
    (
        "segment crossing",
        Scene([Segment([-1, -1], [1, 1], name="a"), Segment([-1, 1], [1, -1], name="b")]),
        np.array([0.0, 0.0]),
    ),
]:
    ed = exceptional_directions(scene, pt)
    print(f"  {label:16s}: {len(ed)} directions, covering={ed.covering_ok}, separation={ed.separation_ok}")

print("\ncertification of union scenes:")
for name, scene in [("two squares", two_squares_scene()), ("comb(4)", comb_scene(4))]:
    v = uwdc_verdict(scene)
    print(
        f"  {name:12s}: {v.status}, complement components = {v.complement_count}, "
        f"{len(v.boundary_graphs)} certified boundary graphs"
    )
