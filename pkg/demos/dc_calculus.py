"""Difference-of-convex calculus on an interval.

Builds piecewise-linear DC functions, runs the closed algebra (sum, max,
min, scaling), inspects Clarke subdifferentials at kinks, and sorts a family
of graphs into non-crossing envelopes without changing their union.
"""

import numpy as np

from plancurv import dcfun as dc

absf = dc.DCFun.from_points([-1, 0, 1], [1, 0, 1])          # |x|
line = dc.DCFun.linear(-1, 1, slope=0.8, offset=-0.3)
wavy = dc.DCFun.from_points([-1, -0.4, 0.2, 1], [0.5, -0.6, 0.4, -0.2])

print("|x| at 0.5:", absf(0.5))
print("(|x| + line)(0.25):", dc.add(absf, line)(0.25))
print("max(|x|, wavy)(0):", dc.max2(absf, wavy)(0.0))
print("min(|x|, wavy)(0):", dc.min2(absf, wavy)(0.0))

print("\nClarke subdifferential of |x| at 0:", dc.clarke_subdiff(absf, 0.0))
print("Clarke subdifferential of -|x| at 0:", dc.clarke_subdiff(dc.negate(absf), 0.0))
print("Lipschitz constant of the wavy function:", dc.lipschitz_constant(wavy))

print("\nSorting three graphs into envelopes:")
family = [absf, line, wavy]
envelopes = dc.sorted_envelopes(family)
xs = np.linspace(-1, 1, 9)
for i, env in enumerate(envelopes):
    print(f"  g{i + 1}:", np.round(env(xs), 3))
stack = np.sort(np.vstack([f(xs) for f in family]), axis=0)
print("union of graphs preserved:", np.allclose(stack, np.vstack([e(xs) for e in envelopes])))
