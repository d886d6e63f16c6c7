"""
Projecting one ray onto two planes
==================================

Project a ray at angle theta from e1 onto planes through e1 and measure the
inner product of the two images. The reachable range is [f(cos theta), 1].
"""

import math

import numpy as np

from sasaki import hilbert3 as h3

print(" deg   analytic min   scanned min    deviation")
for deg in range(10, 90, 10):
    t = math.radians(deg)
    lo, hi = h3.lemma_interval(t)
    scan = h3.scan_pair_dot(t)
    print(f"{deg:4d}  {lo: .10f}  {scan.minimum: .10f}  {abs(scan.minimum - lo):.1e}")

# The minimum sits on the antidiagonal psi = -phi
t = math.pi / 3
star = h3.extremal_phi(t)
print("argmin phi", star, "cos^2 =", math.cos(star) ** 2)

# Any value in the range can be hit
phi, psi = h3.solve_pair(t, 0.5)
print("target 0.5 reached with", phi, psi, "->", h3.pair_dot(t, phi, psi))

# The angle ladder theta_n = arccos(n/(n+2))
print([round(math.degrees(h3.theta(n)), 3) for n in range(6)])
print("rounds needed from 45 deg:", h3.n_min(math.pi / 4))
print("f below identity:", bool(np.all(h3.f(np.linspace(0, 0.999, 1000)) < np.linspace(0, 0.999, 1000))))
