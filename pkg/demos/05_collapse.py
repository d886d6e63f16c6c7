"""
Collapsing two rays
===================

Two distinct rays in real 3-space generate a Sasaki filter that contains the
zero subspace. The certificate records every projection, and an independent
checker replays it.
"""

import math

import numpy as np

from sasaki import collapse as col
from sasaki import hilbert3 as h3

u, v = np.array([1.0, 0, 0]), np.array([1.0, 1, 0])
cert = col.collapse(u, v)
print(len(cert.rounds), "rounds")
for k, (sa, sb) in enumerate(cert.rounds, start=1):
    angle = h3.angle_atoms(h3.atom(sa.result), h3.atom(sb.result))
    print(f"round {k}: angle {math.degrees(angle):10.6f} deg")

report = col.verify_certificate(cert)
print(report)

# Tampering with one result is caught
doc = cert.to_dict()
doc["rounds"][2][0]["result"][0] += 1e-3
print(col.verify_certificate(doc))

# A ray and a subspace not above it cannot share a proper filter
E = [[1.0, 1, 0], [0, 0, 1]]
ref = col.refute_second_element(u, E)
print("refutation:", col.verify_certificate(ref))
