"""
Finite orthomodular lattices
============================

Load a bundled lattice, query its operations, and see the validator reject a
lattice that is orthocomplemented but not orthomodular.
"""

from sasaki import lattices, validate_oml
from sasaki.oml import OrthomodularityViolation

# MO2: bottom, top and two complementary pairs {a, a'} and {b, b'}
L = validate_oml(lattices.load_bundled("mo2"))
print(L, "atoms:", L.atoms())

# a and b are not compatible, and the Sasaki projection of a onto b is b
print("a ^ b =", L.meet("a", "b"))
print("a & b =", L.sasaki("a", "b"))
print("a compatible with b:", L.compatible("a", "b"))
print("a compatible with a':", L.compatible("a", "a'"))

# The hexagon (benzene) is an ortholattice in which orthomodularity fails
try:
    validate_oml(lattices.load_bundled("benzene_o6"))
except OrthomodularityViolation as exc:
    print("rejected:", exc)
