"""
Pre-valuations and two-valued states
====================================

Proper Sasaki filters and pre-valuations are the same objects seen twice.
Valuations are the additive ones.
"""

from sasaki import filters as flt
from sasaki import lattices, validate_oml

for name in ("chain2", "boolean8", "mo2", "mo3"):
    L = validate_oml(lattices.load_bundled(name))
    prevals = list(flt.enumerate_prevaluations(L))
    vals = list(flt.find_valuations(L))
    print(f"{name}: {len(prevals)} pre-valuations, {len(vals)} valuations")
    for v in vals:
        print("   support", sorted(v.support))

# Going back and forth between the two presentations
L = validate_oml(lattices.load_bundled("mo2"))
v = flt.PreValuation.indicator(L, ["a", "b", "1"])
F = flt.prevaluation_to_filter(v)
print(F, "->", flt.filter_to_prevaluation(F) == v)
print("additive:", flt.is_valuation(v))
