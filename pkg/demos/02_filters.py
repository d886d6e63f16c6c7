"""
Sasaki filters and their closure
================================

Start from the upset generated by two elements and apply the lifted Sasaki
operator until nothing changes.
"""

from sasaki import filters as flt
from sasaki import lattices, validate_oml

L = validate_oml(lattices.load_bundled("boolean8"))

S = flt.generated(L, ["1", "2"])
for k, step in enumerate(flt.closure_chain(S)):
    print(f"step {k}: {sorted(step.members)}")

F = flt.sasaki_closure(S)
print("closure:", sorted(F.members), "proper" if F.proper else "improper")

# On MO2 two atoms can share a proper filter: the closure of up(a) with up(b)
mo2 = validate_oml(lattices.load_bundled("mo2"))
G = flt.sasaki_closure(flt.generated(mo2, ["a", "b"]))
print("MO2:", sorted(G.members), "proper" if G.proper else "improper")

# Counting filters on the bundled lattices
for name in ("boolean4", "boolean8", "mo2", "mo3", "mo4"):
    M = validate_oml(lattices.load_bundled(name))
    fs = list(flt.enumerate_sasaki_filters(M))
    print(f"{name:9s} {len(fs):3d} Sasaki filters, {sum(F.proper for F in fs):3d} proper")
