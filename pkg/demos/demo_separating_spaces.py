"""Tour of the separating example spaces: S_A (discrete and Hausdorff
beyond c.e. sets), D_A (discrete, not Hausdorff), H_A (Hausdorff, not
discrete), and the busy-beaver-timed copy of N."""

from pathlib import Path

from efftop import zoo
from efftop.kernel import Name

DATA = Path(__file__).resolve().parent / "data"

a = zoo.parse_dce((DATA / "sample.dce").read_text())
print("oracle members:", sorted(a.members))
print("2 entered at", a.entry_stage(2), "and left at", a.exit_stage(2))

# S_A: points (n, [n in A]); a normality realizer leaks a d.c.e. stream.
realizer = zoo.reference_norm_realizer(a)
for n in range(5):
    proclamations, _log = zoo.norm_to_dce(realizer, n, fuel=10_000)
    print(f"n={n} proclamations {proclamations}")

# The embedding of S_A into N x [0,1] and its partial inverse.
iota, iota_inv, trail = zoo.dce_to_embedding(a, precision=16)
print("iota(0, True) =", iota(0, True))
print("trail of (2, False):", trail(2, False))

# D_A: names are characteristic streams with finitely many 1s removed.
# Two names of the same point always share a remaining 1.
d = zoo.da_discreteness(a)
full = zoo.da_name(a.members, frozenset())
dented = zoo.da_name(a.members, frozenset({min(a.members)}))
print("D_A same point:", d.check(full, dented).observe(1000))

# The diagonalizer defeats every bundled candidate Hausdorffness witness.
candidates = zoo.parse_hwit((DATA / "suite.hwit").read_text())
prefix, certs, _log = zoo.da_diagonalize(candidates, fuel=10_000)
print("defeated", len(certs), "candidates; A-prefix starts",
      prefix[:12], "...")

# H_A: the two points a and b are separated by a head-in-tail collision.
h = zoo.ha_hausdorff(a)
print("H_A distinct:", h.check(zoo.ha_a_name(a), zoo.ha_b_name(a)).observe(1000))

# Overtness turns an enumeration of the complement into one of A.
cototal = zoo.ha_overt_to_cototal(
    zoo.ha_reference_overt(a),
    Name.from_word([v + 1 for v in a.complement()], tail=0), fuel=10_000)
print("recovered A:", sorted(cototal))

# N': decoding needs the busy-beaver table, and any open-set realizer
# leaks lower bounds for it through its confirmation times.
bb = zoo.parse_bb((DATA / "sample.bb").read_text())
decode, encode, extractor = zoo.nprime_space(bb)
print("bb table:", bb.entries)
singleton = zoo.nprime_singleton_open(bb, 0)
for m in sorted(bb.entries):
    step = extractor(singleton, m, 0, fuel=1000)
    print(f"confirmation step for first symbol {m}: {step} >= bb({m}) = {bb[m]}")
