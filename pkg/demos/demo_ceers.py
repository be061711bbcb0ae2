"""Walk through the ceer toolkit: saturation, quotient spaces, the
round trip with a surjection, and the quotient with no non-trivial
decidable properties."""

from efftop import ceers

# A ceer presented by three generator pairs.  Saturation consumes them
# under a fuel bound and closes under reflexivity/symmetry/transitivity.
pres = ceers.CeerPresentation(pairs=[(0, 1), (2, 3), (1, 2)])

state = ceers.saturate(pres, fuel=10)
print("classes:", sorted(sorted(c) for c in state.classes()))
print("merge log:", state.event_log())

# Equality of classes is a semidecision: Confirmed carries the least
# confirming fuel, NOT_YET means "not within this budget".
obs = ceers.ceer_equal(pres, 0, 3)
print("0 ~ 3:", obs.observe(100))
print("0 ~ 9:", ceers.ceer_equal(pres, 0, 9).observe(100))

# The quotient N/R is a discrete represented space.
d = ceers.quotient_discreteness(pres)
p0 = ceers.quotient_point(pres, 0)
p3 = ceers.quotient_point(pres, 3)
print("witness confirms [0] = [3]:", d.check(p0.name, p3.name).observe(100))

# Round trip: a surjection s induces a ceer, phi_inv finds a preimage.
iso = ceers.iso_with_quotient(
    s=lambda n: ceers.quotient_point(pres, n),
    d=ceers.quotient_discreteness(pres))
for n in range(5):
    back = iso.phi_inv(iso.phi(n), fuel=10_000)
    print(f"phi_inv(phi({n})) = {back}")

# The adversarial quotient: no candidate program computes a non-constant
# function on it.  Each candidate receives a replayable certificate.
bad = ceers.example35_ceer()
for candidate in range(6):
    cert = ceers.check_no_decidable_property(bad, candidate, fuel=20_000)
    print(f"candidate {candidate}: {type(cert).__name__}")
