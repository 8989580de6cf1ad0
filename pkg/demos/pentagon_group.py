"""A walk through the right-angled Coxeter group whose nerve is a pentagon.

Run with ``python demos/pentagon_group.py``.
"""
from racgkit.coxeter import RACG, nerve_of_convex_union, normal_form
from racgkit.davis import chi_orb_consistency, commutator_cover, davis_ball, kappa
from racgkit.homology import betti, reduced_betti
from racgkit.l2 import MGon, complex_l2, l2_betti
from racgkit.simplicial import polygon

L = polygon(5)
W = RACG(L)
print("nerve:", L, "kappa =", kappa(L))

# words: v0 and v1 commute, v0 and v2 do not
print("v1 v0       ->", ".".join(normal_form(W, "v1 v0")))
print("v0 v2 v0 v0 ->", ".".join(normal_form(W, "v0 v2 v0 v0")))
print("ball sizes:", [len(W.ball(n)) for n in range(5)])

X = davis_ball(W, 4)
print("Davis ball of radius 4:", X.counts, "acyclic:", not reduced_betti(X))

P = commutator_cover(L)
r = chi_orb_consistency(L)
print("commutator cover:", P.counts, "betti", betti(P).render(), "chi", r.chi, "= 32 * kappa:", r.ok)

print("l2 Betti numbers:", l2_betti(MGon(5)).render())

# the index-2 subgroup fixing one wall has a hexagon as its nerve
N = nerve_of_convex_union(W, [(), ("v0",)])
print("nerve of K u v0 K:", N, "beta_1 =", complex_l2(N).render()[1])
