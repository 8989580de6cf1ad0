"""Certify that some flag 2-spheres have vanishing l2-homology.

Run with ``python demos/sphere_certificates.py``.
"""
import random

from racgkit import corpus
from racgkit.davis import kappa
from racgkit.sphere2 import certificate_summary, certify, verify_certificate

for name in corpus.SPHERES_2D:
    S = corpus.get(name)
    cert = certify(S)
    verify_certificate(cert)
    print(f"{name:24s} {len(S.vertices):3d} vertices  {certificate_summary(cert)}")

rng = random.Random(1)
S, log = corpus.random_square_composite(rng, pieces=4)
print("\nrandom composite from", [step if isinstance(step, str) else step[0] for step in log])
cert = certify(S)
print(len(S.vertices), "vertices, kappa =", kappa(S), "certificate:", certificate_summary(cert))
