"""
A window of real spectrum around real couplings
===============================================

For real positive couplings G = F / K has no zero on a left half-disc, so
|G| has a positive minimum m_r on its boundary.  Imaginary parts smaller than
B_r = m_r / (2 (3 r_max + 1)) cannot create a zero.
"""

import numpy as np

from delta_spectra import ScaledCoupling
from delta_spectra.quasi_hermiticity import compute_bound, verify_lemma1
from delta_spectra.zero_locator import locate_zeros

for preset in ("fig10", "theorem"):
    qb = compute_bound(1.0, 1.0, preset=preset)
    ts = [round(m.t, 6) for m in qb.minima]
    print(f"{preset:8s} radius={qb.spec.radius:.4f} m_r={qb.m_r:.6f} B_r={qb.B_r:.6f} minima at t={ts}")

# |L| <= 2 on the left half-plane is what bounds the perturbation.
rep = verify_lemma1(10.0, n_samples=20000)
print(f"max |L| on the half-disc of radius 10: {rep.max_value:.12f} at {rep.argmax}")

# Scan imaginary parts inside and just outside the window.
qb = compute_bound(1.0, 1.0, preset="fig10")
for frac in (0.5, 0.9, 2.0, 6.0):
    s = frac * qb.B_r
    grid = np.linspace(-s, s, 5)
    hits = sum(bool(locate_zeros(ScaledCoupling(complex(1, a), complex(1, b)))) for a in grid for b in grid)
    print(f"|s| <= {frac:3.1f} B_r: {hits} of 25 cells carry a zero")
