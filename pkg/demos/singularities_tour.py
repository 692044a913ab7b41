"""
Spectral singularities of two complex delta functions
=====================================================

A spectral singularity is a real wavenumber where M22 vanishes.  The real
cubic g(k) supplies candidates; each one is checked against f(k).
"""

import math

from delta_spectra import CouplingConfig, find_singularities
from delta_spectra.singularity_finder import cubic_g, pt_curve, solve_cubic

# A single imaginary delta z = 2i: the singularity sits at k = |z| / 2.
for rec in find_singularities(CouplingConfig(0, 2j, 1.0)):
    print(f"single delta: k* = {rec.k_star:.12f}, E* = {rec.energy:.12f}")

# PT-symmetric imaginary pair z_+ = -z_- = i sigma_n.
for n in range(3):
    sn = math.pi * (2 * n + 1) / (2 * math.sqrt(2))
    cc = CouplingConfig(-1j * sn, 1j * sn, 1.0)
    recs = find_singularities(cc)
    print(f"n={n}: sigma_n={sn:.6f} -> E* = {[round(r.energy, 10) for r in recs]}"
          f"  (expected {((2 * n + 1) * math.pi / 4) ** 2:.10f})")

# Moving off the special value leaves the cubic with roots that f rejects.
cc = CouplingConfig(-1.2j, 1.2j, 1.0)
diag = []
print("roots of g:", [round(r, 6) for r in solve_cubic(cubic_g(cc))])
print("accepted:", find_singularities(cc, diagnostics=diag), " rejected:", len(diag))

# Points of the PT-plane curve: every sample is singular at k = t / 2.
samples = pt_curve((0.1, 6.0), 12)
for smp in samples[:6]:
    z = complex(smp.r, smp.s) / 2
    got = find_singularities(CouplingConfig(z.conjugate(), z, 1.0))
    print(f"t={smp.t:.3f}  z={z:.4f}  k*={[round(r.k_star, 6) for r in got]}")
