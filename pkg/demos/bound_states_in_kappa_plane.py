"""
Bound states as zeros in the K-plane
====================================

With K = 2iak the eigenvalue condition is F(K) = 0.  Zeros in the open left
half-plane are bound states, zeros on the imaginary axis are spectral
singularities.  Counting uses the argument principle; locating bisects the
search box and finishes with Newton steps.
"""

import math

from delta_spectra import ScaledCoupling
from delta_spectra.zero_locator import N_sector, N_total, locate_zeros, region_bound, sector_count

zf = ScaledCoupling(-8 + 3j, -8 - 3j)
print(f"sigma = {zf.sigma:.4f}, search region empty? {region_bound(zf).is_empty}")

zeros = locate_zeros(zf, include_mirrored=True)
for z in zeros:
    print(f"{z.kind:22s} K = {z.kappa:.9f}  E = {z.energy:.6f}  |F| = {z.residual:.1e}")

# The contour count and the located zeros agree.
print("N_total by winding:", N_total(zf), " by located zeros:",
      sector_count(zeros, 1.01 * zf.sigma, math.pi - 1e-3))

# Growth of N(rho, pi - eps) with the radius.
for rho in (2, 4, 8, 12, 16):
    print(f"N({rho:>2}, pi - eps) = {N_sector(zf, rho, math.pi - 1e-3)}")

# Shifted couplings zf = 1 + i s: the count grows with |s|.
for s in [(0, 0), (5, -5), (3, -17), (20, -20)]:
    print(f"s = {s}: N_tot = {N_total(ScaledCoupling(1 + 1j * s[0], 1 + 1j * s[1]), epsilon=1e-6)}")
