"""Exponential type: coefficient integral vs measured growth.

The type of the transfer matrix equals the sqrt-determinant mass of the
coefficients: sum of sqrt(det P) d(nu) in general gauge, sum of
sqrt(1 - |a|^2) d(mu) in disk gauge.  The measured side samples
log ||A(iy, l)|| / y on a geometric ladder and extrapolates in 1/y, using
log-scaled propagation so y*sigma in the thousands cannot overflow.
"""

import numpy as np

import arvcanon as av

rows = []

p = av.constant_parameters(0.0)
rows.append(("free disk gauge, a=0, l=1", av.exponential_type_integral(p, 1.0),
             av.exponential_type_numeric(p, 1.0)))

p = av.constant_parameters(0.6)
rows.append(("constant a=0.6, l=2", av.exponential_type_integral(p, 2.0),
             av.exponential_type_numeric(p, 2.0)))

dirac = av.dirac_coefficients(length=2.0)
rows.append(("Dirac P=I, t=2", av.exponential_type_integral(dirac, 2.0),
             av.exponential_type_numeric(dirac, 2.0)))

sch = av.schroedinger_coefficients([0.7], [0.5])
rows.append(("Schroedinger form, t=0.5", av.exponential_type_integral(sch, 0.5),
             av.exponential_type_numeric(sch, 0.5)))

rng = np.random.default_rng(3)
grid = np.cumsum(rng.uniform(0.2, 0.5, 5))
p_rand = av.ArovParameters(grid, rng.uniform(0.3, 1.2, 5),
                           rng.uniform(0, 0.9, 5) * np.exp(2j * np.pi * rng.uniform(size=5)))
rows.append(("random piecewise system", av.exponential_type_integral(p_rand, p_rand.length),
             av.exponential_type_numeric(p_rand, p_rand.length)))

print(f"{'system':<28} {'integral':>12} {'measured':>12} {'gap':>10}")
for name, si, sn in rows:
    gap = abs(sn - si) / max(si, 1e-6)
    print(f"{name:<28} {si:12.8f} {sn:12.8f} {gap:10.2e}")

print("\nThe degenerate-P (Schroedinger) line has exact type zero; the small")
print("measured value is the finite-y residue of the sqrt growth of that")
print("system, which no polynomial extrapolation in 1/y removes entirely.")
