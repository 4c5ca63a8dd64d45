"""
Transfer matrices of piecewise-constant canonical systems
=========================================================

The forward solver multiplies per-cell matrix exponentials.  Two cases
have closed forms worth checking by eye: the identity Hamiltonian gives
a rotation through angle z*t, and a constant diagonal cell gives the
same rotation with its off-diagonal entries rescaled.
"""

import numpy as np

from canonfactor import (Hamiltonian, j_energy_residual, random_unimodular,
                         transfer_matrix)

# free system: H = I on [0, 10]
ham = Hamiltonian.identity(10.0, 5)
z, t = 0.7, 3.0
M = transfer_matrix(ham, t, z).m
print("free system at z=0.7, t=3:")
print(M)
print("rotation by z*t:")
print(np.array([[np.cos(z * t), np.sin(z * t)],
                [-np.sin(z * t), np.cos(z * t)]]))

# H = diag(2, 1/2): same angles, off-diagonals scaled by 1/2 and 2
ham = Hamiltonian.constant([[2.0, 0.0], [0.0, 0.5]], span=8.0, n_cells=4)
M = transfer_matrix(ham, 2.0, 1.3).m
print("\ndiag(2, 1/2) at z=1.3, t=2:")
print(M)
print("closed form:")
c, s = np.cos(1.3 * 2.0), np.sin(1.3 * 2.0)
print(np.array([[c, 0.5 * s], [-2.0 * s, c]]))

# the product of exponentials of trace-free matrices has det = 1,
# whatever the cells are; a quick sweep over random positive grids
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(20):
    ham = random_unimodular(rng, 8, span=5.0)
    for zz in (0.5, -2.0, 1.0 + 0.2j):
        M = transfer_matrix(ham, 5.0, zz).m
        worst = max(worst, abs(np.linalg.det(M) - 1.0))
print(f"\nmax |det M - 1| over 20 random systems: {worst:.2e}")

# the J-energy identity is the differential form of the same fact
res = j_energy_residual(ham, 4.0, 1.0 + 0.3j)
print(f"J-energy residual at z=1+0.3j: {res:.2e}")
