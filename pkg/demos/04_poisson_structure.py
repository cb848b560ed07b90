"""The Poisson side: brackets of coordinates, commuting Hamiltonians, and
the lower strata of the zero fiber."""

import random

from mumford_kdv import embed, hamiltonians, poisson_bracket, stratum
from mumford_kdv.verify import check_poisson, random_regular_point

g = 2
H = hamiltonians(g)
print(f"{len(H)} Hamiltonians in genus {g}; pairwise brackets:")
nonzero = [(i, j) for i in range(len(H)) for j in range(i + 1, len(H))
           if poisson_bracket(H[i], H[j])]
print(" nonvanishing pairs:", nonzero or "none")

for c in check_poisson(g):
    print(f" [{c.status}] {c.name}")

print("\nA regular genus-1 point, embedded into genus 2, sits on stratum 1.")
pt = random_regular_point(1, random.Random(3))
up = embed(pt)
print(" genus 1 point:", pt)
print(" embedded     :", up)
print(" stratum:", stratum(up), "of", up.genus)
