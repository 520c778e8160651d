"""L-infinity structures as Maurer-Cartan elements of shifted polyvector fields.

A random structure on a three dimensional graded space is extended to a
derived Poisson algebra; the Jacobi identity for the brackets and the
Maurer-Cartan equation for the polyvector fields hold or fail together.
"""

from hpk.linf import table_structure
from hpk.polyvec import (linf_mc_agreement, perturbed_tables, random_linf_tables,
                         lie_pair_algebroid, linf_to_homological_field,
                         homological_field_to_linf, decomposition_report)
from hpk.liepair import sl2_pair

for seed in range(3):
    space, tabs = random_linf_tables(seed)
    good = table_structure(space, 0, tabs, 4)
    bad = table_structure(space, 0, perturbed_tables(tabs, space, seed + 1), 4)
    jac, mc, _ = linf_mc_agreement(good)
    jac_b, mc_b, defect = linf_mc_agreement(bad)
    print(f"seed {seed}: valid jacobi={jac} mc={mc}; perturbed jacobi={jac_b} mc={mc_b}, "
          f"defect in weights {sorted(defect)}")

# the Lie-pair algebroid as a homological vector field, and back
data = lie_pair_algebroid(sl2_pair())
hf = linf_to_homological_field(data)
print("Q^2 = 0:", hf.square() == {})
print("tables recovered:", homological_field_to_linf(hf).tables() == data.tables())
print("Q splits into Bott, Delta and beta parts:", decomposition_report(sl2_pair()) == [])
