"""The perturbation lemma on a small complex.

A = span{b0, x0, y0, b1} with d x0 = y0 contracts onto B = span{b0, b1}
(b0 in degree 0, b1 in degree 1).  Perturbing by delta: b0 -> b1, x0 -> b1
keeps (d + delta)^2 = 0; the lemma corrects sigma, tau and h by terminating
series and moves delta onto the small side.
"""

from hpk.graded import GradedSpace
from hpk.transfer import (Contraction, LinearMap, Perturbation, perturb_contraction,
                          validate_contraction)

A = GradedSpace([("b0", 0), ("x0", 0), ("y0", 1), ("b1", 1)])
B = GradedSpace([("b0", 0), ("b1", 1)])
c = Contraction(A, B, LinearMap.from_table({1: {2: 1}}, 1), LinearMap.zero(1),
                LinearMap.from_table({0: {0: 1}, 3: {1: 1}}),
                LinearMap.from_table({0: {0: 1}, 1: {3: 1}}),
                LinearMap.from_table({2: {1: -1}}, -1))
print("unperturbed failures:", validate_contraction(c))

delta = LinearMap.from_table({0: {3: 1}, 1: {3: 1}}, 1)
new = perturb_contraction(c, Perturbation(delta), truncation=2)
print("perturbed failures:  ", validate_contraction(new))


def show(label, m, src, dst):
    for k in src.basis():
        v = m(k)
        if v:
            print(f"  {label}({src.name(k)}) =", " + ".join(f"{c} {dst.name(t)}" for t, c in v.items()))


show("d_B", new.d_small, B, B)
show("sigma", new.sigma, A, B)
show("tau", new.tau, B, A)
