"""The brackets of the Lie pair (sl2, Cartan) written out on generators.

Generators: h* in degree 1 (dual to the subalgebra) and e, f in degree -1
(the complement).  Only arities one to three can be nonzero.
"""

from hpk.liepair import build_lie_pair_algebra, sl2_pair
from hpk.linf import check_jacobi, check_leibniz


def show(ce, n):
    alg = ce.algebra
    for w in ce.generator_words(n):
        v = ce.q(n, w)
        if v:
            args = ", ".join(alg.name(m) for m in w)
            val = " + ".join(f"{c} {alg.name(m)}" if m else str(c) for m, c in sorted(v.items()))
            print(f"  q_{n}({args}) = {val}")


for label, pair in (("splitting with phi = 0", sl2_pair()),
                    ("splitting with phi(e) = h", sl2_pair().with_phi({"e": {"h": 1}}))):
    ce = build_lie_pair_algebra(pair, arity_cap=5)
    print(label)
    for n in range(1, 6):
        show(ce, n)
    # the checkers run over every canonical word up to the default length cap
    print("  leibniz failures:", len(check_leibniz(ce)))
    print("  jacobi failures: ", len(check_jacobi(ce)))

# q_3 pairs the coroot [e, f] = h with h*, and q_2 vanishes until the
# splitting is tilted.
