"""Three routes to the same brackets on the Lie pair (sl2, Cartan):

1. the direct Lie-pair formulas,
2. transfer of the Schouten bracket along the Fedosov contraction,
3. the same transfer with a different complement connection.
"""

from hpk.fedosov import ConnectionData, fedosov_transfer_compare
from hpk.liepair import sl2_pair

pair = sl2_pair().with_phi({"e": {"h": 1}})
r = fedosov_transfer_compare(pair, N=4, arity_cap=4)
print("weight", r["weight"], "checks:", [(c["check"], c["pass"]) for c in r["checks"]])
print("differences against the direct brackets:", r["diff"])

e, f = pair.g.names.index("e"), pair.g.names.index("f")
conn = ConnectionData(pair).shifted({(e, f): {e: 1}, (f, e): {e: 1}})
r2 = fedosov_transfer_compare(pair, conn=conn, N=4, arity_cap=4)
print("with another connection:", r2["diff"])
