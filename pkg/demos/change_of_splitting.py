"""Two splittings of sl2 -> sl2/h give two structures.  The exponential of a
degree zero coderivation built from the difference maps one onto the other,
with first Taylor coefficient the identity."""

from hpk.linf import check_morphism
from hpk.liepair import splitting_isomorphism, sl2_pair

dphi = {"e": {"h": 1}}
f, src, dst = splitting_isomorphism(sl2_pair(), dphi, arity_cap=4, word_cap=4, check=False)
alg = src.algebra

print("f_2 on generator pairs:")
for w in src.generator_words(2):
    v = f.f(2, w)
    if v:
        print(f"  f_2({alg.name(w[0])}, {alg.name(w[1])}) = {dict((alg.name(m), str(c)) for m, c in v.items())}")

print("first coefficient is the identity:", f.first_is_identity([m for m in alg.basis() if m]))
print("morphism failures up to arity 4:", len(check_morphism(f, src, dst, arity_cap=4)))
