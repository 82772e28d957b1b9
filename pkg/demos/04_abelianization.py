"""Relation matrices, Smith normal form and abelian invariants."""
from fpcheck.abelian import (
    IntMatrix,
    abelian_invariants,
    determinant,
    relation_matrix,
    smith_normal_form,
)
from fpcheck.paperdata import complement_presentation
from fpcheck.words import Presentation

m = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
res = smith_normal_form(m)
print("diagonal:", res.diagonal)
print("left @ m @ right == diag:", res.left @ m @ res.right == res.diagonal_matrix(m.shape))
print("transform determinants:", determinant(res.left), determinant(res.right))

for gens, rels in [("a", ["a^5"]), ("a b", ["a^2", "b^4"]), ("a b", ["a b a^-1 b^-1"]),
                   ("a b", ["a^2 b^-3", "a^2 (a b)^-5"])]:
    p = Presentation.from_strings(gens, rels)
    print(f"{str(p):40s} H1 = {abelian_invariants(p)}")

c = complement_presentation()
print("complement relation matrix:", relation_matrix(c).tolist())
print("its determinant:", determinant(relation_matrix(c)), "so H1 =", abelian_invariants(c))
