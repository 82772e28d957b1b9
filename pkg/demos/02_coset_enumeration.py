"""Coset enumeration: group orders, subgroup indices, permutation images."""
from fpcheck.coset import check_table, enumerate_cosets, order, permutation_rep
from fpcheck.paperdata import complement_presentation
from fpcheck.permgrp import closure
from fpcheck.words import Presentation

a5 = Presentation.from_strings("a b", ["a^2", "b^3", "(a b)^5"])
for strategy in ("felsch", "hlt"):
    res = order(a5, strategy=strategy)
    print(f"{strategy:6s} {res}  cosets defined {res.cosets_defined}, coincidences {res.coincidences}")

res = order(a5)
a, b = permutation_rep(res.table)
print("a acts as an element of order", a.order(), "and b of order", b.order())
print("closure of the action has", len(closure([a, b], cap=100)), "elements")
print("independent table check finds", len(check_table(res.table, a5)), "problems")

# index of <b> is 60 / 3
print("index of <b>:", enumerate_cosets(a5, [a5.word("b")]).index)

# a cap that is too small gives an inconclusive answer, never a wrong one
print("with 10 cosets allowed:", order(a5, max_cosets=10))
print("infinite cyclic group:", order(Presentation(("t",), ()), max_cosets=50))

print("knot complement group:", order(complement_presentation()))
