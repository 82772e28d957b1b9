"""Searching for a surjection onto A5 certifies a group is nontrivial."""
from fpcheck.paperdata import complement_presentation
from fpcheck.permgrp import Permutation, closure, find_epimorphism, satisfies

p = complement_presentation()
images = find_epimorphism(p, degree=5, target_order=60)
for sym, x in zip(p.generators, images):
    print(f"{sym} -> {x}")
print("relators hold:", satisfies(p, images))
print("image has", len(closure(images, cap=100)), "elements")

c = Permutation.from_cycles(5, [(1, 2, 3, 4, 5)])
print("closure of a 5-cycle:", len(closure([c])), "elements")
