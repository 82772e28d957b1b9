"""Free-group words and presentations.

Words are tuples of signed generator indices: (1, -2) means a b^-1.
"""
from fpcheck.words import Presentation, cyclic_reduce, free_reduce, invert, substitute

p = Presentation.from_strings("a b", ["a^2", "b^3", "(a b)^5"])
print("presentation:", p)

w = (1, 2, -2, -1, 2, 1)  # a b b^-1 a^-1 b a, unreduced
print("reduce", w, "->", p.format(free_reduce(w)))

core, conj = cyclic_reduce(p.word("a b a^-1"))
print("a b a^-1 is a conjugate of", p.format(core), "by", p.format(conj))

print("inverse of a b^2:", p.format(invert(p.word("a b^2"))))

# substituting b := a^-1 turns (a b)^5 into the identity
print("(a b)^5 with b = a^-1:", p.format(substitute(p.relators[2], 2, p.word("a^-1"))))

# relations written as equations become single relators
q = Presentation.from_strings("a b", ["a^2 = b^3 = 1", "a b = b a"])
print("from equations:", q)
