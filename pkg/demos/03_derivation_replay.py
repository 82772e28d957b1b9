"""Replaying a written derivation with typed Tietze and quotient moves."""
from fpcheck.coset import order
from fpcheck.paperdata import complement_presentation, derivation_script
from fpcheck.tietze import greedy_simplify, replay_derivation

start = complement_presentation()
script = derivation_script()
report = replay_derivation(start, script)

print("start:", start)
for i, (step, p) in enumerate(zip(script.steps, report.intermediate_presentations)):
    tag = "quotient" if step.is_quotient else "        "
    print(f"{i:2d} {tag} {step.kind.value:28s} |G| = {order(p).index:4d}  {p}")

print("mismatches:", report.mismatches)
print("moves before the first quotient step:", report.isomorphism_preserving_prefix_length)

# a generic simplifier reaches a two-generator presentation of the same group
simple = greedy_simplify(start)
print("greedy simplification:", simple, "order", order(simple).index)
