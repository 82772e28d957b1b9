"""Handle counts, Euler characteristics and the full verification report."""
import json

from fpcheck.abelian import euler_characteristic
from fpcheck.paperdata import handle_tables, intersection_data, verify_paper

for n in (2, 3, 4):
    for name, t in handle_tables(n).items():
        flag = " (indices merged)" if t.merged else ""
        print(f"n={n} {name:11s} counts {t.as_list()} chi {euler_characteristic(t)}{flag}")

d = intersection_data()
print("intersection numbers", d.geometric, d.algebraic, "consistent:", d.consistent())

report = verify_paper(range(2, 11))
print(report.summary())
print(json.dumps(report["complement-order"].to_dict(), indent=2))
