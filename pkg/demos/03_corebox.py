# Core-box formulas in K: the implication graph decides satisfiability.
#
# Run:  python3 demos/03_corebox.py

from modalcheck.corebox import build_implication_graph, core_box_sat, find_contradictory_cycle
from modalcheck.formulas import parse_clausal

clash = parse_clausal("T -> []p\n[]p -> F")
g = build_implication_graph(clash, 1)
print("graph for the clash at D=1:")
print(g.dump())

cycle = find_contradictory_cycle(g)
print()
print("contradictory cycle:", " -> ".join(f"({s},{d})" for s, d in cycle.path))

print()
for text in ["[]p -> F", "T -> []p\n[]p -> F", "[]p -> []q\nT -> [][]p\n[]^2 (q -> F)"]:
    f = parse_clausal(text)
    res = core_box_sat(f)
    print(text.replace("\n", "  ;  "), "=>", res.verdict)
    # one entry per graph length tried
    for d, w in res.trace:
        print(f"   D={d}: {'cycle' if w else 'no cycle'}")
