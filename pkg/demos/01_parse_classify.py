# Parsing formulas and sorting them into fragments.
#
# Run:  python3 demos/01_parse_classify.py

from modalcheck.formulas import classify, closure, modal_depth, parse, parse_clausal

print("--- general formulas ---------------------------------------------")
f = parse("[](p -> <>q) & ~[]F")
print("text        :", f)
print("modal depth :", modal_depth(f))

print()
print("--- clausal formulas ---------------------------------------------")
# one clause per line, each of the form []^s (body -> head)
g = parse_clausal("""
# every successor of the root has p
T -> []p
[]^1 (p -> q)
[]^1 (q & []p -> F)
""")
print(g)
print("length |g|  :", g.length)
print("depth       :", g.depth)
print("alphabet    :", sorted(g.alphabet))
print()
h = parse_clausal("[]<>p -> q")
print("closure of", h, ":", ", ".join(sorted(map(str, closure(h)), key=len)))

print()
print("--- fragments ----------------------------------------------------")
for text in ["p -> []q", "T -> p | q", "p & q -> r", "<>p -> <>q", "[]p & q -> <>r"]:
    d = classify(parse_clausal(text))
    flags = [name for name in ("horn", "krom", "core", "box_only", "dia_only") if getattr(d, name)]
    print(f"{text:16s} {' '.join(flags) or '(none)'}")
