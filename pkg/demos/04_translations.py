# Translations: arbitrary formulas to clausal form, and Krom formulas into
# their box-only or diamond-only relatives.
#
# Run:  python3 demos/04_translations.py

from modalcheck.formulas import Logic, classify, parse, parse_clausal
from modalcheck.oracle import OracleConfig, Shape, brute_force_sat
from modalcheck.translate import krom_to_kromdia, krom_to_krombox, to_clausal

res = to_clausal(parse("<>(p & q) | []~r"))
print("to_clausal:")
print(res.output)
print("fresh letters:", res.fresh_letters)

print()
f = parse_clausal("T -> <>q\n[]q -> p")
for name, fn in (("krombox", krom_to_krombox), ("kromdia", krom_to_kromdia)):
    out = fn(f)
    d = classify(out.output)
    print(f"{name}: krom={d.krom} box_only={d.box_only} dia_only={d.dia_only}")
    print("  " + str(out.output).replace("\n", "\n  "))

print()
print("oracle check over rooted frames with up to 3 worlds:")


def rooted(g, logic):
    return OracleConfig(logic, tuple(sorted(g.alphabet)), 3, Shape.ROOTED_ANY)


for logic in Logic:
    a = brute_force_sat(f, rooted(f, logic)).sat
    b = brute_force_sat(krom_to_krombox(f).output, rooted(krom_to_krombox(f).output, logic)).sat
    c = brute_force_sat(krom_to_kromdia(f).output, rooted(krom_to_kromdia(f).output, logic)).sat
    print(f"  {logic.name:3s} input={a} krombox={b} kromdia={c}")
