# The saturation solver for Horn-box formulas in K, T, K4 and S4.
#
# Run:  python3 demos/02_hornbox.py

from modalcheck.formulas import Logic, parse_clausal
from modalcheck.hornbox import horn_box_sat
from modalcheck.kripke import model_check_clausal

f = parse_clausal("T -> []p\n[]^1 (p -> q)\nq -> F")
print(f)
print()

# the same formula can be satisfiable in one logic and not in another
for logic in Logic:
    res = horn_box_sat(logic, f)
    line = f"{logic.name:3s} {res.verdict}"
    if res.sat:
        ok = model_check_clausal(res.witness, "w0", f)
        line += f"  witness on {len(res.witness.worlds)} world(s), verified={ok}"
    print(line)

print()
print("--- a witness ----------------------------------------------------")
res = horn_box_sat(Logic.K, parse_clausal("[]p -> F\n[]^1 (T -> q)"))
print(res.witness.dumps(root="w0"))

print()
print("--- the derivation trace -----------------------------------------")
for step in res.trace[:8]:
    item = "" if step.item is None else step.item
    print(f"  {step.kind:9s} w{step.world}  {item}  {step.rule}")
print("  ...", len(res.trace), "steps in total")
print("info:", {k: res.info[k] for k in ("worlds", "bound", "shortened")})
