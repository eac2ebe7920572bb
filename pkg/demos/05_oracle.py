# The brute-force oracle and a small differential run against the solver.
#
# Run:  python3 demos/05_oracle.py

import random

import numpy as np

from modalcheck.formulas import Logic, parse_clausal
from modalcheck.generate import random_horn_box
from modalcheck.hornbox import horn_box_sat
from modalcheck.oracle import OracleConfig, Shape, brute_force_sat, candidate_count, config_for

f = parse_clausal("T -> p\n[]p -> F")
for n in (1, 2):
    res = brute_force_sat(f, OracleConfig(Logic.K, ("p",), n, Shape.PRELINEAR))
    print(f"K, up to {n} world(s): {res.verdict}")

print()
cfg = OracleConfig(Logic.K4, ("p", "q"), 3, Shape.PRELINEAR)
print("pre-linear K4 candidates on 3 worlds, 2 letters:", candidate_count(cfg))

print()
print("differential run, 200 random Horn-box formulas per logic")
rng = random.Random(0)
sizes = {logic: [] for logic in Logic}
for logic in Logic:
    agree = 0
    for _ in range(200):
        g = random_horn_box(rng, max_letters=3, max_depth=3, max_clauses=6)
        res = horn_box_sat(logic, g)
        agree += res.verdict == brute_force_sat(g, config_for(g, logic)).verdict
        if res.sat:
            sizes[logic].append(len(res.witness.worlds))
    w = np.array(sizes[logic])
    print(f"  {logic.name:3s} agreement {agree}/200, witness worlds mean={w.mean():.2f} max={w.max()}")
