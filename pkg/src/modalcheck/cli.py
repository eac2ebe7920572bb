"""Command-line front end.

Exit codes: 0 SAT / check true, 1 UNSAT / check false, 2 parse error,
3 fragment rejection, 4 usage error or unsupported combination,
5 internal verification failure.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import generate
from .corebox import core_box_sat
from .formulas import (
    ClausalFormula, Formula, Logic, ParseError, classify, conj, parse, parse_clausal,
)
from .hornbox import horn_box_sat
from .kripke import KripkeModel, UnknownWorldError, model_check, model_check_clausal
from .oracle import GuardExceeded, OracleConfig, Shape, brute_force_sat, theorem_bound
from .results import FragmentError, SatResult, VerificationError
from .translate import krom_to_kromdia, krom_to_krombox, to_clausal

EXIT_TRUE, EXIT_FALSE, EXIT_PARSE, EXIT_FRAGMENT, EXIT_USAGE, EXIT_VERIFY = range(6)
REJECTED = "REJECTED-FRAGMENT"
ENGINES = ("auto", "hornbox", "corebox", "oracle")


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    inputs: List[str]
    logic: str
    engine: str
    verdict: str
    witness_path: Optional[str] = None
    wall_ms: float = 0.0
    trace_counts: Dict[str, int] = field(default_factory=dict)

    def lines(self) -> List[str]:
        out = [f"verdict: {self.verdict}", f"engine: {self.engine}", f"logic: {self.logic}",
               f"time_ms: {self.wall_ms:.2f}"]
        if self.witness_path:
            out.append(f"witness: {self.witness_path}")
        if self.trace_counts:
            out.append("trace: " + " ".join(f"{k}={v}" for k, v in sorted(self.trace_counts.items())))
        return out

    @property
    def exit_code(self) -> int:
        if self.verdict == "SAT":
            return EXIT_TRUE
        if self.verdict == REJECTED:
            return EXIT_FRAGMENT
        return EXIT_FALSE


# ---------------------------------------------------------------- helpers

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_clausal(path: str, args) -> ClausalFormula:
    return parse_clausal(_read(path), allow_reserved=args.allow_reserved)


def _load_formula(path: str, args) -> Formula:
    """Every non-comment line is a formula; the file denotes their conjunction."""
    parts = []
    for line in _read(path).splitlines():
        text = line.split("#", 1)[0].strip()
        if text:
            parts.append(parse(text, allow_reserved=args.allow_reserved))
    if not parts:
        raise ParseError("empty formula file", 1, 1)
    return conj(parts)


def _load_model(path: str):
    try:
        return KripkeModel.loads(_read(path))
    except UnknownWorldError:
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise ParseError(f"bad model file {path}: {e}", 1, 1) from None


def _logic(name: str) -> Logic:
    try:
        return Logic.from_name(name)
    except ValueError:
        raise UsageError(f"unknown logic {name!r}") from None


def _trace_counts(res: SatResult) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for ev in res.trace:
        kind = getattr(ev, "kind", None) or "graph"
        counts[kind] = counts.get(kind, 0) + 1
    return counts


def _bug_report(f: ClausalFormula, logic: Logic, engine: str, err: Exception) -> None:
    print("internal verification failure; please report with the dump below", file=sys.stderr)
    print(f"engine={engine} logic={logic.name} error={err}", file=sys.stderr)
    print("--- formula", file=sys.stderr)
    print(f, file=sys.stderr)


def choose_engine(f: ClausalFormula, logic: Logic) -> str:
    frag = classify(f)
    if frag.core and frag.box_only and logic is Logic.K:
        return "corebox"
    if frag.horn and frag.box_only:
        return "hornbox"
    return "oracle"


def oracle_config(f: ClausalFormula, logic: Logic, max_worlds: Optional[int] = None,
                  shape: Optional[Shape] = None) -> OracleConfig:
    """Pre-linear search at the theorem bound for Horn-box input, else all
    rooted frames with at most 3 worlds."""
    frag = classify(f)
    if shape is None:
        shape = Shape.PRELINEAR if frag.horn and frag.box_only else Shape.ROOTED_ANY
    if max_worlds is None:
        bound = theorem_bound(logic, f)
        max_worlds = bound if shape is Shape.PRELINEAR else min(bound, 3)
    return OracleConfig(logic, tuple(f.alphabet), max_worlds, shape)


def solve_one(f: ClausalFormula, logic: Logic, engine: str,
              cfg: Optional[OracleConfig] = None) -> SatResult:
    if engine == "corebox":
        if logic is not Logic.K:
            raise UsageError("the corebox engine only supports --logic k")
        return core_box_sat(f)
    if engine == "hornbox":
        return horn_box_sat(logic, f)
    return brute_force_sat(f, cfg or oracle_config(f, logic))


# ---------------------------------------------------------------- commands

def cmd_parse(args) -> int:
    f = _load_clausal(args.file, args)
    print(f)
    print(f"# clauses={len(f)} length={f.length} depth={f.depth}")
    return EXIT_TRUE


def cmd_classify(args) -> int:
    f = _load_clausal(args.file, args)
    print(classify(f))
    return EXIT_TRUE


def cmd_solve(args) -> int:
    logic = _logic(args.logic)
    if args.model and len(args.files) > 1:
        raise UsageError("--model needs a single input file")
    code = EXIT_TRUE
    for path in args.files:
        f = _load_clausal(path, args)
        engine = choose_engine(f, logic) if args.engine == "auto" else args.engine
        if engine == "corebox" and logic is not Logic.K:
            raise UsageError("the corebox engine only supports --logic k")
        if len(args.files) > 1:
            print(f"== {path}")
        cfg = None
        if engine == "oracle":
            cfg = oracle_config(f, logic, args.max_worlds, Shape(args.shape) if args.shape else None)
            print(f"# oracle: desk-scale, bound={cfg.max_worlds}, shape={cfg.shape.value}")
        start = time.perf_counter()
        try:
            res = solve_one(f, logic, engine, cfg)
        except FragmentError as e:
            report = RunReport([path], logic.name, engine, REJECTED,
                               wall_ms=(time.perf_counter() - start) * 1e3)
            print(f"rejected: {e}", file=sys.stderr)
            print("\n".join(report.lines()))
            code = max(code, report.exit_code)
            continue
        except VerificationError as e:
            _bug_report(f, logic, engine, e)
            return EXIT_VERIFY
        wall = (time.perf_counter() - start) * 1e3
        report = RunReport([path], logic.name, engine, str(res.verdict), None, wall,
                           _trace_counts(res))
        if res.sat:
            if not model_check_clausal(res.witness, res.root, f):
                _bug_report(f, logic, engine, VerificationError("witness fails re-check"))
                return EXIT_VERIFY
            if args.model:
                Path(args.model).write_text(res.witness.dumps(root=res.root))
                reread, _ = KripkeModel.loads(Path(args.model).read_text())
                if not model_check_clausal(reread, res.root, f):
                    _bug_report(f, logic, engine, VerificationError("written witness fails re-check"))
                    return EXIT_VERIFY
                report.witness_path = args.model
        print("\n".join(report.lines()))
        code = max(code, report.exit_code)
    return code


def cmd_check(args) -> int:
    m, root = _load_model(args.model)
    world = args.world or root or m.worlds[0]
    text = _read(args.formula)
    try:
        f = parse_clausal(text, allow_reserved=args.allow_reserved)
    except ParseError:
        ok = model_check(m, world, _load_formula(args.formula, args))
    else:
        ok = model_check_clausal(m, world, f)
    print("true" if ok else "false")
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_translate(args) -> int:
    if args.target == "clausal":
        res = to_clausal(_load_formula(args.input, args))
    else:
        f = _load_clausal(args.input, args)
        res = (krom_to_krombox if args.target == "krombox" else krom_to_kromdia)(f)
    text = str(res.output) + "\n"
    if args.output and args.output != "-":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"# fresh letters: {len(res.fresh_letters)}"
          + (f" ({', '.join(res.fresh_letters)})" if res.fresh_letters else ""),
          file=sys.stderr if not args.output or args.output == "-" else sys.stdout)
    return EXIT_TRUE


def cmd_oracle(args) -> int:
    args.engine = "oracle"
    args.files = [args.file]
    return cmd_solve(args)


def chain_formula(n: int) -> ClausalFormula:
    """``T -> []^n p`` plus, at every depth d <= n, ``p -> q`` and ``q & []p -> r``."""
    def boxed(d: int, body: str) -> str:
        return f"[]^{d} ({body})" if d else body
    lines = [boxed(0, f"T -> []^{n} p") if n else "T -> p"]
    for d in range(n + 1):
        lines.append(boxed(d, "p -> q"))
        lines.append(boxed(d, "q & []p -> r" if d < n else "q -> r"))
    return parse_clausal("\n".join(lines))


def bench_rows(sizes: Sequence[int], logic: Logic, repeat: int = 1):
    for n in sizes:
        f = chain_formula(n)
        best = float("inf")
        for _ in range(repeat):
            start = time.perf_counter()
            res = horn_box_sat(logic, f, record=False)
            best = min(best, time.perf_counter() - start)
        yield {"size": n, "length": f.length, "verdict": str(res.verdict), "seconds": f"{best:.6f}"}


def cmd_bench(args) -> int:
    if args.suite != "chain":
        raise UsageError(f"unknown suite {args.suite!r}")
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError("--sizes must be a comma-separated list of integers") from None
    if not sizes or min(sizes) < 1:
        raise UsageError("sizes must be positive")
    writer = csv.DictWriter(sys.stdout, ["size", "length", "verdict", "seconds"])
    writer.writeheader()
    for row in bench_rows(sizes, _logic(args.logic), args.repeat):
        writer.writerow(row)
        sys.stdout.flush()
    return EXIT_TRUE


def cmd_random(args) -> int:
    rng = random.Random(args.seed)
    for i in range(args.count):
        if args.count > 1:
            print(f"# --- {i}")
        if args.kind == "hornbox":
            print(generate.random_horn_box(rng))
        elif args.kind == "horn":
            print(generate.random_horn(rng, (generate.Modality.BOX, generate.Modality.DIA)))
        elif args.kind == "krom":
            print(generate.random_krom(rng))
        elif args.kind == "formula":
            print(generate.random_formula(rng, generate.LETTERS[:3], 2, rng.randint(1, 8)))
        else:
            m = generate.random_model(rng, rng.randint(1, 4), _logic(args.logic), generate.LETTERS[:3])
            print(m.dumps(root="w0"))
    return EXIT_TRUE


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modalcheck",
                                description="Satisfiability tools for modal Horn and Krom fragments.")
    p.add_argument("--allow-reserved", action="store_true",
                   help="accept letters in the reserved _f namespace (translator output)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", help="parse a clausal file and print it canonically")
    s.add_argument("file")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("classify", help="print the fragment flags of a clausal file")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)

    for name, func in (("solve", cmd_solve), ("oracle", cmd_oracle)):
        s = sub.add_parser(name, help="decide satisfiability" if name == "solve"
                           else "decide satisfiability by brute force")
        s.add_argument("--logic", default="k", help="k, t, k4 or s4")
        if name == "solve":
            s.add_argument("--engine", choices=ENGINES, default="auto")
            s.add_argument("files", nargs="+")
        else:
            s.add_argument("file")
        s.add_argument("--model", help="write the witness model (JSON) here")
        s.add_argument("--max-worlds", type=int, help="oracle world budget")
        s.add_argument("--shape", choices=[x.value for x in Shape], help="oracle candidate class")
        s.set_defaults(func=func)

    s = sub.add_parser("check", help="evaluate a formula on a model")
    s.add_argument("--model", required=True)
    s.add_argument("--formula", required=True)
    s.add_argument("--world")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("translate", help="clausal form or Krom rewrites")
    s.add_argument("--target", choices=("clausal", "krombox", "kromdia"), required=True)
    s.add_argument("input")
    s.add_argument("output", nargs="?")
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("bench", help="time the Horn-box solver on a generated suite")
    s.add_argument("--suite", default="chain")
    s.add_argument("--sizes", required=True)
    s.add_argument("--logic", default="k")
    s.add_argument("--repeat", type=int, default=1, help="report the best of this many runs")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("random", help="print seeded random instances")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--kind", choices=("hornbox", "horn", "krom", "formula", "model"),
                   default="hornbox")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--logic", default="k", help="frame class for --kind model")
    s.set_defaults(func=cmd_random)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_TRUE
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except FragmentError as e:
        print(f"rejected: {e}", file=sys.stderr)
        return EXIT_FRAGMENT
    except UnknownWorldError as e:
        print(f"unknown world: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, GuardExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
