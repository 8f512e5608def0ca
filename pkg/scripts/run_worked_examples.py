#!/usr/bin/env python3
"""Run the showcase systems through the prover and print certificates.

Usage: python scripts/run_worked_examples.py [--methods LIST]
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from uncprover.cops import parse_cops
from uncprover.strategy import DEFAULT_METHODS, StrategyConfig, prove_unc

EXAMPLES = {
    "closed-linearization": """
        (VAR x y)
        (RULES
          f(x,x,g(y)) -> h(y,x)
          g(a) -> f(a,b,b)
          h(x,y) -> h(a,y)
          f(x,x,y) -> h(a,x)
        )""",
    "weight-decreasing": """
        (VAR x y)
        (RULES
          f(x,x) -> h(x,f(x,b))
          f(g(y),y) -> h(y,f(g(y),c(b)))
          h(c(x),b) -> h(b,b)
          c(b) -> b
        )""",
    "completion-target": """
        (VAR x)
        (RULES a -> f(c)  a -> f(h(c))  f(x) -> h(f(x)))""",
    "rule-reversing": """
        (VAR x)
        (RULES a -> f(a)  h(c,a) -> b  h(a,x) -> h(x,f(x)))""",
    "right-reducible": """
        (VAR x y z)
        (RULES f(f(x,y),z) -> f(f(x,z),f(y,z)))""",
    "not-unc-constants": "(RULES a -> b  a -> c)",
    "not-unc-escape": "(VAR x)(RULES f(x) -> c  f(x) -> g(x))",
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--methods", default=",".join(DEFAULT_METHODS))
    args = ap.parse_args()
    config = StrategyConfig(methods=tuple(args.methods.split(",")))
    width = max(map(len, EXAMPLES))
    for name, text in EXAMPLES.items():
        problem = parse_cops(text)
        t0 = time.perf_counter()
        result = prove_unc(problem, config)
        ms = (time.perf_counter() - t0) * 1000
        print(f"{name:<{width}}  {result.answer:<5}  via {result.method or '-':<8}"
              f"  {ms:7.1f} ms")
        for line in result.certificate.rstrip().splitlines():
            print(f"    {line}")
        print()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
