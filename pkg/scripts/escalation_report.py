#!/usr/bin/env python3
"""Reproduce the headline equilibrium results of the escalation catalog.

Prints one line per claim: the two one-sided dollar-auction profiles are
subgame perfect for every stage and every prize, mutual stopping is not
even a Nash equilibrium once the prize exceeds one bid, the all-continue
infinipede is vacuously Nash but not subgame perfect, and finite
centipedes solve to all-stop by backward induction.
"""

import time

from loopgames import (
    Choice,
    backward_induction,
    build_named,
    leads_to_leaf,
    nash_check,
    sgpe_check,
)


def line(label: str, verdict, expected: str, started: float) -> None:
    ms = (time.perf_counter() - started) * 1000.0
    status = "ok" if verdict.value == expected else "MISMATCH"
    print(f"{status:8s} {label:50s} {verdict.value:16s} ({ms:.1f} ms)")


def main() -> None:
    t0 = time.perf_counter()
    for name in ("dolAcBs", "dolAsBc"):
        start = time.perf_counter()
        report = sgpe_check(build_named(name).graph)
        line(f"sgpe {name} (all n >= 0, v >= 1)", report.verdict, "holds", start)
        for cond in report.conditions:
            print(f"         needs {cond.lhs} {cond.rel} {cond.rhs}: "
                  f"{cond.result.truth.value}")

    asbs = build_named("dolAsBs").graph
    start = time.perf_counter()
    report = nash_check(asbs, at={"n": 0}, bounds={"v": 2})
    line("nash dolAsBs at n=0 for v >= 2", report.verdict, "fails", start)
    w = report.witness
    print(f"         {w.agent} deviates via {[m for m, _ in w.path]} "
          f"at {dict(w.valuation)}")
    start = time.perf_counter()
    report = nash_check(asbs, at={"n": 0, "v": 1})
    line("nash dolAsBs at n=0, v=1", report.verdict, "holds", start)

    for name, expected in (("infinipede_as", "holds"), ("infinipede_ac", "fails")):
        start = time.perf_counter()
        line(f"sgpe {name}", sgpe_check(build_named(name).graph).verdict,
             expected, start)
    ac = build_named("infinipede_ac").graph
    start = time.perf_counter()
    line("nash infinipede_ac (play diverges: "
         f"leads_to_leaf={leads_to_leaf(ac)})",
         nash_check(ac).verdict, "vacuously_holds", start)

    for legs in (3, 6, 10):
        start = time.perf_counter()
        game = build_named("centipede", {"length": legs}).graph
        solved = backward_induction(game)
        all_stop = all(choices == frozenset({Choice.RIGHT})
                       for choices in solved.optimal.values())
        print(f"{'ok' if all_stop else 'MISMATCH':8s} "
              f"centipede({legs}) backward induction is all-stop: {all_stop} "
              f"({(time.perf_counter() - start) * 1000.0:.1f} ms)")

    print(f"total {(time.perf_counter() - t0) * 1000.0:.1f} ms")


if __name__ == "__main__":
    main()
