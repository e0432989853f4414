#!/usr/bin/env python3
"""Cross-validate the symbolic checkers against finite-game oracles.

Samples random finite profiles and confirms, per sample, that
  * subgame perfection agrees with per-node backward-induction optimality
    (on tie-free payoffs, where the equivalence is exact),
  * the Nash checker agrees with exhaustive deviation enumeration,
  * a subgame perfect profile is always a Nash equilibrium.
"""

import argparse
import random
import time

from loopgames import (
    Leaf,
    Node,
    Verdict,
    backward_induction,
    enumerate_deviations,
    nash_check,
    play_from,
    sgpe_check,
    strip_choices,
    utility_of,
)
from loopgames.core import weakly_worse
from loopgames.sampling import random_profile


def bi_aligned(profile):
    solved = backward_induction(strip_choices(profile))
    return all(node.choice in solved.optimal[nid]
               for nid, node in profile.nodes.items() if isinstance(node, Node))


def oracle_nash_holds(profile) -> bool:
    for agent in profile.agents():
        base = utility_of(profile, agent).const
        owned = sum(1 for nd in profile.nodes.values()
                    if isinstance(nd, Node) and nd.agent == agent)
        for deviation in enumerate_deviations(profile, agent, owned):
            value = utility_of(deviation, agent).const
            if not weakly_worse(profile.preference, value, base):
                return False
    return True


def main() -> None:
    cli = argparse.ArgumentParser(description=__doc__)
    cli.add_argument("--samples", type=int, default=300)
    cli.add_argument("--seed", type=int, default=0)
    args = cli.parse_args()

    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    bi_mismatch = nash_mismatch = prop_violation = holds_count = 0
    for i in range(args.samples):
        profile = random_profile(rng, max_depth=3, distinct_payoffs=(i % 2 == 0))
        sgpe = sgpe_check(profile).verdict is Verdict.HOLDS
        if i % 2 == 0 and sgpe != bi_aligned(profile):
            bi_mismatch += 1
        nash = nash_check(profile).verdict is Verdict.HOLDS
        if nash != oracle_nash_holds(profile):
            nash_mismatch += 1
        if sgpe and not nash:
            prop_violation += 1
        holds_count += sgpe

    dt = time.perf_counter() - t0
    print(f"samples:                     {args.samples} ({dt:.2f} s)")
    print(f"subgame perfect among them:  {holds_count}")
    print(f"backward-induction mismatch: {bi_mismatch}")
    print(f"nash-oracle mismatch:        {nash_mismatch}")
    print(f"sgpe-but-not-nash cases:     {prop_violation}")
    ok = bi_mismatch == nash_mismatch == prop_violation == 0
    print("ok" if ok else "MISMATCH")


if __name__ == "__main__":
    main()
