"""Eigenbranches of the p-Laplacian on G6, continued from p = 2 toward p = 1.

Writes the data behind the branch picture to a CSV (default g6_branches.csv)
and prints where each branch lands near p = 1. A seventh branch starts at the
1-Laplacian eigenpair 1_{2,5,6} with value 5/9 and is followed upward until it
is lost.
"""

import csv
import sys

from plap import SetPair, continue_branch, f1_pair, g6
from plap.psolver import continue_from_state, seed_from_delta1, seed_from_p2

P_LOW = 1.01


def main(out_path="g6_branches.csv"):
    g = g6()
    branches = [continue_branch(g, seed_from_p2(g, k), P_LOW, steps=200, label=f"p2-k{k}") for k in range(1, 7)]

    red = SetPair.of((2, 5, 6))
    state = seed_from_delta1(g, f1_pair(g, red), red.vector(g.n), P_LOW)
    branches.append(continue_from_state(g, state, P_LOW, 2.0, steps=200, label="delta1-2-5-6", strict=False))

    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["branch_id", "p", "lambda", "residual"])
        for br in branches:
            for s in br.samples:
                w.writerow([br.label, f"{s.p:.17g}", f"{s.lam:.17g}", f"{s.residual:.17g}"])

    for br in branches[:6]:
        print(f"{br.label}: lambda({br.samples[0].p:g}) = {br.samples[0].lam:.6f} -> lambda({br.last().p:g}) = {br.last().lam:.6f}")
    red_br = branches[6]
    print(f"{red_br.label}: starts at {red_br.samples[0].lam:.6f}, lost at p = {red_br.lost_at:.4f}")
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main(*sys.argv[1:])
