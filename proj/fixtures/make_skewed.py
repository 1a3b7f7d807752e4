#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Regenerates fixtures/skewed.csv.

d = 4 units with rates lambda = (0.25, 0.25, 0.25, 25) and durations r = s = 2.
The observed x are pinned to (1, 1, 1, 25); y is drawn from Poisson(lambda * s)
with a fixed seed so the file is reproducible byte for byte.
"""
import math
import random
import sys

LAMBDA = (0.25, 0.25, 0.25, 25.0)
X = (1, 1, 1, 25)
S = 2.0
SEED = 20240601


def poisson(rng: random.Random, mean: float) -> int:
    # Inversion by sequential search; exact for the small means used here.
    u = rng.random()
    k, p = 0, math.exp(-mean)
    cdf = p
    while u > cdf:
        k += 1
        p *= mean / k
        cdf += p
    return k


def main() -> None:
    rng = random.Random(SEED)
    path = sys.argv[1] if len(sys.argv) > 1 else "skewed.csv"
    with open(path, "w", newline="\n") as out:
        out.write("unit_id,x,y\n")
        for i, (lam, x) in enumerate(zip(LAMBDA, X), start=1):
            out.write(f"u{i},{x},{poisson(rng, lam * S)}\n")


if __name__ == "__main__":
    main()
