#!/usr/bin/env python3
"""Regenerate the bundled table of zeta-zero ordinates.

Computes the first N nontrivial zeros of the Riemann zeta function with
mpmath's Riemann-Siegel machinery and writes them, one ordinate per line,
in the plain-decimal text format consumed by zetaheat.zeros.load_zeros.

Work is sharded and resumable: interrupted runs pick up at the first
missing shard.  Expect roughly an hour per 5000 zeros on one core at
heights near 10^4.

Usage:
    python tools/generate_zeros.py --workdir /tmp/zeros_work --count 10000
    python tools/generate_zeros.py --workdir /tmp/zeros_work --count 10000 \
        --merge src/zetaheat/data/zeta_zeros_10000.txt
"""

import argparse
import os
import sys
import time

from mpmath import mp, zetazero

SHARD_SIZE = 250


def shard_path(workdir: str, index: int) -> str:
    return os.path.join(workdir, f"shard_{index:04d}.txt")


def generate(workdir: str, count: int, digits: int) -> None:
    os.makedirs(workdir, exist_ok=True)
    nshards = (count + SHARD_SIZE - 1) // SHARD_SIZE
    for i in range(nshards):
        path = shard_path(workdir, i)
        if os.path.exists(path):
            continue
        lo = i * SHARD_SIZE + 1
        hi = min((i + 1) * SHARD_SIZE, count)
        t0 = time.time()
        lines = []
        for n in range(lo, hi + 1):
            rho = zetazero(n).imag
            lines.append(mp.nstr(rho, digits, strip_zeros=False))
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
        print(
            f"shard {i + 1}/{nshards} (zeros {lo}..{hi}) "
            f"in {time.time() - t0:.1f}s",
            flush=True,
        )


def merge(workdir: str, count: int, dest: str, digits: int) -> None:
    ordinates = []
    nshards = (count + SHARD_SIZE - 1) // SHARD_SIZE
    for i in range(nshards):
        path = shard_path(workdir, i)
        if not os.path.exists(path):
            sys.exit(f"missing shard {path}; generation incomplete")
        with open(path) as fh:
            ordinates.extend(line.strip() for line in fh if line.strip())
    ordinates = ordinates[:count]
    if len(ordinates) != count:
        sys.exit(f"expected {count} ordinates, found {len(ordinates)}")

    values = [float(s) for s in ordinates]
    if not 14.13 < values[0] < 14.14:
        sys.exit(f"first ordinate {values[0]} outside (14.13, 14.14)")
    for i in range(1, count):
        if values[i] <= values[i - 1]:
            sys.exit(f"ordinates not increasing at index {i}")

    with open(dest, "w") as fh:
        fh.write(
            "# Imaginary parts of the first {n} nontrivial zeros of the\n"
            "# Riemann zeta function, ascending, {d} significant digits.\n"
            "# Generated by tools/generate_zeros.py (mpmath zetazero).\n".format(
                n=count, d=digits
            )
        )
        fh.write("\n".join(ordinates) + "\n")
    print(f"wrote {count} ordinates to {dest}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", required=True)
    parser.add_argument("--count", type=int, default=10000)
    parser.add_argument("--digits", type=int, default=28)
    parser.add_argument("--dps", type=int, default=30)
    parser.add_argument("--merge", metavar="DEST", default=None)
    args = parser.parse_args()

    mp.dps = args.dps
    if args.merge:
        merge(args.workdir, args.count, args.merge, args.digits)
    else:
        generate(args.workdir, args.count, args.digits)


if __name__ == "__main__":
    main()
