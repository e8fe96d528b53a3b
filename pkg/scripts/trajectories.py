#!/usr/bin/env python3
"""Rounds (and box copies) needed to push a weak box close to CGLMP = 4."""
import argparse

from nldist.distillation import Family, MixtureParams, Protocol, distill_iterate, rounds_to_reach


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--target", type=float, default=3.9)
    args = ap.parse_args()

    print(f"start eps={args.epsilon}, target CGLMP {args.target}")
    for d in (2, 3, 5, 10):
        for protocol in (Protocol.A, Protocol.B):
            n = rounds_to_reach(protocol, args.epsilon, d, args.target)
            traj = distill_iterate(MixtureParams(args.epsilon, protocol.family, d), protocol, min(n, 30))
            worst = max(t.oracle_residual for t in traj)
            print(f"  d={d:<3d} {protocol.value}: {n:3d} rounds, 2^{n} copies, oracle residual {worst:.1e}")


if __name__ == "__main__":
    main()
