"""Run both box policies on one set of trajectories and print the verdicts.

    python3 scripts/run_proof.py [--steps 25000] [--workers N] [--out-dir .]

The 32 trajectories are integrated once; the "repaired" and "stated" policies
are then evaluated on the same runs and written as two certificates.
"""

import argparse
import time
from pathlib import Path

from roundtaylor.proof import ProofConfig, default_workers, run_full_proof, run_trajectories


def main() -> None:
    p = argparse.ArgumentParser()
    p.add_argument("--steps", type=int, default=25_000)
    p.add_argument("--workers", type=int, default=default_workers())
    p.add_argument("--out-dir", default=".")
    args = p.parse_args()

    t0 = time.perf_counter()
    base = ProofConfig(steps=args.steps, workers=args.workers)
    runs = run_trajectories(base)
    print(f"integrated 32 trajectories in {time.perf_counter() - t0:.1f} s")

    for policy in ("repaired", "stated"):
        cert = run_full_proof(ProofConfig(steps=args.steps, box_policy=policy), runs)
        path = Path(args.out_dir) / f"certificate_{policy}.json"
        cert.write(path)
        verdict = cert.sections["verdict"]
        print(f"\n{policy}: {'PASS' if verdict['pass'] else 'FAIL'} -> {path}")
        for reason in verdict["reasons"]:
            print(f"  - {reason}")


if __name__ == "__main__":
    main()
