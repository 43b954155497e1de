"""Run a bound sweep from a config file and print the tightest ratio per (alpha, n)."""
import argparse
from collections import defaultdict

from isoprof.config import load_config
from isoprof.sweep import run_sweep, write_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="configs/example.ini")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cfg = load_config(args.config)
    result = run_sweep(cfg)
    files = write_sweep(result, cfg, args.out or cfg.out_dir)

    best = defaultdict(float)
    for row in result.bounds:
        if row["valid"] and row["ratio"] is not None:
            key = (row["alpha"], row["n"])
            best[key] = max(best[key], row["ratio"])
    print("alpha      n  best lower/upper")
    for (alpha, n), r in sorted(best.items()):
        print(f"{alpha:5g} {n:6d}  {r:.4f}")
    print(f"{len(result.failures)} failed checks; wrote {', '.join(str(p) for p in files.values())}")


if __name__ == "__main__":
    main()
