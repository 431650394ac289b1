"""Run every scenario file in a directory and print one summary line each.

Usage: python3 scripts/run_scenarios.py [scenarios/]
"""

import argparse
from pathlib import Path

from graphsync.dynamics.scenario import load_scenario, run_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("directory", nargs="?", default=str(Path(__file__).resolve().parents[1] / "scenarios"))
    args = ap.parse_args()
    for path in sorted(Path(args.directory).glob("*.toml")):
        s = run_scenario(load_scenario(path)).summary()
        print(f"{path.name:<24} {s['graph']:<10} {s['subspace']:<22} {s['field_class']:<6} "
              f"max residual {s['max_residual']:.2e}{'  DIVERGED' if s['diverged'] else ''}")


if __name__ == "__main__":
    main()
