"""Classical-limit sweeps for the three models; one CSV per model plus extrapolated limits."""

import argparse
from pathlib import Path

from semiclassical import cli, experiments
from semiclassical.experiments import SweepSpec

SPECS = {
    "curie_weiss": SweepSpec("curie_weiss", (50, 100, 200, 500, 1000, 2000)),
    "bose_hubbard": SweepSpec("bose_hubbard", (50, 100, 200, 500, 1000)),
    "double_well": SweepSpec("double_well", (0.5, 0.2, 0.1, 0.05, 0.02)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("models", nargs="*", default=list(SPECS))
    args = ap.parse_args()
    cfg = cli.parse_config("")
    for name in args.models:
        spec = SweepSpec(**{**SPECS[name].__dict__, "workers": args.workers})
        recs = experiments.run_limit_sweep(spec)
        path = cli.emit_report(recs, "csv", args.out / f"{name}.csv", cfg)
        print(f"{name}: {len(recs)} records -> {path}")
        for obs in spec.observables:
            est = experiments.extrapolate(experiments.select(recs, obs))
            cl = experiments.select(recs, obs)[0].classical
            print(f"  {obs:<18s} limit {est.value: .6f}  classical {cl: .6f}  rate {est.rate:.3f}  ({est.method})")


if __name__ == "__main__":
    main()
