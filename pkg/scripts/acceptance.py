"""Run every acceptance check and write the JSON report; exit status 1 if a required check fails."""

import argparse
import sys
from pathlib import Path

from semiclassical import cli, experiments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("results") / "acceptance.json")
    ap.add_argument("--workers", type=int, default=2)
    ap.add_argument("--only", type=int, nargs="*", default=None, help="criterion numbers to run")
    args = ap.parse_args()
    rep = experiments.acceptance_suite({"workers": args.workers}, only=set(args.only) if args.only else None)
    for c in rep["checks"]:
        status = "PASS" if c["passed"] else ("FAIL" if c["required"] else "DATA")
        print(f"{status} {c['id']:<20s} measured {c['measured']:<12.6g} target {c['target']:<10.6g} "
              f"tol {c['tolerance']:<8.3g} {c['runtime_s']:7.2f} s  {c['description']}")
    cfg = cli.parse_config("")
    cli.emit_report(cli.make_report(cfg, "acceptance", rep), "json", args.out)
    print(f"report -> {args.out}")
    sys.exit(0 if rep["all_required_passed"] else 1)


if __name__ == "__main__":
    main()
