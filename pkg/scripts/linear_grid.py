"""Reproduce the linear-case table: failure intervals across (m, n) splits.

Runs the polar pipeline for each split of ten inputs between random and
uncertain, with an optional Monte Carlo comparison column.

    python scripts/linear_grid.py [--samples 1000000] [--skip-mcs]
"""

import argparse

from hybrel import case_linear, estimate_failure, run_case

ROWS = [(1, 9), (3, 7), (5, 5), (7, 3), (9, 1)]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--skip-mcs", action="store_true")
    args = parser.parse_args()

    print(f"{'m':>2} {'n':>2} {'F_lo':>12} {'F_hi':>12} {'MCS p':>12} {'MCS CI':>26}")
    for m, n in ROWS:
        case = case_linear(m, n)
        report = run_case(case)
        if args.skip_mcs:
            mcs_cols = f"{'-':>12} {'-':>26}"
        else:
            est = estimate_failure(case.problem, samples=args.samples, seed=args.seed)
            mcs_cols = (f"{est.p_hat:12.4e} "
                        f"[{est.ci_lo:11.4e}, {est.ci_hi:11.4e}]")
        print(f"{m:>2} {n:>2} {report.F_lo:12.4e} {report.F_hi:12.4e} {mcs_cols}")


if __name__ == "__main__":
    main()
