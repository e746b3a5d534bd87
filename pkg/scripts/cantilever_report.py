"""Full cantilever-tube report: design point, per-shift curve, Monte Carlo.

    python scripts/cantilever_report.py [--samples 1000000]
"""

import argparse

from hybrel import case_cantilever_tube, estimate_failure, run_case


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    case = case_cantilever_tube()
    report = run_case(case)
    print(f"design point: beta={report.beta:.6f} offset={report.d:.6f} "
          f"grad_norm={report.D:.6g} converged={report.converged}")
    print(f"failure interval: [{report.F_lo:.5e}, {report.F_hi:.5e}]")
    print(f"reliability interval: [{report.R_lo:.9f}, {report.R_hi:.9f}]")
    print("\nshift curve:")
    for shift, rel in report.curve:
        print(f"  shift={shift:7.3f}  R={rel:.9f}")

    est = estimate_failure(case.problem, samples=args.samples, seed=args.seed)
    print(f"\nMCS ({est.samples} samples, seed {est.seed}): "
          f"p_hat={est.p_hat:.5e} CI=[{est.ci_lo:.5e}, {est.ci_hi:.5e}]")


if __name__ == "__main__":
    main()
