"""Compare the exact case matrices with the floating-point oracle.

    python scripts/oracle_crosscheck.py [--case b] [--h1 1] [--contour-points 64]
"""

import argparse
import time
from dataclasses import replace
from fractions import Fraction

import numpy as np

from boundary_wres.oracle import OracleConfig, case_matrix, relative_errors
from boundary_wres.residue import eval_case, star_cases


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--case", choices=[c.label for c in star_cases()])
    p.add_argument("--h1", type=Fraction, default=Fraction(1))
    p.add_argument("--contour-points", type=int, default=OracleConfig.contour_points)
    p.add_argument("--tol", type=float, default=1e-9)
    args = p.parse_args()

    cfg = replace(OracleConfig(), h1=float(args.h1), contour_points=args.contour_points)
    cases = [c for c in star_cases() if args.case in (None, c.label)]
    exact = {c.label: eval_case(c).subs_h1(args.h1) for c in cases}
    values = {k: np.array([[x.to_float() for x in row] for row in m.entries]) for k, m in exact.items()}
    scale = max(np.abs(v).max() for v in values.values()) or 1.0

    worst = 0.0
    for label in values:
        start = time.perf_counter()
        approx = case_matrix(label, cfg)
        err = float(relative_errors(values[label], approx, scale).max())
        worst = max(worst, err)
        print(f"{label:5s} exact diag {values[label][0, 0]:+.6g}  oracle diag {approx[0, 0].real:+.15g}  "
              f"max rel err {err:.2e}  ({time.perf_counter() - start:.1f} s)")
    print(f"{'PASS' if worst <= args.tol else 'FAIL'}: max rel err {worst:.2e} (tol {args.tol:g})")
    raise SystemExit(0 if worst <= args.tol else 1)


if __name__ == "__main__":
    main()
