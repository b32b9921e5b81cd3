"""Command-line driver: identity suites, case matrices, totals and the float oracle.

Exit status is 0 when every asserted check passes, 1 when one fails and 2
for usage errors. ``--json`` prints a deterministic document::

    {"tool", "suite", "mode", "h1", "results": [...], "omega": {...}}
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .residue import (
    CoeffMatrix,
    case_count_report,
    enumerate_cases,
    eval_case,
    omega3,
    star_cases,
)
from .sphere import ExactScalar
from .suites import CheckResult, run_identity_suites

COMMANDS = ("identities", "cases", "omega3", "conjecture", "enumerate", "oracle")
CASE_LABELS = tuple(c.label for c in star_cases())
ORACLE_TOLERANCE = 1e-9
ASSERTED_FLAGS = ("h1_linear", "real", "pi_power_2", "higher_slots_vanish", "degree_audit",
                  "aI_zero", "isotropic")
REPORTED_FLAGS = ("symmetric", "total_zero", "conjecture_zero")


class Report:
    def __init__(self, suite: str, mode: str, h1: Fraction | None):
        self.suite = suite
        self.mode = mode
        self.h1 = h1
        self.results: list[CheckResult] = []
        self.omega: dict = {}

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def scalar(self, x: ExactScalar) -> str:
        return str(x if self.h1 is None else x.subs_h1(self.h1))

    def matrix(self, m: CoeffMatrix) -> list[list[str]]:
        return [[self.scalar(x) for x in row] for row in m.entries]

    def document(self) -> dict:
        return {
            "tool": f"boundary-wres {__version__}",
            "suite": self.suite,
            "mode": self.mode,
            "h1": "formal" if self.h1 is None else str(self.h1),
            "results": [r.as_dict() for r in self.results],
            "omega": self.omega,
        }


# ---------------------------------------------------------------- commands

def cmd_identities(rep: Report, args) -> None:
    for suite in run_identity_suites():
        for r in suite.results:
            rep.results.append(CheckResult(f"{suite.name}/{r.name}", r.passed, r.exact))


def _case_entry(rep: Report, label: str, m: CoeffMatrix) -> dict:
    iso = m.isotropy_constant()
    return {
        "matrix": rep.matrix(m),
        "isotropy_constant": None if iso is None else rep.scalar(iso),
        "higher_slots_vanish": m.higher_vanish(),
    }


def _selected(args) -> list:
    cases = star_cases()
    return [c for c in cases if c.label == args.case] if args.case else cases


def cmd_cases(rep: Report, args) -> None:
    out = {}
    for case in _selected(args):
        m = eval_case(case)
        out[case.label] = _case_entry(rep, case.label, m)
        ok = m.h1_linear() and m.is_real() and m.pi_powers() <= {2}
        iso = m.isotropy_constant()
        rep.results.append(CheckResult(case.label, ok, rep.scalar(iso) if iso is not None else "anisotropic"))
    rep.omega["cases"] = out


def cmd_omega3(rep: Report, args) -> None:
    res = omega3()
    for name in ASSERTED_FLAGS:
        rep.results.append(CheckResult(name, res.flags[name], str(res.flags[name]).lower()))
    rep.omega = {
        "cases": {k: _case_entry(rep, k, m) for k, m in res.cases.items()},
        "total": rep.matrix(res.total),
        "isotropy_constant": None if res.isotropy is None else rep.scalar(res.isotropy),
        "a": None if res.a is None else str(res.a),
        "conjecture": rep.matrix(res.conjecture),
        "flags": {k: res.flags[k] for k in REPORTED_FLAGS},
    }


def cmd_conjecture(rep: Report, args) -> None:
    b, c = (eval_case(x) for x in star_cases() if x.label in ("b", "c"))
    total = b + c
    iso = total.isotropy_constant()
    exact = rep.scalar(iso) if iso is not None else "anisotropic"
    rep.results.append(CheckResult("case_b_plus_case_c", total.is_real() and total.h1_linear(), exact))
    rep.omega = {
        "conjecture": rep.matrix(total),
        "isotropy_constant": None if iso is None else rep.scalar(iso),
        "vanishes": total.is_zero(),
    }


def cmd_enumerate(rep: Report, args) -> None:
    cases = enumerate_cases(star=not args.general)
    for c in cases:
        fields = [c.r, c.l, c.k, c.j, c.alpha]
        if args.general:
            fields += [c.beta_tan, c.beta_normal, c.delta_tan, c.delta_normal]
        rep.results.append(CheckResult(c.label, True, "(" + ", ".join(map(str, fields)) + ")"))
    rep.omega["count"] = len(cases)
    if args.general:
        rep.omega["count_report"] = case_count_report()


def cmd_oracle(rep: Report, args) -> None:
    import numpy as np

    from .oracle import OracleConfig, case_matrix, relative_errors

    h1 = rep.h1 if rep.h1 is not None else Fraction(1)
    cfg = OracleConfig(h1=float(h1))
    selected = _selected(args)
    exact = {c.label: eval_case(c).subs_h1(h1) for c in selected}
    approx = {c.label: case_matrix(c.label, cfg) for c in selected}
    values = {k: np.array([[x.to_float() for x in row] for row in m.entries]) for k, m in exact.items()}
    scale = max([np.abs(v).max() for v in values.values()] + [0.0]) or 1.0
    worst = {}
    for label in exact:
        err = relative_errors(values[label], approx[label], scale)
        worst[label] = float(err.max())
        for i in range(3):
            for j in range(3):
                rep.results.append(CheckResult(
                    f"{label}[{i + 1},{j + 1}]", bool(err[i, j] <= ORACLE_TOLERANCE),
                    str(exact[label].entries[i][j]), float(approx[label][i, j].real), float(err[i, j])))
    rep.omega = {
        "h1": str(h1),
        "tolerance": ORACLE_TOLERANCE,
        "zero_scale": float(scale),
        "max_rel_err": worst,
        "sphere_rule": [cfg.sphere_theta, cfg.sphere_phi],
        "contour_points": cfg.contour_points,
    }


HANDLERS = {
    "identities": cmd_identities,
    "cases": cmd_cases,
    "omega3": cmd_omega3,
    "conjecture": cmd_conjecture,
    "enumerate": cmd_enumerate,
    "oracle": cmd_oracle,
}


# ---------------------------------------------------------------- output

def _human(rep: Report) -> str:
    lines = [f"boundary-wres {__version__}  suite={rep.suite}  mode={rep.mode}  "
             f"h1={'formal' if rep.h1 is None else rep.h1}"]
    for r in rep.results:
        line = f"  [{'pass' if r.passed else 'FAIL'}] {r.name}: {r.exact}"
        if r.float_value is not None:
            line += f"  float={r.float_value:.15g}  rel_err={r.rel_err:.3e}"
        lines.append(line)
    if rep.omega:
        lines.append(json.dumps(rep.omega, indent=2, sort_keys=True))
    return "\n".join(lines)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boundary-wres", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--case", choices=CASE_LABELS, help="restrict cases/oracle to one family")
    p.add_argument("--general", action="store_true", help="enumerate without the x_n-independence assumption")
    p.add_argument("--json", action="store_true", help="print the machine-readable document")
    p.add_argument("--h1", type=_rational, default=None, help="substitute a rational for h1 in reports")
    return p


def run(argv: list[str] | None = None) -> tuple[int, Report, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    rep = Report(args.command, "general" if args.general else "star", args.h1)
    HANDLERS[args.command](rep, args)
    return (0 if rep.passed else 1), rep, args


def main(argv: list[str] | None = None) -> int:
    code, rep, args = run(argv)
    print(json.dumps(rep.document(), indent=2, sort_keys=True) if args.json else _human(rep))
    if code:
        failed = ", ".join(r.name for r in rep.results if not r.passed)
        print(f"identity violation: {failed}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
