"""Compute every case matrix exactly and write the JSON report.

    python scripts/compute_omega3.py --out results/omega3.json [--h1 1]
"""

import argparse
import json
import time
from pathlib import Path

from boundary_wres.cli import run


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", type=Path, default=Path("results/omega3.json"))
    p.add_argument("--h1", default=None, help="rational value substituted for h1")
    args = p.parse_args()

    argv = ["omega3"] + (["--h1", args.h1] if args.h1 else [])
    start = time.perf_counter()
    code, rep, _ = run(argv)
    doc = rep.document()
    doc["seconds"] = round(time.perf_counter() - start, 3)

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    for label, entry in doc["omega"]["cases"].items():
        print(f"{label:5s} isotropy constant: {entry['isotropy_constant']}")
    print(f"total: {doc['omega']['isotropy_constant']}   a = {doc['omega']['a']}")
    print(f"wrote {args.out} ({doc['seconds']} s, exit {code})")
    raise SystemExit(code)


if __name__ == "__main__":
    main()
