"""Boundary sweeps for genus 2: a colliding pair and a 3+3 split, two base
configurations each.  Writes one CSV per family and prints the slope table.

    python3 scripts/degeneration_sweeps.py [--out-dir sweeps] [--jobs 4] [--prec extended]
"""

import argparse
import json
import math
from pathlib import Path

from hyplambda.cli import SWEEP_COLUMNS, dumps, write_csv
from hyplambda.sweep import SweepSpec, run_sweep, summarize

BASE_A = (-1.3 + 0.2j, -0.4 - 0.5j, 0.1 + 0.7j, 0.9 - 0.2j, 1.6 + 0.4j, 2.2 - 0.6j)
BASE_B = (-2.0 - 0.3j, -0.9 + 0.8j, -0.2 - 0.9j, 0.6 + 0.3j, 1.1 - 1.1j, 1.9 + 0.9j)

FAMILIES = {
    "pair-A": (BASE_A, ((2, 3),)),
    "pair-B": (BASE_B, ((0, 1),)),
    "split-A": (BASE_A, ((0, 1, 2),)),
    "split-B": (BASE_B, ((3, 4, 5),)),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="sweeps")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--prec", choices=("double", "extended"), default="extended")
    ap.add_argument("--K", type=int, default=12)
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table = {}
    for name, (base, clusters) in FAMILIES.items():
        spec = SweepSpec(base, clusters, K=args.K, precision=args.prec, label=name)
        rows = run_sweep(spec, jobs=args.jobs)
        data = [
            [r.k, r.t, -math.log(r.t), r.log_petersson, r.lambda_, r.lambda_theta, r.log_det_im]
            + [r.diagnostics.get(c) for c in SWEEP_COLUMNS[7:13]]
            + [r.error]
            for r in rows
        ]
        (out / f"{name}.csv").write_text(write_csv(SWEEP_COLUMNS, data))
        table[name] = summarize(spec, rows)
    (out / "summary.json").write_text(dumps(table) + "\n")

    print(f"{'family':10s} {'slope':>12s} {'linear':>9s} {'loglog':>9s} {'halves':>9s} {'rational':>9s}")
    for name, s in table.items():
        print(
            f"{name:10s} {s['slope']:12.8f} {s['slope_linear']:9.5f} {s['slope_loglog']:9.5f} "
            f"{s['half_relative_difference']:9.1e} {s['nearest_rational']:>9s}"
        )
    print(json.dumps({k: v["nearest_rational"] for k, v in table.items()}))


if __name__ == "__main__":
    main()
