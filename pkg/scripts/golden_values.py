"""Reference lambda values for y^2 = x^6 - 1 and y^2 = x^5 - x.

The fixtures in tests/ are computed here at doubled quadrature resolution,
a 100x tighter theta tolerance and 40-digit theta sums, then compared with
the default pipeline.

    python3 scripts/golden_values.py
"""

import cmath
import json

from hyplambda.discriminant import context, discriminant
from hyplambda.hyperelliptic import MIN_NODES, curve_from_roots, period_matrix_full
from hyplambda.invariants import lambda_arch
from hyplambda.pipeline import curve_report
from hyplambda.siegel import log_det_im

CURVES = {
    "x6-1": [cmath.exp(1j * cmath.pi * k / 3) for k in range(6)],
    # four roots of x^4 - 1, the root 0 and infinity (appended)
    "x5-x": [1, 1j, -1, -1j, 0],
}


def reference(roots, eps=1e-14):
    curve = curve_from_roots(roots)
    tau = period_matrix_full(curve, min_nodes=2 * MIN_NODES, rtol=1e-15).tau
    disc = discriminant(tau, eps, "extended")
    log_norm = 2 * context(curve.g).r * log_det_im(tau) + disc.log_abs
    return lambda_arch(log_norm, curve.g)


def main():
    out = {}
    for name, roots in CURVES.items():
        ref = reference(roots)
        default = curve_report(curve_from_roots(roots)).lambda_
        out[name] = {"reference": ref, "default": default, "difference": default - ref}
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
