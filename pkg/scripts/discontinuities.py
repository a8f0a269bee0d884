"""Discontinuity detection on the step function and the continuous corpus."""

from __future__ import annotations

from _common import emit, parser

from modderiv.experiments import discontinuity_roundtrip

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--grid", type=int, default=1001)
    p.add_argument("--continuous-grid", type=int, default=201)
    args = p.parse_args()
    r = discontinuity_roundtrip(args.grid, args.continuous_grid, workers=args.workers)
    emit({"step": [{"x": d.x, "osc": d.osc} for d in r["step"]],
          "continuous": {k: [{"x": d.x, "osc": d.osc} for d in v]
                         for k, v in r["continuous"].items()}}, args.out)
