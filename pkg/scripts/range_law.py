"""Omega-derivatives at seeded points across the corpus; checks the {-1, 0, 1} range law."""

from __future__ import annotations

from _common import emit, parser

from modderiv.experiments import SweepConfig, range_law_sweep

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--full", action="store_true", help="keep the per-point rows")
    args = p.parse_args()
    report = range_law_sweep(SweepConfig(seed=args.seed, points=args.points,
                                         workers=args.workers))
    if not args.full:
        for r in report["results"]:
            r.pop("points")
    emit(report, args.out)
