"""Set of change of the Cantor function under the matching power-law modulus."""

from __future__ import annotations

from _common import emit, parser

from modderiv.experiments import cantor_change_set
from modderiv.sets import measure_estimate

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--generation", type=int, default=7)
    args = p.parse_args()
    r = cantor_change_set(args.depth, args.generation, (1e-1, 1e-3, 1e-6), args.workers)
    emit({"change_points": len(r["report"].points),
          "distinct_x": len(r["report"].xs),
          "all_inside_generation": all(r["inside"]),
          "cover_lengths": {str(b): measure_estimate(c) for b, c in r["covers"].items()},
          "report": r["report"]}, args.out)
