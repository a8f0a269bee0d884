"""Remaining length of the Smith-Volterra-Cantor construction by generation."""

from __future__ import annotations

from _common import emit, parser

from modderiv.corpus import svc_generation, svc_remaining_length
from modderiv.experiments import svc_measure
from modderiv.sets import measure_estimate

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--max-n", type=int, default=20)
    args = p.parse_args()
    rows = []
    for n in range(args.max_n + 1):
        row = {"n": n, "remaining": svc_remaining_length(n), "limit_gap": svc_remaining_length(n) - 0.5}
        if n <= 16:
            row["measured"] = measure_estimate(svc_generation(n))
        rows.append(row)
    check = svc_measure(args.max_n)
    emit({"generations": rows,
          "gen1": [[str(a), str(b)] for a, b in check["gen1"]],
          "gen2": [[str(a), str(b)] for a, b in check["gen2"]],
          "gen1_matches": check["gen1"] == check["gen1_expected"],
          "gen2_matches": check["gen2"] == check["gen2_expected"]}, args.out)
