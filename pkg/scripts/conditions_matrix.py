"""Seeded (function, point, modulus) matrix: C2 implies convergence implies C1,
and the Taylor residual of every nonzero converged derivative is small-o."""

from __future__ import annotations

from _common import emit, parser

from modderiv.experiments import conditions_matrix

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--cases", type=int, default=200)
    args = p.parse_args()
    cases = conditions_matrix(args.seed, args.cases, args.workers)
    c2_bad = sum(c["C2"] and not c["derivative"].converged for c in cases)
    c1_bad = sum(c["derivative"].converged and not c["C1"].holds for c in cases)
    nonzero = [c for c in cases if c["derivative"].converged and abs(c["derivative"].value) > 1e-6]
    summary = {
        "cases": len(cases),
        "C2_true": sum(c["C2"] for c in cases),
        "converged": sum(c["derivative"].converged for c in cases),
        "C2_without_convergence": c2_bad,
        "convergence_without_C1": c1_bad,
        "nonzero_converged": len(nonzero),
        "nonzero_not_little_o": sum(not c["taylor"]["is_little_o"] for c in nonzero),
    }
    emit({"summary": summary, "cases": cases}, args.out)
