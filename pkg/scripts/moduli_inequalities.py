"""Additivity classes of sqrt, linear and square moduli and the triangle
inequality of point oscillations for concave corpus functions."""

from __future__ import annotations

from _common import emit, parser

from modderiv.experiments import moduli_inequalities

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--pairs", type=int, default=10_000)
    args = p.parse_args()
    r = moduli_inequalities(args.pairs, args.seed)
    emit({k: (v if k == "triangle" else {"value": v.value, "sub": v.sub,
                                          "additive": v.additive, "super": v.super})
          for k, v in r.items()}, args.out)
