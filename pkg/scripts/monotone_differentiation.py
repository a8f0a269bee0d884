"""Forward/backward agreement of derivative estimates for monotone functions."""

from __future__ import annotations

from _common import emit, parser

from modderiv.experiments import monotone_differentiation

if __name__ == "__main__":
    p = parser(__doc__)
    p.add_argument("--points", type=int, default=501)
    args = p.parse_args()
    emit(monotone_differentiation(args.points), args.out)
