"""Fractional velocities of power laws at the origin for every exponent pair."""

from __future__ import annotations

from _common import emit, parser

from modderiv.experiments import fractional_velocity_table

if __name__ == "__main__":
    args = parser(__doc__).parse_args()
    emit(fractional_velocity_table(), args.out)
