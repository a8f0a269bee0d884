"""Singular and pathological test functions, and the Smith-Volterra-Cantor set.

All generators are pure and return immutable :class:`RealFunction` objects.
Functions are also addressable by spec strings such as ``"svc-cdf:8"``,
``"weierstrass:0.5,3,24"`` or ``"expr:x*sin(1/x)"`` through
:func:`resolve_function`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import RangeError
from .functions import Builtin, RealFunction, load_csv, parse_expression

SVC_MAX_GENERATION = 40
# 2**24 intervals is the most we materialize; the closed-form length goes to 40.
SVC_MAX_MATERIALIZED = 24
SVC_CDF_MAX = 30


@dataclass(frozen=True, eq=False)
class IntervalSet:
    """Sorted, pairwise disjoint closed intervals stored as a ``(k, 2)`` array.

    Endpoints are floats, or :class:`fractions.Fraction` objects when built
    with exact arithmetic.
    """

    bounds: np.ndarray
    generation: int = 0

    def __post_init__(self):
        b = self.bounds
        if b.ndim != 2 or b.shape[1] != 2:
            raise ValueError("bounds must have shape (k, 2)")
        if len(b) and not np.all(b[:, 0] <= b[:, 1]):
            raise ValueError("interval with left endpoint above right endpoint")
        if len(b) > 1 and not np.all(b[1:, 0] > b[:-1, 1]):
            raise ValueError("intervals must be sorted and pairwise disjoint")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]], generation: int = 0) -> "IntervalSet":
        if len(pairs) == 0:
            return cls(np.zeros((0, 2)), generation)
        arr = np.array([tuple(p) for p in pairs], dtype=object if _exact(pairs) else float)
        return cls(arr, generation)

    @property
    def intervals(self) -> list[tuple]:
        return [(u, v) for u, v in self.bounds.tolist()]

    @property
    def total_length(self):
        if len(self.bounds) == 0:
            return 0.0
        return (self.bounds[:, 1] - self.bounds[:, 0]).sum()

    def __len__(self) -> int:
        return len(self.bounds)

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.intervals)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        if len(self.bounds) == 0:
            return False
        lefts = self.bounds[:, 0].astype(float)
        i = int(np.searchsorted(lefts, x + tol, side="right")) - 1
        return i >= 0 and float(self.bounds[i, 1]) + tol >= x

    def as_float(self) -> "IntervalSet":
        return IntervalSet(self.bounds.astype(float), self.generation)


def _exact(pairs) -> bool:
    return any(isinstance(v, Fraction) for p in pairs for v in p)


def _check_generation(n: int, limit: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise RangeError(f"generation must be a non-negative integer, got {n!r}")
    if n > limit:
        raise RangeError(f"generation {n} exceeds the supported maximum {limit}")


def svc_generation(n: int, exact: bool = False) -> IntervalSet:
    """The ``2**n`` closed intervals left after ``n`` middle removals.

    Starting from ``[0, 1]`` with ``p_0 = 1/4``, step ``k`` removes an open
    middle interval of width ``p_k`` from every remaining interval and sets
    ``p_{k+1} = p_k / 4``.  All endpoints are dyadic rationals, so the float
    result is exact up to ``n = 25``; ``exact=True`` returns Fractions.
    """
    _check_generation(n, SVC_MAX_GENERATION)
    if n > SVC_MAX_MATERIALIZED:
        raise RangeError(f"generation {n} has 2**{n} intervals; at most "
                         f"{SVC_MAX_MATERIALIZED} can be materialized")
    one = Fraction(1) if exact else 1.0
    dtype = object if exact else float
    lefts = np.array([0 * one], dtype=dtype)
    rights = np.array([one], dtype=dtype)
    p = one / 4
    for _ in range(n):
        mid = (lefts + rights) / 2
        new_l = np.empty(2 * len(lefts), dtype=dtype)
        new_r = np.empty(2 * len(lefts), dtype=dtype)
        new_l[0::2], new_r[0::2] = lefts, mid - p / 2
        new_l[1::2], new_r[1::2] = mid + p / 2, rights
        lefts, rights = new_l, new_r
        p = p / 4
    return IntervalSet(np.stack([lefts, rights], axis=1), n)


def svc_interval_length(n: int, exact: bool = False):
    """Length ``l_n = (2**-n + 4**-n) / 2`` of each generation-``n`` interval."""
    _check_generation(n, SVC_MAX_GENERATION)
    if exact:
        return (Fraction(1, 2 ** n) + Fraction(1, 4 ** n)) / 2
    return 0.5 * (2.0 ** -n + 4.0 ** -n)


def svc_remaining_length(n: int, exact: bool = False):
    """Total length ``2**n * l_n = (1 + 2**-n) / 2`` left after ``n`` steps."""
    _check_generation(n, SVC_MAX_GENERATION)
    if exact:
        return (1 + Fraction(1, 2 ** n)) / 2
    return 0.5 * (1.0 + 2.0 ** -n)


def _staircase(x: np.ndarray, child_ratios: Sequence[float]) -> np.ndarray:
    """CDF of uniform mass on a symmetric middle-removal construction over [0, 1].

    ``child_ratios[k]`` is the length of a generation ``k+1`` interval relative
    to its parent.  The mass is linear inside the final intervals and flat on
    the removed gaps.
    """
    t = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    acc = np.zeros_like(t)
    done = np.zeros(t.shape, dtype=bool)
    mass = 1.0
    for r in child_ratios:
        mass *= 0.5
        left = t <= r
        right = t >= 1.0 - r
        gap = ~left & ~right & ~done
        acc[gap] += mass
        done |= gap
        acc[right & ~done] += mass
        # measure from the nearer endpoint so rounding does not grow with depth
        t = np.where(left, t / r, 1.0 - (1.0 - t) / r)
        t = np.clip(t, 0.0, 1.0)
    return np.where(done, acc, acc + mass * t)


def svc_singular_cdf(n: int) -> RealFunction:
    """CDF of uniform mass spread equally over the ``2**n`` generation-``n`` SVC
    intervals: continuous, non-decreasing, flat on every removed gap."""
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= SVC_CDF_MAX:
        raise RangeError(f"svc-cdf depth must be in [1, {SVC_CDF_MAX}], got {n!r}")
    lengths = [svc_interval_length(k) for k in range(n + 1)]
    ratios = [lengths[k + 1] / lengths[k] for k in range(n)]
    return RealFunction(Builtin("svc-cdf", (n,)), (0.0, 1.0),
                        lambda x: _staircase(x, ratios), f"svc-cdf:{n}",
                        {"depth": n, "resolution": svc_interval_length(n)})


def cantor_function(depth: int) -> RealFunction:
    """Middle-thirds devil's staircase, iterated ``depth`` times.

    Exact at ternary rationals with at most ``depth`` digits; the error to
    the limit function is at most ``2**-depth``.
    """
    if not isinstance(depth, (int, np.integer)) or not 0 <= depth <= 60:
        raise RangeError(f"cantor depth must be in [0, 60], got {depth!r}")
    ratios = [1.0 / 3.0] * depth
    return RealFunction(Builtin("cantor", (depth,)), (0.0, 1.0),
                        lambda x: _staircase(x, ratios), f"cantor:{depth}",
                        {"depth": depth, "resolution": 3.0 ** -depth})


def weierstrass(a: float, b: float, terms: int) -> RealFunction:
    """Partial sum ``sum_{k<terms} a**k cos(b**k pi x)``; period 2."""
    if not 0 < a < 1:
        raise RangeError("weierstrass needs 0 < a < 1")
    if b != int(b) or int(b) < 3 or int(b) % 2 == 0:
        raise RangeError("weierstrass needs an odd integer b >= 3")
    if not a * b > 1:
        raise RangeError("weierstrass needs a*b > 1")
    if int(terms) != terms or terms < 1:
        raise RangeError("weierstrass needs at least one term")
    terms = int(terms)
    amps = a ** np.arange(terms, dtype=float)
    freqs = float(b) ** np.arange(terms, dtype=float) * math.pi

    def impl(x):
        out = np.zeros_like(x)
        for amp, freq in zip(amps, freqs):
            out += amp * np.cos(freq * x)
        return out

    name = f"weierstrass:{a!r},{int(b)},{terms}"
    return RealFunction(Builtin("weierstrass", (a, float(b), float(terms))),
                        (-math.inf, math.inf), impl, name,
                        {"depth": terms, "holder_exponent": -math.log(a) / math.log(b)})


def _guarded(fn: Callable[[np.ndarray], np.ndarray], at_zero: float = 0.0):
    def impl(x):
        nz = x != 0
        out = np.full(x.shape, at_zero)
        out[nz] = fn(x[nz])
        return out
    return impl


_R = (-math.inf, math.inf)
_HALF = (0.0, math.inf)


def _power(beta: float):
    if not beta > 0:
        raise RangeError("power exponent must be positive")
    return (lambda x: np.power(x, beta)), _HALF


def _step(c: float = 0.0):
    return (lambda x: np.where(x >= c, 1.0, 0.0)), _R


def _const(c: float = 0.0):
    return (lambda x: np.full(x.shape, float(c))), _R


_BUILTINS: dict[str, tuple[Callable, str]] = {
    "power": (_power, "x^beta on [0, inf); params: beta"),
    "exp_flat": (lambda: (_guarded(lambda x: np.exp(-1.0 / (x * x))), _R),
                 "exp(-1/x^2), 0 at 0"),
    "cubic": (lambda: ((lambda x: x * x * x), _R), "x^3"),
    "xsin1x": (lambda: (_guarded(lambda x: x * np.sin(1.0 / x)), _R), "x sin(1/x), 0 at 0"),
    "sqrt_sin1x": (lambda: (_guarded(lambda x: np.sqrt(x) * np.sin(1.0 / x)), _HALF),
                   "sqrt(x) sin(1/x) on [0, inf), 0 at 0"),
    "step": (_step, "indicator of x >= c (right-continuous); params: c"),
    "identity": (lambda: ((lambda x: x.copy()), _R), "x"),
    "const": (_const, "constant; params: c"),
    "abs": (lambda: (np.abs, _R), "|x|"),
    "sin": (lambda: (np.sin, _R), "sin(x)"),
    "exp": (lambda: (np.exp, _R), "exp(x)"),
}

_GENERATORS: dict[str, tuple[Callable[..., RealFunction], str]] = {
    "cantor": (lambda depth=20: cantor_function(int(depth)),
               "middle-thirds Cantor function; params: depth"),
    "svc-cdf": (lambda n=12: svc_singular_cdf(int(n)),
                "uniform-mass CDF on generation-n SVC intervals; params: n"),
    "weierstrass": (lambda a=0.5, b=3, terms=24: weierstrass(a, b, terms),
                    "Weierstrass partial sum; params: a, b, terms"),
}

_ALIASES = {"pow": "power", "svc_cdf": "svc-cdf", "svccdf": "svc-cdf", "x": "identity",
            "linear": "identity", "weier": "weierstrass"}


def builtin(name: str, *params: float) -> RealFunction:
    """Named builtin or corpus generator, e.g. ``builtin("power", 0.5)``."""
    key = _ALIASES.get(name, name)
    if key in _GENERATORS:
        try:
            return _GENERATORS[key][0](*params)
        except TypeError as exc:
            raise RangeError(f"bad parameters for {key}: {exc}") from None
    if key not in _BUILTINS:
        raise KeyError(f"unknown function {name!r}")
    try:
        impl, domain = _BUILTINS[key][0](*params)
    except TypeError as exc:
        raise RangeError(f"bad parameters for {key}: {exc}") from None
    label = key + (":" + ",".join(f"{p:g}" for p in params) if params else "")
    return RealFunction(Builtin(key, tuple(float(p) for p in params)), domain, impl, label)


def corpus_list() -> list[tuple[str, str]]:
    entries = [(k, d) for k, (_, d) in _BUILTINS.items()]
    entries += [(k, d) for k, (_, d) in _GENERATORS.items()]
    entries.append(("expr", "parsed expression in x, e.g. expr:x*sin(1/x)"))
    entries.append(("csv", "sampled data file with x,y lines, e.g. csv:data.csv"))
    return sorted(entries)


def resolve_function(spec: str) -> RealFunction:
    """Build a function from a spec string ``name[:p1,p2,...]``.

    ``expr:<text>`` parses an expression and ``csv:<path>`` loads samples.
    Raises KeyError for unknown names and RangeError / ParseError for bad
    parameters.
    """
    spec = spec.strip()
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    if name == "expr":
        return parse_expression(rest)
    if name == "csv":
        return load_csv(rest)
    params: list[float] = []
    if rest.strip():
        try:
            params = [float(p) for p in rest.split(",")]
        except ValueError:
            raise RangeError(f"bad numeric parameters in {spec!r}") from None
    return builtin(name, *params)


def cantor_generation(n: int, exact: bool = False) -> IntervalSet:
    """The ``2**n`` closed intervals left after ``n`` middle-thirds removals."""
    _check_generation(n, SVC_MAX_MATERIALIZED)
    one = Fraction(1) if exact else 1.0
    dtype = object if exact else float
    lefts = np.array([0 * one], dtype=dtype)
    width = one
    for _ in range(n):
        width = width / 3
        lefts = np.stack([lefts, lefts + 2 * width], axis=1).ravel()
    return IntervalSet(np.stack([lefts, lefts + width], axis=1), n)
