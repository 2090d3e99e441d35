"""Exact rationals and nestable forward-mode dual numbers.

``Q`` is the exact scalar type (``gmpy2.mpq``; always reduced, positive
denominator).  ``Dual`` carries a value plus one partial per chart
coordinate.  Duals are tagged with an integer level so they can be nested:
a level-2 dual whose parts are level-1 duals yields second derivatives.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Iterable, Sequence

import gmpy2

Q = gmpy2.mpq
_MPQ = type(Q(0))


def exact(x: Any) -> Any:
    """Coerce ints, Fractions, strings like '3/4' and mpq to ``Q``."""
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Q(x)
    if isinstance(x, str):
        return Q(Fraction(x.strip()))
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite float")
        return Q(Fraction(x))
    if type(x).__name__ in ("mpz",):
        return Q(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def qstr(x: Any) -> str:
    """Render an exact or float scalar compactly ('3/4', '-2', '0.5')."""
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        x = Q(x)
    if isinstance(x, _MPQ):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


class Dual:
    """Value plus gradient, with a nesting level.

    Arithmetic with a lower-level object (including plain numbers) treats it
    as a constant.  Arithmetic with a higher-level dual defers to that dual.
    """

    __slots__ = ("val", "eps", "level")
    __array_ufunc__ = None  # keep numpy scalars from swallowing duals

    def __init__(self, val: Any, eps: Sequence[Any], level: int):
        self.val = val
        self.eps = tuple(eps)
        self.level = level

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {list(self.eps)!r}, L{self.level})"

    # level routing
    def _rank(self, o: Any) -> int:
        if isinstance(o, Dual):
            return (o.level > self.level) - (o.level < self.level)
        return -1

    def __add__(self, o):
        r = self._rank(o)
        if r > 0:
            return o.__radd__(self)
        if r == 0:
            return Dual(self.val + o.val, [x + y for x, y in zip(self.eps, o.eps)], self.level)
        return Dual(self.val + o, self.eps, self.level)

    def __radd__(self, o):
        return Dual(o + self.val, self.eps, self.level)

    def __neg__(self):
        return Dual(-self.val, [-x for x in self.eps], self.level)

    def __pos__(self):
        return self

    def __sub__(self, o):
        r = self._rank(o)
        if r > 0:
            return o.__rsub__(self)
        if r == 0:
            return Dual(self.val - o.val, [x - y for x, y in zip(self.eps, o.eps)], self.level)
        return Dual(self.val - o, self.eps, self.level)

    def __rsub__(self, o):
        return Dual(o - self.val, [-x for x in self.eps], self.level)

    def __mul__(self, o):
        r = self._rank(o)
        if r > 0:
            return o.__rmul__(self)
        if r == 0:
            a, b = self.val, o.val
            return Dual(a * b, [x * b + a * y for x, y in zip(self.eps, o.eps)], self.level)
        return Dual(self.val * o, [x * o for x in self.eps], self.level)

    def __rmul__(self, o):
        return Dual(o * self.val, [o * x for x in self.eps], self.level)

    def __truediv__(self, o):
        r = self._rank(o)
        if r > 0:
            return o.__rtruediv__(self)
        if r == 0:
            b = o.val
            q = self.val / b
            return Dual(q, [(x - q * y) / b for x, y in zip(self.eps, o.eps)], self.level)
        return Dual(self.val / o, [x / o for x in self.eps], self.level)

    def __rtruediv__(self, o):
        q = o / self.val
        return Dual(q, [-q * x / self.val for x in self.eps], self.level)

    def __pow__(self, k):
        if not isinstance(k, int) or isinstance(k, bool):
            return NotImplemented
        if k < 0:
            return 1 / self ** (-k)
        if k == 0:
            return 1
        out = self
        for _ in range(k - 1):
            out = out * self
        return out


def _strip(x: Any) -> Any:
    while isinstance(x, Dual):
        x = x.val
    return x


def base_is_float(x: Any) -> bool:
    return isinstance(_strip(x), float)


def next_level(xs: Iterable[Any]) -> int:
    lvl = 0
    for x in xs:
        if isinstance(x, Dual) and x.level > lvl:
            lvl = x.level
    return lvl + 1


def seed_duals(xs: Sequence[Any]) -> tuple[list[Dual], int]:
    """Lift coordinates to duals at a fresh level with unit gradients."""
    lvl = next_level(xs)
    d = len(xs)
    out = []
    for i, x in enumerate(xs):
        e = [0] * d
        e[i] = 1
        out.append(Dual(x, e, lvl))
    return out, lvl


def split(y: Any, lvl: int, d: int) -> tuple[Any, tuple]:
    """Value and gradient of ``y`` with respect to the level-``lvl`` seed."""
    if isinstance(y, Dual) and y.level == lvl:
        return y.val, y.eps
    return y, (0,) * d


def exp(x: Any) -> Any:
    if isinstance(x, Dual):
        v = exp(x.val)
        return Dual(v, [v * e for e in x.eps], x.level)
    if isinstance(x, _MPQ):
        if x == 0:
            return Q(1)
        raise ValueError("exp of a nonzero rational is not rational; use float mode")
    return math.exp(x)


def sqrt(x: Any) -> Any:
    if isinstance(x, Dual):
        v = sqrt(x.val)
        return Dual(v, [e / (2 * v) for e in x.eps], x.level)
    if isinstance(x, _MPQ):
        n, d = gmpy2.is_square(x.numerator), gmpy2.is_square(x.denominator)
        if n and d:
            return Q(gmpy2.isqrt(x.numerator), gmpy2.isqrt(x.denominator))
        raise ValueError("irrational square root; use float mode")
    return math.sqrt(x)


def scale(c: Any, y: Any) -> Any:
    """c * y without mixing exact constants into float data (mpq * float is mpfr)."""
    if isinstance(c, _MPQ) and base_is_float(y):
        c = float(c)
    return c * y


def is_zero(x: Any) -> bool:
    """Value is zero (a dual may still carry a nonzero gradient)."""
    return _strip(x) == 0


def is_null(x: Any) -> bool:
    """Structurally zero: a plain zero, safe to drop from sums and products."""
    if isinstance(x, Dual):
        return False
    nz = getattr(x, "is_null", None)
    if nz is not None:
        return nz()
    return x == 0
