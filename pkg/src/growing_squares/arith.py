"""Arithmetic modes.

Exact mode keeps every coordinate, weight and event time as a ``gmpy2.mpq``
rational; all event times are roots of linear equations so nothing is ever
rounded.  Float mode uses plain floats and a comparison tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

INF = float("inf")


@dataclass(frozen=True)
class Arithmetic:
    exact: bool = True
    eps: float = 1e-9

    @property
    def name(self) -> str:
        return "exact" if self.exact else "float"

    def num(self, value):
        """Coerce an input number (int, float, str, Fraction) to this mode."""
        if self.exact:
            if isinstance(value, str):
                return mpq(value.strip())
            if isinstance(value, Fraction):
                return mpq(value.numerator, value.denominator)
            if isinstance(value, float):
                # float -> shortest decimal repr, not the binary expansion
                return mpq(repr(value))
            return mpq(value)
        if isinstance(value, str):
            s = value.strip()
            if "/" in s:
                n, d = s.split("/")
                return int(n) / int(d)
            return float(s)
        return float(value)

    def eq(self, a, b) -> bool:
        if self.exact or a == b:
            return a == b
        return abs(a - b) <= self.eps * max(1.0, abs(a), abs(b))

    def le(self, a, b) -> bool:
        return a <= b or self.eq(a, b)

    def fmt(self, value) -> str:
        """Serialize a number: reduced ``p/q`` in exact mode, decimal otherwise."""
        if value == INF:
            return "inf"
        if self.exact:
            q = mpq(value)
            return f"{q.numerator}/{q.denominator}"
        return repr(float(value))


EXACT = Arithmetic(True)
FLOAT = Arithmetic(False)
