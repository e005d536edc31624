"""Sparse Laurent polynomials in q with integer coefficients."""

from __future__ import annotations

import re
from typing import Iterable, Mapping

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(q(?:\^(-?\d+))?)?")


class LaurentPolynomial:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c: dict[int, int] = {}
        for e, v in (coeffs or {}).items():
            if not isinstance(e, int) or not isinstance(v, int):
                raise TypeError("exponents and coefficients must be integers")
            if v:
                c[e] = c.get(e, 0) + v
                if not c[e]:
                    del c[e]
        self._c = dict(sorted(c.items()))

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPolynomial":
        return cls({exp: coeff})

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "LaurentPolynomial":
        c: dict[int, int] = {}
        for e in exps:
            c[e] = c.get(e, 0) + 1
        return cls(c)

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def min_exponent(self) -> int | None:
        return next(iter(self._c), None)

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPolynomial(c)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial({e: -v for e, v in self._c.items()})

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def __mul__(self, other: "LaurentPolynomial | int") -> "LaurentPolynomial":
        if isinstance(other, int):
            return LaurentPolynomial({e: v * other for e, v in self._c.items()})
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentPolynomial(c)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by q^k."""
        return LaurentPolynomial({e + k: v for e, v in self._c.items()})

    def invert(self) -> "LaurentPolynomial":
        """Substitute q -> q^{-1}."""
        return LaurentPolynomial({-e: v for e, v in self._c.items()})

    def __call__(self, q):
        return sum(v * q**e for e, v in self._c.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPolynomial({0: other})
        return isinstance(other, LaurentPolynomial) and self._c == other._c

    def __hash__(self) -> int:
        return hash(tuple(self._c.items()))

    def to_json(self) -> dict[str, int]:
        return {str(e): v for e, v in self._c.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "LaurentPolynomial":
        return cls({int(e): int(v) for e, v in data.items()})

    def __str__(self) -> str:
        if not self._c:
            return "0"
        out = []
        for e, v in self._c.items():
            mag = abs(v)
            if e == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("q" if e == 1 else f"q^{e}")
            if not out:
                out.append(("-" if v < 0 else "") + body)
            else:
                out.append((" - " if v < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"LaurentPolynomial({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPolynomial":
        s = text.replace(" ", "")
        if s == "0":
            return cls()
        c: dict[int, int] = {}
        pos = 0
        while pos < len(s):
            m = _TERM.match(s, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"cannot parse {text!r} at {pos}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) is not None else 1
            else:
                exp = 0
            c[exp] = c.get(exp, 0) + sign * coeff
            pos = m.end()
        return cls(c)
