"""Exact Laurent polynomials in the deformation parameter ``q``.

A :class:`QLaurent` is a finite map from integer exponents to rationals.
Zero is the empty map, and no stored coefficient is ever zero.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Mapping, Union

Scalar = Union["QLaurent", int, Fraction]


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class QLaurent:
    """Immutable Laurent polynomial in ``q`` with rational coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c: dict[int, Fraction] = {}
        if coeffs:
            for k, v in coeffs.items():
                v = _to_fraction(v)
                if v:
                    c[int(k)] = c.get(int(k), 0) + v
            c = {k: v for k, v in c.items() if v}
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "QLaurent":
        obj = object.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, value) -> "QLaurent":
        v = _to_fraction(value)
        return cls._raw({0: v} if v else {})

    @classmethod
    def monomial(cls, exponent: int, value=1) -> "QLaurent":
        v = _to_fraction(value)
        return cls._raw({int(exponent): v} if v else {})

    @classmethod
    def coerce(cls, value) -> "QLaurent":
        if isinstance(value, QLaurent):
            return value
        return cls.constant(value)

    # -- inspection -----------------------------------------------------

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_constant(self) -> bool:
        return not self._c or (len(self._c) == 1 and 0 in self._c)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._c.get(0, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of zero")
        return max(self._c)

    def valuation(self) -> int:
        if not self._c:
            raise ValueError("valuation of zero")
        return min(self._c)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, QLaurent):
            try:
                other = QLaurent.constant(other)
            except TypeError:
                return NotImplemented
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k)
            if s is None:
                c[k] = v
            else:
                s = s + v
                if s:
                    c[k] = s
                else:
                    del c[k]
        return QLaurent._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, QLaurent):
            try:
                other = QLaurent.constant(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QLaurent):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return ZERO
                return QLaurent._raw({k: v * other for k, v in self._c.items()})
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return ZERO
        if len(a) == 1 and len(b) == 1:
            (ka, va), = a.items()
            (kb, vb), = b.items()
            return QLaurent._raw({ka + kb: va * vb})
        c: dict[int, Fraction] = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                k = ka + kb
                c[k] = c.get(k, 0) + va * vb
        return QLaurent._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def inverse(self) -> "QLaurent":
        """Inverse of a nonzero monomial ``c q^k``."""
        if len(self._c) != 1:
            raise ZeroDivisionError(f"{self} is not an invertible Laurent monomial")
        (k, v), = self._c.items()
        return QLaurent._raw({-k: 1 / v})

    def __truediv__(self, other):
        other = QLaurent.coerce(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "QLaurent":
        # q is real and the coefficients are rational
        return self

    # -- evaluation -----------------------------------------------------

    def evaluate(self, q0):
        """Evaluate at ``q0``; exact for rational ``q0``, floating otherwise."""
        if isinstance(q0, (int, Fraction)):
            q0 = Fraction(q0)
            if not q0 and any(k < 0 for k in self._c):
                raise ZeroDivisionError("negative power of q at q = 0")
            return sum((v * q0 ** k for k, v in self._c.items()), Fraction(0))
        return sum(float(v) * q0 ** k for k, v in self._c.items()) if self._c else 0.0

    __call__ = evaluate

    # -- comparison -----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, QLaurent):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"QLaurent({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k, v in sorted(self._c.items()):
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if k == 0:
                body = str(mag)
            else:
                qpart = "q" if k == 1 else f"q^{k}"
                body = qpart if mag == 1 else f"{mag}*{qpart}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


ZERO = QLaurent._raw({})
ONE = QLaurent._raw({0: Fraction(1)})
Q = QLaurent._raw({1: Fraction(1)})
