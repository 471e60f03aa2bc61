"""Fixed-precision p-adic numbers with explicit precision tracking.

A nonzero value is stored as ``p**v * unit`` where ``unit`` is an integer
prime to ``p`` known modulo ``p**prec`` (``prec`` relative digits, at most
the cap ``N``).  Two special shapes exist:

* the exact zero, ``v = inf``;
* a value known only modulo ``p**v`` (written ``O(p^v)``), ``prec = 0``.

Subtraction of close values and division by non-units lower the absolute
precision ``v + prec``; the loss is recorded, never hidden.
"""

from __future__ import annotations

import math
from fractions import Fraction

from cremona.errors import PrecisionExhausted

INF = math.inf


def valuation_int(n: int, p: int) -> int:
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation_rational(x, p: int):
    x = Fraction(x)
    if x == 0:
        return INF
    return valuation_int(x.numerator, p) - valuation_int(x.denominator, p)


class PadicNum:
    __slots__ = ("p", "N", "v", "unit", "prec")

    def __init__(self, p: int, N: int, v, unit: int, prec: int):
        if p < 2 or N < 1:
            raise ValueError("need p >= 2 and N >= 1")
        self.p = p
        self.N = N
        if v == INF:
            self.v, self.unit, self.prec = INF, 0, N
            return
        prec = min(prec, N)
        if prec <= 0:
            self.v, self.unit, self.prec = int(v), 0, 0
            return
        unit %= p**prec
        if unit % p == 0:
            raise ValueError("unit part must be prime to p")
        self.v, self.unit, self.prec = int(v), unit, prec

    # construction -----------------------------------------------------------

    @classmethod
    def zero(cls, p: int, N: int) -> PadicNum:
        return cls(p, N, INF, 0, N)

    @classmethod
    def big_oh(cls, p: int, N: int, absprec: int) -> PadicNum:
        """The value ``O(p^absprec)``: zero modulo ``p**absprec``, nothing more."""
        return cls(p, N, absprec, 0, 0)

    @classmethod
    def from_rational(cls, x, p: int, N: int) -> PadicNum:
        x = Fraction(x)
        if x == 0:
            return cls.zero(p, N)
        a = valuation_int(x.numerator, p)
        b = valuation_int(x.denominator, p)
        num = x.numerator // p**a
        den = x.denominator // p**b
        mod = p**N
        return cls(p, N, a - b, num * pow(den, -1, mod) % mod, N)

    def _coerce(self, other) -> PadicNum:
        if isinstance(other, PadicNum):
            if other.p != self.p:
                raise ValueError("p-adic numbers over different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNum.from_rational(other, self.p, self.N)
        return NotImplemented

    # inspection ------------------------------------------------------------

    @property
    def absprec(self):
        """Absolute precision: the value is known modulo ``p**absprec``."""
        return INF if self.v == INF else self.v + self.prec

    @property
    def valuation(self):
        return self.v

    def is_exact_zero(self) -> bool:
        return self.v == INF

    def is_zero(self) -> bool:
        # zero up to the stated precision
        return self.v == INF or self.prec == 0

    def is_unit(self) -> bool:
        return self.prec > 0 and self.v == 0

    def norm(self) -> Fraction:
        """``|x| = p**(-v)`` as an exact rational."""
        if self.v == INF:
            return Fraction(0)
        if self.prec == 0:
            raise PrecisionExhausted(f"|O({self.p}^{self.v})| is undetermined")
        return Fraction(self.p) ** (-self.v)

    def digits(self) -> list[int]:
        out, u = [], self.unit
        for _ in range(self.prec):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    def to_fraction(self) -> Fraction:
        """The rational ``p**v * unit`` (a representative, not the full value)."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.v

    def residue(self, k: int) -> int:
        """The integer ``x mod p**k`` for integral ``x`` known at least that far."""
        if self.v == INF:
            return 0
        if self.absprec < k:
            raise PrecisionExhausted(f"value known only modulo {self.p}^{self.absprec}")
        if self.v < 0:
            raise ValueError("not an integral p-adic number")
        return (self.p**self.v * self.unit) % self.p**k

    # arithmetic -------------------------------------------------------------

    def __neg__(self) -> PadicNum:
        if self.is_zero():
            return self
        return PadicNum(self.p, self.N, self.v, -self.unit, self.prec)

    def __pos__(self) -> PadicNum:
        return self

    def __add__(self, other) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.v == INF:
            return self
        if self.v == INF:
            return other
        p = self.p
        a = min(self.absprec, other.absprec)
        v0 = min(self.v, other.v)
        if a <= v0:
            return PadicNum.big_oh(p, self.N, a)
        mod = p ** (a - v0)
        r = (self.unit * p ** (self.v - v0) + other.unit * p ** (other.v - v0)) % mod
        if r == 0:
            return PadicNum.big_oh(p, self.N, a)
        k = valuation_int(r, p)
        return PadicNum(p, self.N, v0 + k, r // p**k, a - v0 - k)

    __radd__ = __add__

    def __sub__(self, other) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.v == INF or other.v == INF:
            return PadicNum.zero(self.p, self.N)
        v = self.v + other.v
        prec = min(self.prec, other.prec)
        if prec == 0:
            return PadicNum.big_oh(self.p, self.N, v)
        return PadicNum(self.p, self.N, v, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.v == INF:
            raise ZeroDivisionError("p-adic division by exact zero")
        if other.prec == 0:
            raise PrecisionExhausted("division by a value known only modulo a power of p")
        if self.v == INF:
            return self
        v = self.v - other.v
        prec = min(self.prec, other.prec)
        if prec == 0:
            return PadicNum.big_oh(self.p, self.N, v)
        mod = self.p**prec
        return PadicNum(self.p, self.N, v, self.unit * pow(other.unit, -1, mod), prec)

    def __rtruediv__(self, other) -> PadicNum:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k: int) -> PadicNum:
        if k < 0:
            return PadicNum.from_rational(1, self.p, self.N) / self**(-k)
        out = PadicNum.from_rational(1, self.p, self.N)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = self._coerce(other) if not isinstance(other, float) else NotImplemented
        if other is NotImplemented:
            return False
        return (self - other).is_zero()

    __hash__ = None

    # text -----------------------------------------------------------------

    def __str__(self) -> str:
        p = self.p
        if self.v == INF:
            return "0"
        if self.prec == 0:
            return f"O({p}^{self.v})"
        terms = []
        for i, d in enumerate(self.digits()):
            if d == 0:
                continue
            if i == 0:
                terms.append(f"{d}")
            elif i == 1:
                terms.append(f"{d}*{p}")
            else:
                terms.append(f"{d}*{p}^{i}")
        if self.prec < self.N:
            terms.append(f"O({p}^{self.prec})")
        body = " + ".join(terms)
        return f"{p}^{self.v} * ({body})"

    def __repr__(self) -> str:
        return f"PadicNum({self.p}, N={self.N}: {self})"
