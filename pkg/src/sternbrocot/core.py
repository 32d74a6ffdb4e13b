"""Exact arithmetic over the nonnegative rationals plus a point at infinity.

Everything in this package runs on reduced fractions p/q with p, q >= 0,
where 0/1 is zero and 1/0 is the point at infinity.  The stdlib Fraction
cannot hold 1/0, hence ExtRat.  No floating point is used here; callers
convert at the last step when they need numerics.

Continued fractions are the canonical finite expansions
[a0; a1, ..., an] with a0 >= 0, ai >= 1 for i >= 1 and an > 1 when n >= 1,
so every positive rational has exactly one expansion ([0] stands for zero).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, inf


class DomainError(ValueError):
    """Argument lies outside an operation's documented domain."""


class CapExceeded(ValueError):
    """A size cap would be exceeded; pass a larger cap to proceed anyway."""


class ExtRat:
    """Reduced fraction p/q with p, q >= 0; 1/0 represents infinity."""

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        if not isinstance(num, int) or not isinstance(den, int):
            raise TypeError("ExtRat takes integers")
        if num < 0 or den < 0:
            raise DomainError("negative fractions are outside the model")
        if num == 0 and den == 0:
            raise DomainError("0/0 is not a point")
        g = gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: int, den: int) -> "ExtRat":
        # trusted constructor: caller guarantees gcd(num, den) == 1
        self = object.__new__(cls)
        self.num = num
        self.den = den
        return self

    @classmethod
    def from_string(cls, text: str) -> "ExtRat":
        """Parse "p/q" (or a bare integer "n")."""
        s = text.strip()
        if "/" in s:
            a, b = s.split("/", 1)
            return cls(int(a), int(b))
        return cls(int(s))

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    @property
    def is_zero(self) -> bool:
        return self.num == 0

    def as_fraction(self) -> Fraction:
        if self.den == 0:
            raise DomainError("infinity has no Fraction value")
        return Fraction(self.num, self.den)

    def reciprocal(self) -> "ExtRat":
        return ExtRat._raw(self.den, self.num)

    def floor(self) -> int:
        if self.den == 0:
            raise DomainError("floor of infinity")
        return self.num // self.den

    def frac_part(self) -> "ExtRat":
        if self.den == 0:
            raise DomainError("fractional part of infinity")
        return ExtRat._raw(self.num % self.den, self.den)

    def _pair(self, other):
        if isinstance(other, ExtRat):
            return other.num, other.den
        if isinstance(other, int):
            return other, 1
        if isinstance(other, Fraction):
            return other.numerator, other.denominator
        return None

    def __eq__(self, other):
        po = self._pair(other)
        if po is None:
            return NotImplemented
        return self.num * po[1] == po[0] * self.den

    def __lt__(self, other):
        po = self._pair(other)
        if po is None:
            return NotImplemented
        # cross multiplication covers 1/0 as well: 1/0 compares above everything
        return self.num * po[1] < po[0] * self.den

    def __le__(self, other):
        po = self._pair(other)
        if po is None:
            return NotImplemented
        return self.num * po[1] <= po[0] * self.den

    def __gt__(self, other):
        po = self._pair(other)
        if po is None:
            return NotImplemented
        return self.num * po[1] > po[0] * self.den

    def __ge__(self, other):
        po = self._pair(other)
        if po is None:
            return NotImplemented
        return self.num * po[1] >= po[0] * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return self.num != 0

    def __float__(self):
        if self.den == 0:
            return inf
        return self.num / self.den

    def _finite(self, what: str) -> None:
        if self.den == 0:
            raise DomainError(f"{what} is not defined at infinity")

    def __add__(self, other):
        po = self._pair(other)
        if po is None:
            return NotImplemented
        self._finite("addition")
        if po[1] == 0:
            raise DomainError("addition is not defined at infinity")
        return ExtRat(self.num * po[1] + po[0] * self.den, self.den * po[1])

    __radd__ = __add__

    def __sub__(self, other):
        po = self._pair(other)
        if po is None:
            return NotImplemented
        self._finite("subtraction")
        if po[1] == 0:
            raise DomainError("subtraction is not defined at infinity")
        num = self.num * po[1] - po[0] * self.den
        if num < 0:
            raise DomainError("subtraction left the nonnegative rationals")
        return ExtRat(num, self.den * po[1])

    def __mul__(self, other):
        po = self._pair(other)
        if po is None:
            return NotImplemented
        self._finite("multiplication")
        if po[1] == 0:
            raise DomainError("multiplication is not defined at infinity")
        return ExtRat(self.num * po[0], self.den * po[1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        po = self._pair(other)
        if po is None:
            return NotImplemented
        self._finite("division")
        if po[1] == 0 or po[0] == 0:
            raise DomainError("division by zero or infinity")
        return ExtRat(self.num * po[1], self.den * po[0])

    def __str__(self):
        return f"{self.num}/{self.den}"

    def __repr__(self):
        return f"ExtRat({self.num}, {self.den})"


ZERO = ExtRat._raw(0, 1)
ONE = ExtRat._raw(1, 1)
INF = ExtRat._raw(1, 0)


def mediant(a: ExtRat, b: ExtRat) -> ExtRat:
    """Mediant (pa+pb)/(qa+qb); reduced, which is a no-op for unimodular pairs."""
    return ExtRat(a.num + b.num, a.den + b.den)


def cf_from_rat(x: ExtRat) -> list[int]:
    """Canonical continued fraction of a finite x; [0] for zero."""
    if x.is_infinite:
        raise DomainError("infinity has no continued fraction")
    if x.is_zero:
        return [0]
    terms = []
    p, q = x.num, x.den
    while q:
        a, r = divmod(p, q)
        terms.append(a)
        p, q = q, r
    # Euclid already yields the canonical form (last quotient > 1 unless n = 0)
    return terms


def rat_from_cf(terms: list[int]) -> ExtRat:
    """Value of a canonical continued fraction."""
    _check_canonical(terms)
    p, q = 1, 0
    for a in reversed(terms):
        p, q = a * p + q, p
    return ExtRat(p, q)


def _check_canonical(terms) -> None:
    if not terms:
        raise DomainError("empty continued fraction")
    if any(not isinstance(a, int) for a in terms):
        raise DomainError("continued fraction terms must be integers")
    if terms[0] < 0:
        raise DomainError("a0 must be nonnegative")
    if any(a < 1 for a in terms[1:]):
        raise DomainError("partial quotients must be positive")
    if len(terms) > 1 and terms[-1] == 1:
        raise DomainError("canonical expansions do not end in 1")


def canonicalize_cf(terms: list[int]) -> list[int]:
    """Normalize a loose expansion (zeros allowed) to the canonical one.

    Uses [..., a, 0, b, ...] = [..., a+b, ...], the tail identities
    [..., a, 0] = [...] and [..., a, 1] = [..., a+1].  The input must
    still denote a finite nonnegative rational.
    """
    t = list(terms)
    if not t:
        raise DomainError("empty continued fraction")
    while True:
        # internal zero: merge its neighbours
        idx = next((i for i in range(1, len(t) - 1) if t[i] == 0), None)
        if idx is not None:
            t[idx - 1: idx + 2] = [t[idx - 1] + t[idx + 1]]
            continue
        if len(t) > 1 and t[-1] == 0:
            # [..., a, 0] = [...]; a trailing 0 right after a0 would mean infinity
            if len(t) == 2:
                raise DomainError("expansion collapses to infinity")
            t = t[:-2]
            continue
        if len(t) > 1 and t[-1] == 1:
            t[-2:] = [t[-2] + 1]
            continue
        break
    _check_canonical(t)
    return t


def depth(x: ExtRat) -> int:
    """Sum of the partial quotients; 0 for the ancestors 0/1 and 1/0."""
    if x.is_infinite or x.is_zero:
        return 0
    return sum(cf_from_rat(x))


def rank(x: ExtRat) -> int:
    """Level in the Farey tree for x in (0,1); 0 for the ancestors 0 and 1."""
    if x.is_infinite or x > 1:
        raise DomainError("rank is defined on [0, 1]")
    if x.is_zero or x == 1:
        return 0
    return depth(x) - 1


def complement_cf(terms: list[int]) -> list[int]:
    """Continued fraction of 1-x from that of x in (0,1).

    [0; 1+a2, a3, ...] when a1 = 1, else [0; 1, a1-1, a2, ...].
    """
    _check_canonical(terms)
    if terms[0] != 0 or len(terms) < 2:
        raise DomainError("complement wants x in (0,1)")
    if terms[1] == 1:
        out = [0, terms[2] + 1] + terms[3:]
    else:
        out = [0, 1, terms[1] - 1] + terms[2:]
    return canonicalize_cf(out)


def phi(x: ExtRat) -> ExtRat:
    """x / (x+1); sends 0..infinity monotonically onto [0, 1]."""
    return ExtRat._raw(x.num, x.num + x.den)


def phi_inv(y: ExtRat) -> ExtRat:
    """Inverse of phi on [0, 1]; phi_inv(1) is infinity."""
    if y.is_infinite or y.num > y.den:
        raise DomainError("phi_inv is defined on [0, 1]")
    return ExtRat._raw(y.num, y.den - y.num)


def parse_cf(text: str) -> list[int]:
    """Parse "[a0;a1,...,an]" (spaces tolerated)."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise DomainError(f"bad continued fraction literal: {text!r}")
    body = s[1:-1].strip()
    if ";" in body:
        head, rest = body.split(";", 1)
        parts = [head] + ([p for p in rest.split(",")] if rest.strip() else [])
    else:
        parts = [body]
    try:
        return [int(p.strip()) for p in parts]
    except ValueError as exc:
        raise DomainError(f"bad continued fraction literal: {text!r}") from exc


def format_cf(terms: list[int]) -> str:
    if len(terms) == 1:
        return f"[{terms[0]}]"
    return f"[{terms[0]};{','.join(str(a) for a in terms[1:])}]"
