"""The question mark function, its extension to [0, inf], and tree estimators.

On rationals both functions take exact dyadic values.  qmark maps [0,1]
onto the dyadics by rewriting the continued fraction expansion as binary
run lengths; rho does the same on the whole nonnegative ray via the
{L,R} path code, and the two are linked by rho = qmark(x/(1+x)).

The module also carries the estimators built on tree levels: the
distribution counts whose limit is rho, Stieltjes means against the
rho measure, and their Fourier coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate, groupby
from math import fsum
from typing import Callable, Sequence

import numpy as np

from . import trees
from .accum import fsum_array
from .core import (
    INF,
    ONE,
    ZERO,
    CapExceeded,
    DomainError,
    ExtRat,
    canonicalize_cf,
    cf_from_rat,
    rat_from_cf,
)
from .trees import TreeSpec

EXP_CAP = 1 << 16
ESTIMATE_CAP = trees.ARRAY_CAP

_SB = TreeSpec("sb")


class Dyadic:
    """Exact dyadic rational num/2^exp, kept with num odd or exp = 0."""

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0, cap: int = EXP_CAP):
        if not isinstance(num, int) or not isinstance(exp, int):
            raise TypeError("Dyadic takes integers")
        if exp < 0:
            raise DomainError("negative exponent")
        if num == 0:
            exp = 0
        elif num % 2 == 0:
            twos = (num & -num).bit_length() - 1
            drop = min(twos, exp)
            num >>= drop
            exp -= drop
        if exp > cap:
            raise CapExceeded(f"dyadic exponent {exp} above the cap {cap}")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, name, value):
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def from_fraction(cls, f) -> "Dyadic":
        f = Fraction(f)
        exp = f.denominator.bit_length() - 1
        if 1 << exp != f.denominator:
            raise DomainError(f"{f} is not dyadic")
        return cls(f.numerator, exp)

    @classmethod
    def from_string(cls, s: str) -> "Dyadic":
        s = s.strip()
        if "/" not in s:
            return cls(int(s))
        top, bottom = s.split("/", 1)
        if bottom.startswith("2^"):
            return cls(int(top), int(bottom[2:]))
        return cls.from_fraction(Fraction(int(top), int(bottom)))

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def __float__(self) -> float:
        return float(self.as_fraction())

    def __str__(self) -> str:
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/2^{self.exp}"

    def __repr__(self) -> str:
        return f"Dyadic({self.num}, {self.exp})"

    def __hash__(self):
        return hash(self.as_fraction())

    def _pair(self, other):
        if isinstance(other, Dyadic):
            return other.num, other.exp
        if isinstance(other, int):
            return other, 0
        return NotImplemented

    def __eq__(self, other):
        po = self._pair(other)
        if po is NotImplemented:
            return NotImplemented
        return (self.num, self.exp) == po

    def _cmp(self, other):
        po = self._pair(other)
        if po is NotImplemented:
            return NotImplemented
        on, oe = po
        m = max(self.exp, oe)
        a = self.num << (m - self.exp)
        b = on << (m - oe)
        return (a > b) - (a < b)

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def _combine(self, other, sign):
        po = self._pair(other)
        if po is NotImplemented:
            return NotImplemented
        on, oe = po
        m = max(self.exp, oe)
        return Dyadic((self.num << (m - self.exp)) + sign * (on << (m - oe)), m)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        r = self._combine(other, -1)
        return NotImplemented if r is NotImplemented else Dyadic(-r.num, r.exp)

    def __mul__(self, other):
        po = self._pair(other)
        if po is NotImplemented:
            return NotImplemented
        return Dyadic(self.num * po[0], self.exp + po[1])

    __rmul__ = __mul__

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def half(self, n: int = 1) -> "Dyadic":
        return Dyadic(self.num, self.exp + n)


DY_ZERO = Dyadic(0)
DY_ONE = Dyadic(1)


@dataclass(frozen=True)
class BinaryWord:
    """Fractional binary digits plus the constant tail they end in."""

    bits: tuple[int, ...]
    tail: str  # "zeros" or "ones"

    def __post_init__(self):
        if self.tail not in ("zeros", "ones"):
            raise DomainError("tail must be 'zeros' or 'ones'")
        if any(b not in (0, 1) for b in self.bits):
            raise DomainError("bits must be 0 or 1")

    def __str__(self) -> str:
        body = "".join(str(b) for b in self.bits)
        digit = "0" if self.tail == "zeros" else "1"
        return f"0.{body}({digit})^inf"

    def value(self) -> Dyadic:
        n = int("".join(str(b) for b in self.bits), 2) if self.bits else 0
        if self.tail == "ones":
            n += 1
        return Dyadic(n, len(self.bits))


def binary_word(d: Dyadic, tail: str = "zeros") -> BinaryWord:
    """One of the two binary readings of a dyadic in [0, 1]."""
    _check_unit(d)
    if tail == "zeros":
        if d == DY_ONE:
            raise DomainError("1 has no terminating fractional expansion")
        return BinaryWord(_bit_tuple(d.num, d.exp), "zeros")
    if d.num == 0:
        raise DomainError("0 has no eventually-ones expansion")
    return BinaryWord(_bit_tuple(d.num - 1, d.exp), "ones")


def _bit_tuple(num: int, width: int) -> tuple[int, ...]:
    return tuple(int(c) for c in format(num, f"0{width}b")) if width else ()


def _check_unit(d: Dyadic):
    if not isinstance(d, Dyadic):
        raise TypeError("expected a Dyadic")
    if d.num < 0 or d > DY_ONE:
        raise DomainError("value must lie in [0, 1]")


def rho(x: ExtRat) -> Dyadic:
    """Binary reading of the {L,R} path code; exact on all of [0, inf]."""
    if x.is_infinite:
        return DY_ONE
    cf = cf_from_rat(x)
    if cf == [0]:
        return DY_ZERO
    sums = list(accumulate(cf))
    total = sums[-1]
    if total > EXP_CAP:
        raise CapExceeded(f"needs {total} bits, above the cap {EXP_CAP}")
    num = (1 << total) - sum(
        (-1 if k % 2 else 1) << (total - s) for k, s in enumerate(sums)
    )
    return Dyadic(num, total)


def qmark(x: ExtRat) -> Dyadic:
    """Question mark function on [0, 1], by its own alternating series."""
    if x.is_infinite or x > 1:
        raise DomainError("the question mark lives on [0, 1]")
    if x.is_zero:
        return DY_ZERO
    if x == ONE:
        return DY_ONE
    cf = cf_from_rat(x)  # [0; a1, ..., an]
    sums = list(accumulate(cf[1:]))
    total = sums[-1]
    if total > EXP_CAP + 1:
        raise CapExceeded(f"needs {total - 1} bits, above the cap {EXP_CAP}")
    num = sum(
        (1 if k % 2 == 0 else -1) << (total + 1 - t) for k, t in enumerate(sums)
    )
    return Dyadic(num, total)


def _cf_from_runs(runs: list[int]) -> ExtRat:
    return rat_from_cf(canonicalize_cf(runs))


def _rho_runs(bits: tuple[int, ...]) -> list[int]:
    # runs alternate starting with the count of leading ones
    runs = [0] if bits and bits[0] == 0 else []
    runs.extend(sum(1 for _ in g) for _, g in groupby(bits))
    return runs


def _qmark_runs(bits: tuple[int, ...]) -> list[int]:
    # first run of zeros has an implicit extra zero in front
    groups = [(d, sum(1 for _ in g)) for d, g in groupby(bits)]
    if groups and groups[0][0] == 0:
        lead, groups = groups[0][1], groups[1:]
    else:
        lead = 0
    return [0, lead + 1] + [n for _, n in groups]


def rho_inv(d: Dyadic) -> ExtRat:
    """The rational with rho(x) = d; both binary readings are cross-checked."""
    _check_unit(d)
    if d.num == 0:
        return ZERO
    if d == DY_ONE:
        return INF
    a = _cf_from_runs(_rho_runs(binary_word(d, "zeros").bits))
    b = _cf_from_runs(_rho_runs(binary_word(d, "ones").bits))
    if a != b:
        raise RuntimeError(f"binary readings of {d} disagree: {a} vs {b}")
    return a


def qmark_inv(d: Dyadic) -> ExtRat:
    """The rational with qmark(x) = d; both binary readings are cross-checked."""
    _check_unit(d)
    if d.num == 0:
        return ZERO
    if d == DY_ONE:
        return ONE
    a = _cf_from_runs(_qmark_runs(binary_word(d, "zeros").bits))
    b = _cf_from_runs(_qmark_runs(binary_word(d, "ones").bits))
    if a != b:
        raise RuntimeError(f"binary readings of {d} disagree: {a} vs {b}")
    return a


def qmark_enclosure(prefix: Sequence[int]) -> tuple[Dyadic, Dyadic]:
    """Exact bounds on the value at every number whose expansion starts so.

    The prefix [a0; a1, ..., an] need not end canonically.  The bounds
    are the images of the last convergent and its mediant with the one
    before; prefixes inside [0, 1] are measured with qmark, the rest
    with rho.
    """
    if not prefix:
        raise DomainError("empty prefix")
    if prefix[0] < 0 or any(a < 1 for a in prefix[1:]):
        raise DomainError("prefix terms must be a0 >= 0, ai >= 1")
    pp, qq = 1, 0  # convergent before the first
    p, q = prefix[0], 1
    for a in prefix[1:]:
        p, pp = a * p + pp, p
        q, qq = a * q + qq, q
    ends = sorted([ExtRat(p, q), ExtRat(p + pp, q + qq)])
    value = qmark if prefix[0] == 0 else rho
    return value(ends[0]), value(ends[1])


def distribution_estimate(spec: TreeSpec, k: int, x: ExtRat) -> Fraction:
    """Share of the first k levels lying at or below x, out of 2^k."""
    if k < 1:
        raise DomainError("levels start at 1")
    if k > ESTIMATE_CAP:
        raise CapExceeded(f"distribution estimates stop at {ESTIMATE_CAP}")
    count = 0
    if x.is_infinite:
        count = (1 << k) - 1
    elif max(x.num, x.den) < 1 << 36:
        xn, xd = x.num, x.den
        for j in range(1, k + 1):
            p, q = trees.level_arrays(spec, j)
            count += int(np.count_nonzero(p * xd <= xn * q))
    else:
        for j in range(1, k + 1):
            count += sum(1 for v in trees.level(spec, j) if v <= x)
    return Fraction(count, 1 << k)


def stieltjes_mean(
    f: Callable,
    k: int,
    spec: TreeSpec = _SB,
    vectorized: bool = False,
):
    """Mean of f over the first k levels, normalized by 2^k.

    The plain path hands f exact rationals one at a time; with
    vectorized=True, f is called once per level on a float64 array.
    Either way the accumulation is compensated, so the result does not
    depend on how the work is split.
    """
    if k < 1:
        raise DomainError("levels start at 1")
    if k > ESTIMATE_CAP:
        raise CapExceeded(f"stieltjes means stop at {ESTIMATE_CAP}")
    re_parts: list[float] = []
    im_parts: list[float] = []
    if vectorized:
        for j in range(1, k + 1):
            vals = np.asarray(f(trees.level_floats(spec, j)))
            re_parts.append(fsum_array(vals.real))
            im_parts.append(fsum_array(vals.imag) if np.iscomplexobj(vals) else 0.0)
    else:
        for j in range(1, k + 1):
            vals = [complex(f(v)) for v in trees.level(spec, j)]
            re_parts.append(fsum(v.real for v in vals))
            im_parts.append(fsum(v.imag for v in vals))
    scale = float(2 ** -k)
    re = fsum(re_parts) * scale
    im = fsum(im_parts) * scale
    return complex(re, im) if im else re


def fourier_tree_mean(n: int, k: int, spec: TreeSpec = _SB) -> complex:
    """Tree estimate of the n-th Fourier coefficient of the limit measure."""
    two_pi_n = 2.0 * np.pi * n

    def osc(vals: np.ndarray) -> np.ndarray:
        return np.exp(1j * two_pi_n * vals)

    out = stieltjes_mean(osc, k, spec, vectorized=True)
    return complex(out)
