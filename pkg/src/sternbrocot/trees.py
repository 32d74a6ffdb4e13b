"""The six binary trees of rationals and their level iterators.

Kinds: "sb" (root 1/1, ancestors 0/1 and 1/0, children by mediants),
"farey" (root 1/2, ancestors 0/1 and 1/1) and "dyadic" (root 1/2,
children (2p-1)/2q and (2p+1)/2q).  Each kind also comes in a permuted
variant, the image of the plain tree under word reversal; its rows are
generated directly by the descendant rules

    sb:      p/q -> p/(p+q), (p+q)/q
    farey:   p/q -> p/(p+q), q/(2q-p)
    dyadic:  p/q -> p/(2q), (p+q)/(2q)

Levels are streamed left to right in depth-first order, so level 24 never
needs the whole tree in memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import CapExceeded, DomainError, ExtRat, mediant
from . import coding

KINDS = ("sb", "farey", "dyadic")
LEVEL_CAP = 24
ARRAY_CAP = 20


@dataclass(frozen=True)
class TreeSpec:
    kind: str
    permuted: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown tree kind {self.kind!r}")


# Internal node state is a plain int tuple.  Mediant kinds carry the two
# parents (pl, ql, pr, qr); the value is their mediant.  The other kinds
# carry the value (p, q) itself.


def _plain_state(kind):
    if kind == "sb":
        return (0, 1, 1, 0)
    if kind == "farey":
        return (0, 1, 1, 1)
    return (1, 2)


def _plain_children(kind, s):
    if kind == "dyadic":
        p, q = s
        return (2 * p - 1, 2 * q), (2 * p + 1, 2 * q)
    pl, ql, pr, qr = s
    pm, qm = pl + pr, ql + qr
    return (pl, ql, pm, qm), (pm, qm, pr, qr)


def _plain_value(kind, s):
    if kind == "dyadic":
        return ExtRat._raw(s[0], s[1])
    return ExtRat._raw(s[0] + s[2], s[1] + s[3])


def _perm_state(kind):
    return (1, 1) if kind == "sb" else (1, 2)


def _perm_children(kind, s):
    p, q = s
    if kind == "sb":
        return (p, p + q), (p + q, q)
    if kind == "farey":
        return (p, p + q), (q, 2 * q - p)
    return (p, 2 * q), (p + q, 2 * q)


def _perm_value(kind, s):
    return ExtRat._raw(s[0], s[1])


def level(spec: TreeSpec, k: int, cap: int = LEVEL_CAP) -> Iterator[ExtRat]:
    """Yield level k (the root is level 1) left to right."""
    if k < 1:
        raise DomainError("levels start at 1")
    if k > cap:
        raise CapExceeded(f"level {k} above the cap {cap}")
    if spec.permuted:
        root, children, value = _perm_state(spec.kind), _perm_children, _perm_value
    else:
        root, children, value = _plain_state(spec.kind), _plain_children, _plain_value
    stack = [(1, root)]
    kind = spec.kind
    while stack:
        d, s = stack.pop()
        if d == k:
            yield value(kind, s)
        else:
            left, right = children(kind, s)
            stack.append((d + 1, right))
            stack.append((d + 1, left))


def level_chunk(spec: TreeSpec, k: int, start: int, count: int,
                cap: int = LEVEL_CAP) -> Iterator[ExtRat]:
    """Yield entries [start, start+count) of level k (0-based positions).

    Seeks to the start position along its root path, so chunks can be
    produced independently and in parallel; concatenating chunks in
    order reproduces level(spec, k) exactly.
    """
    if k < 1:
        raise DomainError("levels start at 1")
    if k > cap:
        raise CapExceeded(f"level {k} above the cap {cap}")
    width = 1 << (k - 1)
    if not (0 <= start <= width):
        raise DomainError("chunk start out of range")
    count = min(count, width - start)
    if count <= 0:
        return
    if spec.permuted:
        root, children, value = _perm_state(spec.kind), _perm_children, _perm_value
    else:
        root, children, value = _plain_state(spec.kind), _plain_children, _plain_value
    kind = spec.kind
    # descend to the start leaf, stashing each right sibling not yet visited
    stack = []
    s = root
    for i in range(k - 2, -1, -1):
        left, right = children(kind, s)
        if (start >> i) & 1:
            s = right
        else:
            stack.append((k - i, right))
            s = left
    stack.append((k, s))
    emitted = 0
    while stack and emitted < count:
        d, s = stack.pop()
        if d == k:
            yield value(kind, s)
            emitted += 1
        else:
            left, right = children(kind, s)
            stack.append((d + 1, right))
            stack.append((d + 1, left))


def descendants(spec: TreeSpec, x: ExtRat) -> tuple[ExtRat, ExtRat]:
    """The two children of vertex x in the given tree."""
    if spec.permuted:
        p, q = x.num, x.den
        if spec.kind == "farey" and not 0 < x < 1:
            raise DomainError("farey vertices lie in (0,1)")
        if spec.kind == "dyadic" and not 0 < x < 1:
            raise DomainError("dyadic vertices lie in (0,1)")
        (a, b), (c, d) = _perm_children(spec.kind, (p, q))
        return ExtRat._raw(a, b), ExtRat._raw(c, d)
    if spec.kind == "dyadic":
        if not 0 < x < 1:
            raise DomainError("dyadic vertices lie in (0,1)")
        p, q = x.num, x.den
        return ExtRat._raw(2 * p - 1, 2 * q), ExtRat._raw(2 * p + 1, 2 * q)
    if spec.kind == "farey" and not 0 < x < 1:
        raise DomainError("farey vertices lie in (0,1)")
    lo, hi = coding.parents(x)
    return mediant(lo, x), mediant(x, hi)


# Vectorized level arrays for the numeric estimators.  Entries of any
# level k <= 24 stay below 2^25 (Fibonacci growth for the mediant kinds,
# 2^k for the dyadic ones), so int64 arithmetic is exact here.

_STATE_CACHE: dict = {}
_FLOAT_CACHE: dict = {}


def _root_cols(spec):
    s = _perm_state(spec.kind) if spec.permuted else _plain_state(spec.kind)
    return tuple(np.array([c], dtype=np.int64) for c in s)


def _child_cols(spec, cols):
    n = cols[0].size
    if not spec.permuted and spec.kind != "dyadic":
        pl, ql, pr, qr = cols
        pm, qm = pl + pr, ql + qr
        left, right = (pl, ql, pm, qm), (pm, qm, pr, qr)
    else:
        p, q = cols
        if not spec.permuted:
            left, right = (2 * p - 1, 2 * q), (2 * p + 1, 2 * q)
        elif spec.kind == "sb":
            left, right = (p, p + q), (p + q, q)
        elif spec.kind == "farey":
            left, right = (p, p + q), (q, 2 * q - p)
        else:
            left, right = (p, 2 * q), (p + q, 2 * q)
    out = []
    for lc, rc in zip(left, right):
        col = np.empty(2 * n, dtype=np.int64)
        col[0::2] = lc
        col[1::2] = rc
        out.append(col)
    return tuple(out)


def _state_cols(spec, k):
    key = (spec.kind, spec.permuted, k)
    hit = _STATE_CACHE.get(key)
    if hit is not None:
        return hit
    cols = _root_cols(spec) if k == 1 else _child_cols(spec, _state_cols(spec, k - 1))
    _STATE_CACHE[key] = cols
    return cols


def level_arrays(spec: TreeSpec, k: int, cap: int = ARRAY_CAP):
    """Numerators and denominators of level k as int64 arrays, level order.

    Cached per level; agrees entry for entry with level(spec, k).
    """
    if k < 1:
        raise DomainError("levels start at 1")
    if k > cap:
        raise CapExceeded(f"level arrays stop at {cap}")
    cols = _state_cols(spec, k)
    if len(cols) == 4:
        return cols[0] + cols[2], cols[1] + cols[3]
    return cols


def level_floats(spec: TreeSpec, k: int, cap: int = ARRAY_CAP) -> np.ndarray:
    """Level k as double-precision values, cached."""
    key = (spec.kind, spec.permuted, k)
    hit = _FLOAT_CACHE.get(key)
    if hit is None:
        p, q = level_arrays(spec, k, cap)
        hit = p / q
        _FLOAT_CACHE[key] = hit
    return hit


_HYPER = {0: 1, 1: 1, 2: 2}


def hyperbinary(n: int) -> int:
    """Number of ways to write n as a sum of powers of 2, each used at most twice.

    b(0) = 1, b(2n+1) = b(n), b(2n+2) = b(n) + b(n+1); consecutive values
    give the permuted Stern-Brocot sequence b(i-2)/b(i-1).
    """
    if n < 0:
        raise DomainError("hyperbinary wants n >= 0")
    known = _HYPER
    if n in known:
        return known[n]
    todo = [n]
    while todo:
        m = todo[-1]
        if m in known:
            todo.pop()
            continue
        if m % 2:
            k = (m - 1) // 2
            if k in known:
                known[m] = known[k]
                todo.pop()
            else:
                todo.append(k)
        else:
            k = (m - 2) // 2
            missing = [j for j in (k, k + 1) if j not in known]
            if missing:
                todo.extend(missing)
            else:
                known[m] = known[k] + known[k + 1]
                todo.pop()
    return known[n]
