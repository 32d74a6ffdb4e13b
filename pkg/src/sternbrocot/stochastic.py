"""Random walks on the tree of positive rationals.

Two Markov chains act on extended rationals through the branch maps
u -> u/(1+u) and u -> u+1, written as letters 0 and 1.  MC0 flips a
fair coin at every step; MC1 weights the branches by 1/(1+x) and
x/(1+x), which makes 0 and infinity absorbing.  Letters come from
counter-based per-walk keys, so a walk depends only on (seed, walk
index, step) and any parallel schedule reproduces the serial output
bit for bit.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import sqrt
from typing import Callable, Optional, Sequence, Tuple

from . import rng
from .core import CapExceeded, DomainError, ExtRat, ONE
from .minkowski import stieltjes_mean
from .operators import markov_apply, markov_power, transition_probs

__all__ = [
    "HORIZON_CAP",
    "WORD_CAP",
    "WALKS_CAP",
    "WALK_CHUNK",
    "ChainSpec",
    "WalkPath",
    "HittingResult",
    "MartingaleReport",
    "transition_probs",
    "apply_letter",
    "simulate",
    "cylinder_prob",
    "walk_table",
    "hitting_experiment",
    "martingale_check",
    "mc0_limit_experiment",
]

HORIZON_CAP = 1 << 20
WORD_CAP = 1 << 10
WALKS_CAP = 10 ** 6
WALK_CHUNK = 1024


def apply_letter(x: ExtRat, letter: int) -> ExtRat:
    """Branch step: letter 0 sends p/q to p/(p+q), letter 1 to (p+q)/q."""
    # both images are already in lowest terms: gcd(p, p+q) = gcd(p, q)
    if letter == 0:
        return ExtRat._raw(x.num, x.num + x.den)
    return ExtRat._raw(x.num + x.den, x.den)


def _draw_letter(kind: str, key: int, step: int, x: ExtRat) -> int:
    if kind == "MC0":
        return rng.draw_bit(key, step)
    # MC1: letter 0 with probability den/(num+den), exact 53-bit threshold
    return 0 if rng.draw_below(key, step, x.den, x.num + x.den) else 1


@dataclasses.dataclass(frozen=True)
class ChainSpec:
    """Chain kind, start state, walk length, and base seed."""

    kind: str
    start: ExtRat = ONE
    horizon: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("MC0", "MC1"):
            raise ValueError(f"unknown chain kind: {self.kind!r}")
        if not isinstance(self.start, ExtRat):
            raise TypeError("start must be an ExtRat")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.horizon > HORIZON_CAP:
            raise CapExceeded(
                f"horizon {self.horizon} exceeds cap {HORIZON_CAP}"
            )


@dataclasses.dataclass(frozen=True)
class WalkPath:
    """One realized walk.

    states[0] is the start and states[k] = branch(letters[k-1]) applied
    to states[k-1]; prob is the exact probability of the letter word.
    """

    states: Tuple[ExtRat, ...]
    letters: Tuple[int, ...]
    prob: Fraction


def simulate(
    spec: ChainSpec,
    letters: Optional[Sequence[int]] = None,
    walk: int = 0,
) -> WalkPath:
    """Run one walk and return its states, letters, and exact probability.

    With explicit ``letters`` the word is forced and only its probability
    is computed (it may be 0 against an absorbing state); otherwise
    letters are drawn from the per-walk key ``rng.walk_key(spec.seed,
    walk)``.
    """
    forced: Optional[Tuple[int, ...]] = None
    if letters is not None:
        forced = tuple(int(b) for b in letters)
        if len(forced) != spec.horizon:
            raise ValueError("letters length must equal the horizon")
        if any(b not in (0, 1) for b in forced):
            raise ValueError("letters must be 0/1 bits")
    key = rng.walk_key(spec.seed, walk)
    x = spec.start
    states = [x]
    word = []
    prob = Fraction(1)
    for k in range(spec.horizon):
        b = forced[k] if forced is not None else _draw_letter(
            spec.kind, key, k, x
        )
        p0, p1 = transition_probs(spec.kind, x)
        prob *= p1 if b else p0
        x = apply_letter(x, b)
        states.append(x)
        word.append(b)
    return WalkPath(states=tuple(states), letters=tuple(word), prob=prob)


def cylinder_prob(kind: str, x: ExtRat, word: Sequence[int]) -> Fraction:
    """Exact probability that a walk from x begins with the given letters."""
    bits = tuple(int(b) for b in word)
    if len(bits) > WORD_CAP:
        raise CapExceeded(f"word length {len(bits)} exceeds cap {WORD_CAP}")
    if any(b not in (0, 1) for b in bits):
        raise ValueError("word must consist of 0/1 bits")
    prob = Fraction(1)
    for b in bits:
        p0, p1 = transition_probs(kind, x)
        prob *= p1 if b else p0
        if prob == 0:
            return prob
        x = apply_letter(x, b)
    return prob


def _run_walk(
    kind: str,
    start: ExtRat,
    horizon: int,
    key: int,
    interval: Optional[Tuple[ExtRat, ExtRat]],
) -> Tuple[int, int, int]:
    """One walk as plain integers: (hit_time, final_num, final_den).

    With an interval the walk stops at its first state strictly inside
    (the start counts as time 0) and reports that state as final.
    """
    x = start
    if interval is not None and interval[0] < x < interval[1]:
        return 0, x.num, x.den
    for k in range(horizon):
        x = apply_letter(x, _draw_letter(kind, key, k, x))
        if interval is not None and interval[0] < x < interval[1]:
            return k + 1, x.num, x.den
    return -1, x.num, x.den


def _chunk_rows(args) -> list:
    kind, start, horizon, seed, interval, lo, hi = args
    return [
        _run_walk(kind, start, horizon, rng.walk_key(seed, w), interval)
        for w in range(lo, hi)
    ]


def walk_table(
    kind: str,
    start: ExtRat,
    walks: int,
    horizon: int,
    seed: int,
    interval: Optional[Tuple[ExtRat, ExtRat]] = None,
    workers: int = 1,
) -> Tuple[Tuple[int, int, int], ...]:
    """Simulate independent walks, one row (hit_time, num, den) per walk.

    hit_time is the first index whose state lies strictly inside
    ``interval`` (0 counts the start), or -1 when the walk never enters
    within the horizon; walks stop once they hit.  Rows depend only on
    (seed, walk index), never on ``workers`` or scheduling.
    """
    if kind not in ("MC0", "MC1"):
        raise ValueError(f"unknown chain kind: {kind!r}")
    if not 1 <= walks <= WALKS_CAP:
        raise CapExceeded(f"walks must be in 1..{WALKS_CAP}, got {walks}")
    if not 1 <= horizon <= HORIZON_CAP:
        raise CapExceeded(
            f"horizon must be in 1..{HORIZON_CAP}, got {horizon}"
        )
    if interval is not None:
        a, b = interval
        if not (isinstance(a, ExtRat) and isinstance(b, ExtRat)):
            raise TypeError("interval endpoints must be ExtRat")
        if not a < b:
            raise DomainError(f"empty interval ({a}, {b})")
    tasks = [
        (kind, start, horizon, seed, interval, lo, min(lo + WALK_CHUNK, walks))
        for lo in range(0, walks, WALK_CHUNK)
    ]
    if workers <= 1 or len(tasks) == 1:
        rows: list = []
        for t in tasks:
            rows.extend(_chunk_rows(t))
        return tuple(rows)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = []
        for part in pool.map(_chunk_rows, tasks):
            rows.extend(part)
    return tuple(rows)


@dataclasses.dataclass(frozen=True)
class HittingResult:
    """Outcome of a hitting experiment.

    curve[t] is the exact fraction of walks that entered the interval
    by time t; fraction is curve[-1]; finals hold the stopping state of
    each walk as a (num, den) pair.
    """

    fraction: Fraction
    curve: Tuple[Fraction, ...]
    hit_times: Tuple[int, ...]
    finals: Tuple[Tuple[int, int], ...]


def hitting_experiment(
    interval: Tuple[ExtRat, ExtRat],
    walks: int,
    horizon: int,
    seed: int,
    kind: str = "MC0",
    start: ExtRat = ONE,
    workers: int = 1,
) -> HittingResult:
    """Fraction of walks entering the open interval within the horizon.

    Comparisons are exact rational comparisons; the cumulative curve is
    nondecreasing by construction and its monotone growth toward 1 is
    the observable content of almost-sure hitting.
    """
    rows = walk_table(
        kind, start, walks, horizon, seed, interval=interval, workers=workers
    )
    counts = [0] * (horizon + 1)
    for t, _, _ in rows:
        if t >= 0:
            counts[t] += 1
    curve = []
    cum = 0
    for c in counts:
        cum += c
        curve.append(Fraction(cum, walks))
    return HittingResult(
        fraction=curve[-1],
        curve=tuple(curve),
        hit_times=tuple(r[0] for r in rows),
        finals=tuple((r[1], r[2]) for r in rows),
    )


@dataclasses.dataclass(frozen=True)
class MartingaleReport:
    """Diagnostics for the one-step mean identity P h = a h + b.

    max_residual is the exact worst one-step residual over the distinct
    states visited early in the walks; the deviation fields compare
    empirical conditional means over letter-prefix cells against the
    affine prediction; window_fraction is the share of walks whose
    letter string contains both letters in every sliding window.
    """

    max_residual: object
    residual_states: int
    max_deviation: float
    deviation_se: float
    cells: int
    window_fraction: Optional[Fraction]
    min_alternations: int
    mean_alternations: float


def _h_val(v):
    if isinstance(v, ExtRat):
        return v.as_fraction()
    return v


def _max_run(mask: int, n: int) -> int:
    """Longest run of equal bits in the n-bit LSB-first word."""
    if n <= 0:
        return 0
    d = (mask ^ (mask >> 1)) & ((1 << (n - 1)) - 1) if n > 1 else 0
    prev = -1
    best = 0
    while d:
        low = (d & -d).bit_length() - 1
        best = max(best, low - prev)
        prev = low
        d &= d - 1
    return max(best, n - 1 - prev)


def martingale_check(
    kind: str,
    h: Callable[[ExtRat], object],
    walks: int,
    horizon: int,
    seed: int,
    start: ExtRat = ONE,
    affine: Tuple = (1, 0),
    window: Optional[int] = 64,
    residual_depth: int = 32,
    min_cell: int = 64,
) -> MartingaleReport:
    """Simulate walks and test the one-step identity P h = a h + b.

    Exact part: at every distinct state visited within the first
    ``residual_depth`` steps, |markov_apply(kind, h, y) - (a h(y) + b)|
    is evaluated; the maximum is exact when h returns rationals.
    Empirical part: walks are grouped by letter prefixes of each length
    n while cells hold at least ``min_cell`` walks; the sample mean of
    h at step n+1 inside a cell is compared with the affine prediction
    at the (prefix-determined) step-n state, and the worst absolute
    deviation is reported with its standard error.  The letter strings
    also yield alternation counts and, when the horizon admits it, the
    fraction of walks showing both letters in every length-``window``
    window.
    """
    if kind not in ("MC0", "MC1"):
        raise ValueError(f"unknown chain kind: {kind!r}")
    if not 1 <= walks <= WALKS_CAP:
        raise CapExceeded(f"walks must be in 1..{WALKS_CAP}, got {walks}")
    if not 1 <= horizon <= HORIZON_CAP:
        raise CapExceeded(
            f"horizon must be in 1..{HORIZON_CAP}, got {horizon}"
        )
    a = Fraction(affine[0]) if isinstance(affine[0], (int, Fraction)) else affine[0]
    b = Fraction(affine[1]) if isinstance(affine[1], (int, Fraction)) else affine[1]

    seen = set()
    masks = []
    for w in range(walks):
        key = rng.walk_key(seed, w)
        x = start
        mask = 0
        for k in range(horizon):
            if k <= residual_depth:
                seen.add(x)
            bit = _draw_letter(kind, key, k, x)
            mask |= bit << k
            x = apply_letter(x, bit)
        if horizon <= residual_depth:
            seen.add(x)
        masks.append(mask)

    max_residual: object = Fraction(0)
    for y in seen:
        r = markov_apply(kind, h, y) - (a * _h_val(h(y)) + b)
        if abs(r) > abs(max_residual):
            max_residual = abs(r)

    # prefix cells: the step-n state is a function of the first n letters
    n_max = 0
    while (1 << (n_max + 1)) * min_cell <= walks and n_max + 1 < horizon:
        n_max += 1
    max_dev = 0.0
    dev_se = 0.0
    cells = 0
    for n in range(n_max + 1):
        counts: dict = {}
        pmask = (1 << n) - 1
        for mask in masks:
            slot = counts.setdefault(mask & pmask, [0, 0])
            slot[(mask >> n) & 1] += 1
        for prefix, (c0, c1) in sorted(counts.items()):
            c = c0 + c1
            if c < min_cell:
                continue
            y = start
            for k in range(n):
                y = apply_letter(y, (prefix >> k) & 1)
            h0 = _h_val(h(apply_letter(y, 0)))
            h1 = _h_val(h(apply_letter(y, 1)))
            emp = (c0 * h0 + c1 * h1) / c
            pred = a * _h_val(h(y)) + b
            dev = abs(float(emp - pred))
            phat = c1 / c
            se = abs(float(h1 - h0)) * sqrt(phat * (1.0 - phat) / c)
            cells += 1
            if dev > max_dev:
                max_dev = dev
                dev_se = se

    alts = []
    ok_windows = 0
    for mask in masks:
        diff = (mask ^ (mask >> 1)) & ((1 << (horizon - 1)) - 1) if horizon > 1 else 0
        alts.append(bin(diff).count("1"))
        if window is not None and horizon >= window:
            if _max_run(mask, horizon) <= window - 1:
                ok_windows += 1
    window_fraction = (
        Fraction(ok_windows, walks)
        if window is not None and horizon >= window
        else None
    )
    return MartingaleReport(
        max_residual=max_residual,
        residual_states=len(seen),
        max_deviation=max_dev,
        deviation_se=dev_se,
        cells=cells,
        window_fraction=window_fraction,
        min_alternations=min(alts),
        mean_alternations=sum(alts) / walks,
    )


def mc0_limit_experiment(f: Callable[[ExtRat], object], x: ExtRat, n: int):
    """Pair the exact n-step MC0 mean from x with the stage-n tree mean.

    Both numbers approximate the same limit integral; the difference is
    the convergence gap at depth n.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > 20:
        raise CapExceeded(f"n {n} exceeds cap 20")
    return markov_power("MC0", f, x, n), stieltjes_mean(f, n)
