"""Divisor-method apportionment in the log domain.

Weights are passed as natural logarithms so that power-weighted indices such
as ``p ** 27.5`` (around ``1e217``) never have to be materialised. A seat
goes to the state with the highest average ``w / t(k)``, where ``t(k)`` is
the signpost at which the ``k``-th seat is earned:

    UPWARD    t(k) = k - 1      (first seat free)
    STANDARD  t(k) = k - 1/2
    DOWNWARD  t(k) = k

A composite method with ``base`` seats shifts every signpost down by
``base``; all signposts at or below zero are handed out unconditionally.
"""

from __future__ import annotations

import enum
import heapq
import math
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal
from typing import Sequence

from .model import ApportionmentError, DivisorInterval, InfeasibleError, SeatVector

#: Two log-averages closer than this are treated as an exact tie
#: (a relative difference of 1e-12 between the averages themselves).
TIE_TOL = 1e-12


class TieError(ApportionmentError):
    """Several states have equal claim to the last seat(s) handed out."""

    def __init__(self, indices: Sequence[int], message: str | None = None):
        self.indices = tuple(sorted(indices))
        super().__init__(message or f"tie for the last seat between states at positions {list(self.indices)}")


class RoundingRule(enum.Enum):
    UPWARD = "up"
    STANDARD = "std"
    DOWNWARD = "down"

    @property
    def offset(self) -> float:
        """Signpost of the first seat, ``t(1)``."""
        return {"up": 0.0, "std": 0.5, "down": 1.0}[self.value]

    def signpost(self, k: int, base: float = 0.0) -> float:
        return k - 1 + self.offset - base


def free_seats(rule: RoundingRule, base: float = 0.0) -> int:
    """Number of seats per state whose signpost is not positive."""
    return max(0, math.floor(base + 1 - rule.offset))


def _log_signpost(rule: RoundingRule, k: int, base: float) -> float:
    t = rule.signpost(k, base)
    return math.log(t) if t > 0 else -math.inf


def _highest_averages(log_weights: Sequence[float], house: int, rule: RoundingRule, base: float) -> list[int]:
    n = len(log_weights)
    free = free_seats(rule, base)
    if house < n * free:
        raise InfeasibleError(f"{house} seats cannot cover {free} guaranteed seat(s) for each of {n} states")
    seats = [free] * n
    heap = [(-(lw - _log_signpost(rule, free + 1, base)), i) for i, lw in enumerate(log_weights)]
    heapq.heapify(heap)
    last_award = [math.inf] * n
    last = math.inf
    for _ in range(house - n * free):
        neg, i = heapq.heappop(heap)
        last = -neg
        seats[i] += 1
        last_award[i] = last
        heapq.heappush(heap, (-(log_weights[i] - _log_signpost(rule, seats[i] + 1, base)), i))
    if heap and math.isfinite(last):
        runner_up = -heap[0][0]
        if last - runner_up <= TIE_TOL:
            tied = {i for i in range(n) if abs(last_award[i] - last) <= TIE_TOL}
            tied |= {i for neg, i in heap if abs(-neg - last) <= TIE_TOL}
            raise TieError(tied)
    return seats


def apportion(log_weights: Sequence[float], seats: int, rule: RoundingRule = RoundingRule.UPWARD) -> SeatVector:
    """Apportion ``seats`` proportionally to ``exp(log_weights)``.

    Raises :class:`TieError` when the last seat cannot be assigned without
    an arbitrary choice, and :class:`InfeasibleError` when upward rounding
    is asked to seat fewer seats than there are states.
    """
    if seats < 0:
        raise InfeasibleError("seat count must be nonnegative")
    if rule is RoundingRule.UPWARD and seats < len(log_weights):
        raise InfeasibleError(
            f"upward rounding needs at least one seat per state ({len(log_weights)}), got {seats}"
        )
    return SeatVector(tuple(_highest_averages(log_weights, seats, rule, 0.0)))


def composite(log_weights: Sequence[float], house: int, base: float, rule: RoundingRule) -> SeatVector:
    """Total seats ``x_i = round_rule(base + w_i / D)`` exhausting ``house``.

    ``base`` may be fractional (5.5 for the standard-rounding form of the
    Cambridge Compromise); rounding is applied to base and quotient jointly.
    """
    if base < 0:
        raise InfeasibleError("base seats must be nonnegative")
    return SeatVector(tuple(_highest_averages(log_weights, house, rule, base)))


def log_to_float(value: float) -> float:
    if value > 709.0:
        return math.inf
    return math.exp(value)


def _sig_candidates(lo: Decimal, hi: Decimal, digits: int, anchor: Decimal) -> list[Decimal]:
    out = []
    for exp10 in range(lo.adjusted(), hi.adjusted() + 1):
        step = Decimal(1).scaleb(exp10 - digits + 1)
        n_min = max((lo / step).to_integral_value(ROUND_CEILING), Decimal(10) ** (digits - 1))
        n_max = min((hi / step).to_integral_value(ROUND_FLOOR), Decimal(10) ** digits - 1)
        if n_min > n_max:
            continue
        near = (anchor / step).to_integral_value(ROUND_FLOOR)
        for m in {n_min, n_max, near, near + 1}:
            if n_min <= m <= n_max:
                out.append(m * step)
    return out


def nice_number(lo: float, hi: float, *, include_lo: bool = True, include_hi: bool = True) -> float:
    """Shortest decimal in the interval between ``lo`` and ``hi``.

    Fewest significant digits wins; among equally short candidates the one
    nearest the midpoint, then the smaller. If one end is unbounded
    (``lo == 0`` or ``hi == inf``) the candidate nearest the finite end is
    taken instead of the midpoint.
    """
    if not 0 <= lo <= hi or (lo == hi and not (include_lo and include_hi)):
        raise ValueError(f"bad interval [{lo}, {hi}]")
    if lo == 0 and math.isinf(hi):
        return 1.0
    if math.isinf(hi):
        d_lo = Decimal(lo)
        d_hi = d_lo.scaleb(3)
        anchor = d_lo
    elif lo == 0:
        d_hi = Decimal(hi)
        d_lo = d_hi.scaleb(-3)
        anchor = d_hi
    else:
        d_lo, d_hi = Decimal(lo), Decimal(hi)
        anchor = (d_lo + d_hi) / 2
    lo_ok = include_lo and lo > 0
    hi_ok = include_hi and math.isfinite(hi)
    for digits in range(1, 40):
        cands = [
            c for c in _sig_candidates(d_lo, d_hi, digits, anchor)
            if (c > d_lo or (lo_ok and c == d_lo)) and (c < d_hi or (hi_ok and c == d_hi))
        ]
        if cands:
            return float(min(cands, key=lambda c: (abs(c - anchor), c)))
    return float(anchor)


def divisor_interval(
    log_weights: Sequence[float],
    vector: SeatVector | Sequence[int],
    rule: RoundingRule = RoundingRule.UPWARD,
    base: float = 0.0,
) -> DivisorInterval:
    """All divisors ``D`` for which rounding ``base + w_i/D`` gives ``vector``.

    ``vector`` holds totals when ``base`` is nonzero. The interval is
    ``[max_i w_i/t(x_i+1), min_i w_i/t(x_i))`` with the minimum taken over
    states whose current signpost is positive; it is open-ended (``inf``)
    when no such state exists.
    """
    seats = list(vector)
    if len(seats) != len(log_weights):
        raise ApportionmentError("weights and seat vector differ in length")
    free = free_seats(rule, base)
    log_lo, log_hi = -math.inf, math.inf
    for lw, x in zip(log_weights, seats):
        if x < free:
            raise ApportionmentError(f"seat count {x} is below the guaranteed {free}")
        log_lo = max(log_lo, lw - _log_signpost(rule, x + 1, base))
        if rule.signpost(x, base) > 0:
            log_hi = min(log_hi, lw - _log_signpost(rule, x, base))
    if not log_lo < log_hi:
        raise ApportionmentError("seat vector is not reproducible by any divisor")
    d_min, d_max = log_to_float(log_lo), log_to_float(log_hi)
    if d_max <= d_min:
        # both ends overflow a float; fall back to the log midpoint
        nice = math.inf
    else:
        nice = nice_number(d_min, d_max, include_hi=False)
    return DivisorInterval(d_min, d_max, nice, log_lo, log_hi)


def quotients(log_weights: Sequence[float], divisor: float, base: float = 0.0) -> list[float]:
    """Unrounded ``base + w_i / divisor``."""
    log_d = math.log(divisor)
    return [base + log_to_float(lw - log_d) for lw in log_weights]
