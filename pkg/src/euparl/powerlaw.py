"""Power-weighted apportionment: exponent ranges and the cap-hitting solver.

Seats are apportioned to ``p_i ** E``. Because seat vectors are integer
valued, each vector survives over a whole interval of exponents; its ends
are critical exponents at which a one-seat transfer between two states is
exactly tied. The solver walks from one such interval to the next by
applying those transfers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal
from typing import Optional, Sequence

from scipy.optimize import bisect

from .divisor import (
    TieError,
    RoundingRule,
    apportion,
    divisor_interval,
    free_seats,
    nice_number,
)
from .model import (
    ApportionmentError,
    DivisorInterval,
    ExponentRange,
    InfeasibleError,
    Roster,
    SeatVector,
    same_order,
)

INIT_BRACKET = (0.001, 40.0)
INIT_XTOL = 1e-6
MAX_WALK = 100_000


def critical_exponent(p_i: int, p_j: int, y_i: int, y_j: int) -> float:
    """Exponent at which ``(y_i, y_j)`` and ``(y_i + 1, y_j - 1)`` tie.

    Upward rounding: ``p_i**E / D = y_i`` and ``p_j**E / D = y_j - 1``.
    """
    if p_i == p_j:
        raise ApportionmentError("equal populations have no critical exponent")
    if y_i < 1 or y_j < 2:
        raise ApportionmentError("critical exponent needs y_i >= 1 and y_j >= 2")
    return (math.log(y_i) - math.log(y_j - 1)) / (math.log(p_i) - math.log(p_j))


def _same(a: float, b: float) -> bool:
    return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class _Bound:
    value: float
    pairs: tuple[tuple[int, int], ...] = ()


def _bounds(roster: Roster, seats: Sequence[int], rule: RoundingRule) -> tuple[_Bound, _Bound]:
    logs = [math.log(p) for p in roster.populations]
    free = free_seats(rule)
    log_gain = []   # log t(y_i + 1): signpost of a state's next seat
    log_loss = []   # log t(y_j): signpost of its last seat, None if unconditional
    for y in seats:
        if y < free:
            raise ApportionmentError(f"seat count {y} is below the guaranteed {free}")
        log_gain.append(math.log(rule.signpost(y + 1)))
        t = rule.signpost(y)
        log_loss.append(math.log(t) if t > 0 else None)

    upper, upper_pairs = math.inf, []
    lower, lower_pairs = -math.inf, []
    for j, loss in enumerate(log_loss):
        if loss is None:
            continue
        for i, gain in enumerate(log_gain):
            if i == j:
                continue
            num = gain - loss
            den = logs[i] - logs[j]
            if den == 0:
                if num < 0:
                    raise ApportionmentError(
                        f"states {roster[i].code} and {roster[j].code} have equal populations "
                        "but their seats differ by more than one transfer"
                    )
                continue
            e = num / den
            if den > 0:
                if upper_pairs and _same(e, upper):
                    upper_pairs.append((i, j))
                elif e < upper:
                    upper, upper_pairs = e, [(i, j)]
            else:
                if lower_pairs and _same(e, lower):
                    lower_pairs.append((i, j))
                elif e > lower:
                    lower, lower_pairs = e, [(i, j)]
    if lower <= 0:
        lower, lower_pairs = 0.0, []
    return _Bound(lower, tuple(lower_pairs)), _Bound(upper, tuple(upper_pairs))


@dataclass(frozen=True)
class PowerRange(ExponentRange):
    """ExponentRange that also remembers every pair tied at each end."""

    upper_pairs: tuple[tuple[int, int], ...] = ()
    lower_pairs: tuple[tuple[int, int], ...] = ()


def exponent_range(
    roster: Roster, vector: SeatVector | Sequence[int], rule: RoundingRule = RoundingRule.UPWARD
) -> PowerRange:
    """Exponents ``E`` for which apportioning to ``p**E`` yields ``vector``.

    ``vector`` is the divisor-apportioned part only (no base seats).
    Raises if no positive exponent regenerates it.
    """
    vector = vector if isinstance(vector, SeatVector) else SeatVector(tuple(vector))
    same_order(roster, vector)
    lo, hi = _bounds(roster, vector.seats, rule)
    if not lo.value < hi.value:
        raise ApportionmentError(
            f"seat vector is not generated by any exponent (bounds {lo.value:.6g} > {hi.value:.6g})"
        )
    return PowerRange(
        lower=lo.value,
        upper=hi.value,
        vector=vector,
        boundary_tie=hi.pairs[0] if len(hi.pairs) == 1 else None,
        lower_tie=lo.pairs[0] if len(lo.pairs) == 1 else None,
        upper_pairs=hi.pairs,
        lower_pairs=lo.pairs,
    )


def nice_exponent(rng: ExponentRange) -> float:
    """Shortest decimal strictly inside the range, nearest its midpoint.

    Endpoints are excluded: at a critical exponent the apportionment is
    tied. For the two unbounded extreme ranges the shortest decimal nearest
    the finite end is used.
    """
    return nice_number(rng.lower, rng.upper, include_lo=False, include_hi=False)


def display_range(rng: ExponentRange, places: int = 4) -> tuple[Decimal, Decimal]:
    """Ends rounded inwards (lower up, upper down) so neighbours don't overlap."""
    q = Decimal(1).scaleb(-places)
    lower = Decimal(rng.lower).quantize(q, ROUND_CEILING)
    upper = Decimal("Infinity") if math.isinf(rng.upper) else Decimal(rng.upper).quantize(q, ROUND_FLOOR)
    return lower, upper


def seat_bias_largest(n: int) -> float:
    """Approximate seat bias of the largest of ``n`` states under upward rounding."""
    if n < 1:
        raise ValueError("n must be at least 1")
    harmonic = math.fsum(1.0 / k for k in range(1, n + 1))
    return -(harmonic - 1.0) / 2.0


def _largest_share(logs: Sequence[float], exponent: float, seats: int) -> float:
    # largest state's ideal share; exponents of nonpositive numbers never overflow
    top = logs[0]
    return seats / math.fsum(math.exp(exponent * (lw - top)) for lw in logs)


def init_exponent(roster: Roster, seats: int, target: int, bias_corrected: bool = False) -> float:
    """Exponent at which the largest state's ideal share equals ``target``.

    With ``bias_corrected`` the goal becomes ``target - seat_bias_largest(n)``
    (i.e. target plus about 1.45 seats for 27 states), offsetting the
    small-state bias of upward rounding.
    """
    if len(roster) < 2:
        raise InfeasibleError("initial exponent needs at least two states")
    if not 1 <= target < seats:
        raise InfeasibleError(f"target {target} must lie in [1, {seats})")
    goal = target - seat_bias_largest(len(roster)) if bias_corrected else float(target)
    logs = [math.log(p) for p in roster.populations]

    def f(e: float) -> float:
        return _largest_share(logs, e, seats) - goal

    lo, hi = INIT_BRACKET
    f_lo, f_hi = f(lo), f(hi)
    if abs(f_lo) <= 1e-12 and abs(f_hi) <= 1e-12:
        return (lo + hi) / 2
    if f_lo > 0 or f_hi < 0:
        raise InfeasibleError(
            f"share {goal:.4f} of {seats} seats is not reached by the largest state "
            f"for exponents in [{lo}, {hi}]"
        )
    return bisect(f, lo, hi, xtol=INIT_XTOL)


@dataclass(frozen=True)
class TraceStep:
    exponent: float
    range: PowerRange
    largest_seats: int
    divisor: DivisorInterval


@dataclass
class SolverTrace:
    """Ranges visited by :func:`solve_target`, ordered by exponent."""

    target: int
    initial_exponent: float
    steps: list[TraceStep] = field(default_factory=list)

    @property
    def solutions(self) -> list[TraceStep]:
        return [s for s in self.steps if s.largest_seats == self.target]


def transfer(vector: SeatVector, pair: tuple[int, int]) -> SeatVector:
    """Move one seat from ``pair[1]`` to ``pair[0]``."""
    gain, lose = pair
    seats = list(vector.seats)
    seats[gain] += 1
    seats[lose] -= 1
    return SeatVector(tuple(seats))


def _neighbour(roster: Roster, rng: PowerRange, upward: bool) -> Optional[PowerRange]:
    pairs = rng.upper_pairs if upward else rng.lower_pairs
    if not pairs:
        return None
    if len(pairs) == 1:
        return exponent_range(roster, transfer(rng.vector, pairs[0]))
    # several transfers fall due at once: apportion just past the boundary
    where = rng.upper if upward else rng.lower
    seats = rng.vector.total
    for k in range(9, 4, -1):
        step = where * 10.0 ** -k
        e = where + step if upward else where - step
        try:
            nxt = exponent_range(roster, apportion(roster.log_weights(e), seats))
        except TieError:
            continue
        if _same(nxt.lower if upward else nxt.upper, where):
            return nxt
    states = sorted({roster[k].code for p in pairs for k in p})
    raise TieError(
        sorted({k for p in pairs for k in p}),
        f"ambiguous seat transfer at exponent {where:.6g} among {', '.join(states)}",
    )


def _start_vector(roster: Roster, seats: int, exponent: float) -> SeatVector:
    for k in range(8):
        e = exponent * (1 + 1e-9 * k)
        try:
            return apportion(roster.log_weights(e), seats)
        except TieError:
            continue
    raise TieError([], f"apportionment stays tied near exponent {exponent}")


def solve_target(roster: Roster, seats: int, target: int) -> SolverTrace:
    """Find every exponent range giving the largest state exactly ``target``.

    Starts from the bias-corrected initial exponent and walks to adjacent
    ranges via boundary seat transfers. The returned trace lists the visited
    ranges in increasing exponent order; consecutive ranges share an end.
    """
    if target < 1:
        raise InfeasibleError("target must be at least 1")
    if len(roster) < 2:
        if target != seats:
            raise InfeasibleError(f"a single state always receives all {seats} seats")
        vec = apportion(roster.log_weights(), seats)
        rng = PowerRange(0.0, math.inf, vec)
        return SolverTrace(target, 1.0, [_step(roster, rng, 1.0)])
    try:
        e0 = init_exponent(roster, seats, target, bias_corrected=True)
    except InfeasibleError:
        lo_share = _largest_share([math.log(p) for p in roster.populations], INIT_BRACKET[0], seats)
        e0 = INIT_BRACKET[0] if target < lo_share else INIT_BRACKET[1]

    start = exponent_range(roster, _start_vector(roster, seats, e0))
    _check_co_maximal(roster, start.vector)
    visited = {start.vector: start}

    def go(rng: PowerRange, upward: bool) -> Optional[PowerRange]:
        nxt = _neighbour(roster, rng, upward)
        if nxt is not None:
            visited[nxt.vector] = nxt
            if len(visited) > MAX_WALK:
                raise ApportionmentError("exponent walk did not terminate")
        return nxt

    cur = start
    # monotone in E: move towards the target until reached or overshot
    while cur.vector[0] != target:
        upward = cur.vector[0] < target
        nxt = go(cur, upward)
        if nxt is None or (nxt.vector[0] > target if upward else nxt.vector[0] < target):
            raise InfeasibleError(
                f"no exponent gives the largest state exactly {target} of {seats} seats"
            )
        cur = nxt
    for upward in (False, True):
        rng = cur
        while rng is not None and rng.vector[0] == target:
            rng = go(rng, upward)

    ranges = sorted(visited.values(), key=lambda r: r.lower)
    trace = SolverTrace(target, e0)
    for rng in ranges:
        trace.steps.append(_step(roster, rng, nice_exponent(rng)))
    return trace


def _step(roster: Roster, rng: PowerRange, exponent: float) -> TraceStep:
    lw = roster.log_weights(exponent)
    return TraceStep(exponent, rng, rng.vector[0], divisor_interval(lw, rng.vector))


def _check_co_maximal(roster: Roster, vector: SeatVector) -> None:
    top = roster[0].population
    tops = {vector[i] for i, s in enumerate(roster) if s.population == top}
    if len(tops) > 1:
        raise ApportionmentError("states sharing the largest population received different seats")
