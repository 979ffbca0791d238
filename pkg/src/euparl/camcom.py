"""Cambridge Compromise compositions and their audit checks."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .divisor import RoundingRule, composite, divisor_interval, quotients
from .model import (
    ApportionmentError,
    ApportionmentProblem,
    DivisorInterval,
    InfeasibleError,
    Roster,
    SeatVector,
)
from .powerlaw import SolverTrace, solve_target


@dataclass(frozen=True)
class Composition:
    problem: ApportionmentProblem
    seats: SeatVector
    quotients: tuple[float, ...]
    divisor: DivisorInterval
    capped: tuple[int, ...] = ()
    exponent_used: Optional[float] = None

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.problem.roster.codes, self.seats.seats))


def _compose(roster: Roster, indices: Sequence[int], house: int, base: int, exponent: float):
    lw_all = roster.log_weights(exponent)
    lw = [lw_all[i] for i in indices]
    x = composite(lw, house, base, RoundingRule.UPWARD)
    div = divisor_interval(lw, x, RoundingRule.UPWARD, base)
    return x, div, quotients(lw, div.nice, base)


def camcom_apportion(problem: ApportionmentProblem) -> Composition:
    """Base seats plus upward-rounded proportional seats, capped.

    States above the cap are held at the cap and the seats they release are
    re-apportioned among the others; repeated until nobody exceeds the cap.
    """
    roster, cap, base = problem.roster, problem.cap, problem.base_seats
    n = len(roster)
    if n * cap < problem.house_size:
        raise InfeasibleError(f"{n} states capped at {cap} cannot fill {problem.house_size} seats")
    capped: list[int] = []
    while True:
        active = [i for i in range(n) if i not in capped]
        house = problem.house_size - cap * len(capped)
        x, div, q = _compose(roster, active, house, base, problem.exponent)
        over = [active[k] for k, s in enumerate(x) if s > cap]
        if not over:
            break
        capped.extend(over)

    seats = [cap] * n
    quot = [float(cap)] * n
    for k, i in enumerate(active):
        seats[i] = x[k]
        quot[i] = q[k]
    return Composition(
        problem=problem,
        seats=SeatVector(tuple(seats)),
        quotients=tuple(quot),
        divisor=div,
        capped=tuple(sorted(capped)),
        exponent_used=problem.exponent,
    )


def uncapped(problem: ApportionmentProblem, exponent: Optional[float] = None) -> Composition:
    """Plain base + proportional composition with no capping step."""
    e = problem.exponent if exponent is None else exponent
    n = len(problem.roster)
    x, div, q = _compose(problem.roster, range(n), problem.house_size, problem.base_seats, e)
    return Composition(replace(problem, exponent=e), x, tuple(q), div, (), e)


def power_variant(problem: ApportionmentProblem) -> list[Composition]:
    """Power-weighted compositions that give the largest state the cap.

    If the unweighted composition already respects the cap it is returned
    alone. Otherwise one composition per cap-hitting exponent range is
    returned, in increasing exponent order; none of them is capped.
    """
    plain = uncapped(problem, 1.0)
    if max(plain.seats) <= problem.cap:
        return [plain]
    trace = power_trace(problem)
    out = []
    for step in trace.solutions:
        comp = uncapped(problem, step.exponent)
        if comp.seats != step.range.vector.shifted(problem.base_seats):
            raise ApportionmentError(f"exponent {step.exponent} does not regenerate its range")
        out.append(comp)
    return out


def power_trace(problem: ApportionmentProblem) -> SolverTrace:
    return solve_target(problem.roster, problem.remaining_seats, problem.cap - problem.base_seats)


@dataclass
class DegressivityReport:
    holds_on_seats: bool
    holds_on_quotients: bool
    seat_violations: list[tuple[str, str, str]] = field(default_factory=list)
    quotient_violations: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def violations(self) -> list[tuple[str, str, str]]:
        return self.seat_violations + self.quotient_violations


def _ge(a: float, b: float) -> bool:
    return a >= b or math.isclose(a, b, rel_tol=1e-12)


def check_degressive(comp: Composition) -> DegressivityReport:
    """Check larger-gets-more and larger-represents-more, pairwise.

    The seat-level test uses the rounded seats; the quotient-level test uses
    the unrounded ``base + w/D`` values. Pairs of equal population are
    skipped.
    """
    roster = comp.problem.roster
    pops = roster.populations
    x, q = comp.seats.seats, comp.quotients
    seat_bad, quot_bad = [], []
    n = len(roster)
    for i in range(n):
        for j in range(n):
            if not pops[i] > pops[j]:
                continue
            a, b = roster[i].code, roster[j].code
            if x[i] < x[j]:
                seat_bad.append((a, b, "fewer seats"))
            elif not _ge(pops[i] / x[i], pops[j] / x[j]):
                seat_bad.append((a, b, "fewer persons per seat"))
            if not _ge(pops[i] / q[i], pops[j] / q[j]):
                quot_bad.append((a, b, "fewer persons per quotient"))
    return DegressivityReport(not seat_bad, not quot_bad, seat_bad, quot_bad)


class Majorization(enum.Enum):
    A_BY_B = "a-majorized-by-b"
    B_BY_A = "b-majorized-by-a"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def majorization_compare(a: Sequence[int], b: Sequence[int]) -> Majorization:
    """Compare partial sums over the first ``k`` (largest) states, all ``k``."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        raise ApportionmentError("vectors differ in length")
    if sum(a) != sum(b):
        raise ApportionmentError(f"totals differ: {sum(a)} vs {sum(b)}")
    sa = sb = 0
    a_le = b_le = True
    for u, v in zip(a, b):
        sa += u
        sb += v
        a_le &= sa <= sb
        b_le &= sb <= sa
    if a_le and b_le:
        return Majorization.EQUAL
    if a_le:
        return Majorization.A_BY_B
    if b_le:
        return Majorization.B_BY_A
    return Majorization.INCOMPARABLE


IDENTITY_FORMS = ((5.0, RoundingRule.UPWARD), (5.5, RoundingRule.STANDARD), (6.0, RoundingRule.DOWNWARD))


def identity_forms(roster: Roster, house_size: int, exponent: float = 1.0) -> list[SeatVector]:
    lw = roster.log_weights(exponent)
    return [composite(lw, house_size, base, rule) for base, rule in IDENTITY_FORMS]


def identity_check(roster: Roster, house_size: int, exponent: float = 1.0) -> bool:
    """Whether 5+Upw, 5.5+Std and 6+Dwn give the same composition."""
    first, *rest = identity_forms(roster, house_size, exponent)
    return all(v == first for v in rest)
