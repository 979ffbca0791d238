"""Domain types shared across the package, and the bundled EU27 roster."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional, Sequence


class ApportionmentError(ValueError):
    """Base class for every error raised by this package."""


class RosterError(ApportionmentError):
    pass


class InfeasibleError(ApportionmentError):
    pass


@dataclass(frozen=True)
class MemberState:
    code: str
    name: str
    population: int

    def __post_init__(self):
        if not self.code:
            raise RosterError("state code must be nonempty")
        if isinstance(self.population, bool) or not isinstance(self.population, int):
            raise RosterError(f"{self.code}: population must be an integer")
        if self.population < 1:
            raise RosterError(f"{self.code}: population must be positive, got {self.population}")


@dataclass(frozen=True)
class Roster:
    """States ordered largest population first; equal populations by code.

    The constructor sorts, so callers may pass states in any order.
    """

    states: tuple[MemberState, ...]

    def __post_init__(self):
        states = tuple(sorted(self.states, key=lambda s: (-s.population, s.code)))
        if not states:
            raise RosterError("roster must contain at least one state")
        codes = [s.code for s in states]
        if len(set(codes)) != len(codes):
            dupes = sorted({c for c in codes if codes.count(c) > 1})
            raise RosterError(f"duplicate state code(s): {', '.join(dupes)}")
        object.__setattr__(self, "states", states)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, index: int) -> MemberState:
        return self.states[index]

    @property
    def codes(self) -> list[str]:
        return [s.code for s in self.states]

    @property
    def populations(self) -> list[int]:
        return [s.population for s in self.states]

    @property
    def total_population(self) -> int:
        return sum(self.populations)

    def log_weights(self, exponent: float = 1.0) -> list[float]:
        """Natural logs of the power-weighted indices ``p**exponent``."""
        return [exponent * math.log(p) for p in self.populations]

    def weighted_indices(self, exponent: float) -> list[float]:
        return [float(p) ** exponent for p in self.populations]


@dataclass(frozen=True)
class SeatVector:
    """Integer seats aligned with a roster's order."""

    seats: tuple[int, ...]

    def __post_init__(self):
        seats = tuple(int(s) for s in self.seats)
        if any(s < 0 for s in seats):
            raise ApportionmentError(f"negative seat count in {seats}")
        object.__setattr__(self, "seats", seats)

    @property
    def total(self) -> int:
        return sum(self.seats)

    def __len__(self) -> int:
        return len(self.seats)

    def __iter__(self):
        return iter(self.seats)

    def __getitem__(self, index: int) -> int:
        return self.seats[index]

    def shifted(self, offset: int) -> "SeatVector":
        return SeatVector(tuple(s + offset for s in self.seats))


@dataclass(frozen=True)
class ExponentRange:
    """Exponents over which a remaining-seat vector stays the same.

    ``lower`` may be 0 and ``upper`` may be ``math.inf`` for the two extreme
    ranges. ``boundary_tie`` is the pair ``(i, j)`` (roster indices) whose
    critical exponent is ``upper``: just above it, state ``j`` hands one seat
    to state ``i``. ``lower_tie`` is the analogous pair at ``lower``.
    """

    lower: float
    upper: float
    vector: SeatVector
    boundary_tie: Optional[tuple[int, int]] = None
    lower_tie: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ApportionmentError(f"empty exponent range [{self.lower}, {self.upper}]")

    @property
    def bounded(self) -> bool:
        return self.lower > 0 and math.isfinite(self.upper)

    def __contains__(self, exponent: float) -> bool:
        return self.lower <= exponent <= self.upper


@dataclass(frozen=True)
class DivisorInterval:
    """Divisors ``D`` in ``[d_min, d_max)`` that reproduce a seat vector."""

    d_min: float
    d_max: float
    nice: float
    log_min: float = field(default=-math.inf, compare=False)
    log_max: float = field(default=math.inf, compare=False)

    def __contains__(self, divisor: float) -> bool:
        return self.d_min <= divisor < self.d_max


@dataclass(frozen=True)
class ApportionmentProblem:
    roster: Roster
    house_size: int = 751
    base_seats: int = 5
    cap: int = 96
    exponent: float = 1.0

    def __post_init__(self):
        n = len(self.roster)
        if self.house_size < 1 or self.base_seats < 0 or self.cap < 1:
            raise InfeasibleError("house size and cap must be positive, base seats nonnegative")
        if self.house_size < (self.base_seats + 1) * n:
            raise InfeasibleError(
                f"house of {self.house_size} cannot give {n} states "
                f"{self.base_seats + 1} seats each"
            )
        if self.cap < self.base_seats + 1:
            raise InfeasibleError(f"cap {self.cap} is below the floor of {self.base_seats + 1}")
        if not self.exponent > 0:
            raise InfeasibleError(f"exponent must be positive, got {self.exponent}")

    @property
    def remaining_seats(self) -> int:
        return self.house_size - self.base_seats * len(self.roster)


def _parse_population(code: str, text: str) -> int:
    text = text.strip()
    if not text.isdigit():
        raise RosterError(f"{code}: population {text!r} is not a positive integer")
    return int(text)


def load_roster(source: str | io.TextIOBase | Iterable[str]) -> Roster:
    """Parse ``code,name,population`` text (with header) into a Roster.

    ``source`` is either the CSV text itself or an iterable of lines.
    """
    lines = source.splitlines() if isinstance(source, str) else source
    reader = csv.DictReader(line for line in lines if line.strip())
    if reader.fieldnames is None:
        raise RosterError("roster is empty")
    fields = [f.strip() for f in reader.fieldnames]
    if fields[:3] != ["code", "name", "population"]:
        raise RosterError(f"expected header 'code,name,population', got {','.join(fields)!r}")
    reader.fieldnames = fields
    states = []
    for lineno, row in enumerate(reader, start=2):
        if None in row or any(row.get(k) is None for k in fields[:3]):
            raise RosterError(f"line {lineno}: expected 3 fields")
        code = row["code"].strip()
        states.append(MemberState(code, row["name"].strip(), _parse_population(code, row["population"])))
    if not states:
        raise RosterError("roster has a header but no states")
    return Roster(tuple(states))


def read_roster(path: str) -> Roster:
    with open(path, encoding="utf-8", newline="") as fh:
        return load_roster(fh.read())


def _data_text(name: str) -> str:
    return resources.files("euparl.data").joinpath(name).read_text(encoding="utf-8")


def builtin_eu27() -> Roster:
    """EU27 populations on 1 January 2011 (Eurostat)."""
    return load_roster(_data_text("eu27_2011.csv"))


def reference_columns() -> dict[str, dict[str, int]]:
    """Static comparison compositions keyed by column name, then state code.

    ``status_quo`` is the 754-seat composition in force in 2011;
    ``parabolic`` is a published alternative allotment. Both are data only.
    """
    out: dict[str, dict[str, int]] = {}
    for row in csv.DictReader(io.StringIO(_data_text("reference_columns.csv"))):
        for key, value in row.items():
            if key != "code":
                out.setdefault(key, {})[row["code"]] = int(value)
    return out


def same_order(roster: Roster, vector: Sequence[int]) -> None:
    if len(vector) != len(roster):
        raise ApportionmentError(
            f"seat vector has {len(vector)} entries, roster has {len(roster)} states"
        )
