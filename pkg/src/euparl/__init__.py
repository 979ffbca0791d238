"""Seat apportionment for the European Parliament.

Cambridge Compromise (base seats + upward-rounded divisor method + cap) and
its power-weighted variant, where populations are raised to an exponent
chosen so that the largest state lands exactly on the cap.
"""

__version__ = "0.1.0"

from .model import (
    ApportionmentError,
    ApportionmentProblem,
    DivisorInterval,
    ExponentRange,
    InfeasibleError,
    MemberState,
    Roster,
    RosterError,
    SeatVector,
    builtin_eu27,
    load_roster,
)
from .divisor import RoundingRule, TieError, apportion, composite, divisor_interval
from .powerlaw import (
    critical_exponent,
    exponent_range,
    init_exponent,
    nice_exponent,
    seat_bias_largest,
    solve_target,
)
from .camcom import (
    Composition,
    camcom_apportion,
    check_degressive,
    identity_check,
    majorization_compare,
    power_variant,
)
