import pytest
from hypothesis import given, strategies as st

from euparl.model import (
    ApportionmentProblem,
    InfeasibleError,
    MemberState,
    Roster,
    RosterError,
    SeatVector,
    builtin_eu27,
    load_roster,
    reference_columns,
)

from published_tables import CODES, POPULATIONS


def test_builtin_matches_published_populations(eu27):
    assert eu27.codes == CODES
    assert eu27.populations == POPULATIONS
    assert eu27.total_population == 501_103_425
    assert eu27[2].code == "UK" and eu27[2].population == 62_008_048


def test_builtin_strictly_decreasing(eu27):
    pops = eu27.populations
    assert all(a > b for a, b in zip(pops, pops[1:]))


def test_load_roster_sorts_descending():
    text = "code,name,population\nMT,Malta,412970\nDE,Germany,81802257\nLU,Luxembourg,502066\n"
    roster = load_roster(text)
    assert roster.codes == ["DE", "LU", "MT"]
    reversed_text = "code,name,population\n" + "\n".join(reversed(text.strip().splitlines()[1:]))
    assert load_roster(reversed_text) == roster


def test_load_roster_eu27_file_roundtrip(eu27):
    rows = ["code,name,population"] + [f"{s.code},{s.name},{s.population}" for s in reversed(eu27.states)]
    roster = load_roster("\n".join(rows))
    assert roster == eu27
    assert roster[0].population == 81_802_257 and roster[-1].population == 412_970


def test_singleton():
    roster = load_roster("code,name,population\nXX,X,1000")
    assert len(roster) == 1 and roster[0].population == 1000


@pytest.mark.parametrize(
    "text",
    [
        "",
        "code,name,population\n",
        "code,name,population\nAA,A,10\nAA,B,20",
        "code,name,population\nAA,A,0",
        "code,name,population\nAA,A,-5",
        "code,name,population\nAA,A,12.5",
        "code,name,population\nAA,A,1 000",
        "code,name,population\nAA,A",
        "id,label,count\nAA,A,10",
    ],
)
def test_load_roster_rejects(text):
    with pytest.raises(RosterError):
        load_roster(text)


def test_population_ties_broken_by_code():
    roster = Roster((MemberState("ZZ", "z", 5), MemberState("AA", "a", 5), MemberState("MM", "m", 9)))
    assert roster.codes == ["MM", "AA", "ZZ"]


@given(st.lists(st.integers(1, 10**9), min_size=1, max_size=30))
def test_sorting_is_a_permutation(pops):
    states = [MemberState(f"S{k}", f"s{k}", p) for k, p in enumerate(pops)]
    roster = Roster(tuple(states))
    assert sorted(roster.populations) == sorted(pops)
    assert roster.populations == sorted(pops, reverse=True)


def test_problem_defaults_and_validation(eu27):
    p = ApportionmentProblem(eu27)
    assert (p.house_size, p.base_seats, p.cap, p.exponent) == (751, 5, 96, 1.0)
    assert p.remaining_seats == 616
    with pytest.raises(InfeasibleError):
        ApportionmentProblem(eu27, house_size=27 * 6 - 1)
    with pytest.raises(InfeasibleError):
        ApportionmentProblem(eu27, cap=5)
    with pytest.raises(InfeasibleError):
        ApportionmentProblem(eu27, exponent=0)


def test_seat_vector_total():
    v = SeatVector((3, 2, 1))
    assert v.total == 6 and v.shifted(5).seats == (8, 7, 6)


def test_reference_columns_sums():
    refs = reference_columns()
    assert sum(refs["status_quo"].values()) == 754
    assert sum(refs["parabolic"].values()) == 751
    assert set(refs["status_quo"]) == set(builtin_eu27().codes)
