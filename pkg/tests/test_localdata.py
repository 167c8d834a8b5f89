import pytest

from bsdtwist.algebra.ntheory import kronecker, legendre_table
from bsdtwist.curve import make_curve, minimal_model
from bsdtwist.localdata import (
    NonMinimalModelError,
    ReductionClass,
    ReductionKind,
    conductor,
    local_data,
    reduction_class,
    root_number_semistable,
    tamagawa_product,
    tate_local_data,
    twist_root_number,
)

# (ainvs, p, kodaira, f, c_p, kind); multiplicative entries are decided by
# v_p(c4) = 0 and whether -c6 is a square mod p
HAND_TABLE = [
    ((0, -1, 1, -10, -20), 11, "I5", 1, 5, "split"),
    ((1, -1, 0, -10, -12), 2, "I10", 1, 2, "nonsplit"),
    ((1, -1, 0, -10, -12), 23, "I1", 1, 1, "split"),
    ((1, 0, 1, 4, -6), 2, "I6", 1, 2, "nonsplit"),
    ((1, 0, 1, 4, -6), 7, "I3", 1, 3, "split"),
    ((0, 0, 1, -1, 0), 37, "I1", 1, 1, "nonsplit"),
    ((0, 1, 1, -9, -15), 19, "I3", 1, 3, "split"),
    ((0, 0, 0, -1, 0), 2, "III", 5, 2, "additive"),       # 32a2: y^2 = x^3 - x
    ((0, 0, 1, 0, -7), 3, "IV*", 3, 3, "additive"),        # 27a1
    ((0, 1, 0, -1, 0), 2, "IV", 2, 3, "additive"),         # conductor 40
]


@pytest.mark.parametrize("ainvs,p,kod,f,c,kind", HAND_TABLE)
def test_hand_checked_table(ainvs, p, kod, f, c, kind):
    ld = tate_local_data(make_curve(*ainvs), p)
    assert (ld.kodaira, ld.conductor_exponent, ld.tamagawa, ld.reduction_kind.value) == (kod, f, c, kind)


def test_multiplicative_split_rule(oracles):
    """Split multiplicative reduction at odd p is decided by (-c6 / p)."""
    for c in oracles["curves"].values():
        E = make_curve(*c["minimal"])
        for ld in local_data(E).values():
            if ld.conductor_exponent == 1 and ld.p > 2:
                want = ReductionKind.SPLIT if kronecker(-E.c6, ld.p) == 1 else ReductionKind.NONSPLIT
                assert ld.reduction_kind is want


def _check(entry):
    E = make_curve(*entry["minimal"])
    got = local_data(E)
    assert sorted(got) == [e["p"] for e in entry["local"]]
    for e in entry["local"]:
        ld = got[e["p"]]
        assert ld.kodaira == e["kodaira"], (entry["minimal"], e)
        assert ld.conductor_exponent == e["f"], (entry["minimal"], e)
        assert ld.tamagawa == e["c"], (entry["minimal"], e)
        assert ld.reduction_kind.value == e["kind"], (entry["minimal"], e)
    assert conductor(E) == entry["conductor"]


def test_tate_matches_oracle_on_fixture(oracles):
    for c in oracles["curves"].values():
        _check(c)


def test_tate_matches_oracle_on_twists(oracles):
    for t in oracles["twists"]:
        _check(t)


def test_conductor_examples(e46):
    assert conductor(e46) == 46
    assert conductor(make_curve(0, 0, 0, -163, -930)) == 46
    assert conductor(make_curve(0, 0, 0, -163 * 25, -930 * 125)) == 1150


def test_tate_requires_minimal_model():
    E = make_curve(0, 0, 0, -163 * 2**4, -930 * 2**6)
    with pytest.raises(NonMinimalModelError):
        tate_local_data(E, 2)


def test_tamagawa_and_root_numbers(oracles, e46):
    assert tamagawa_product(e46) == 2
    assert root_number_semistable(e46) == 1
    for label, c in oracles["curves"].items():
        E = make_curve(*c["minimal"])
        if all(e["f"] == 1 for e in c["local"]):
            assert root_number_semistable(E) == oracles["root_numbers"][label], label


def test_twist_root_numbers(oracles):
    for t in oracles["twists"]:
        base = oracles["curves"].get(t["base"])
        if base is None:
            continue
        w = oracles["root_numbers"][t["base"]]
        assert twist_root_number(base["conductor"], t["d"], w) == t["root_number"], (t["base"], t["d"])
    with pytest.raises(ValueError):
        twist_root_number(46, 23)


def test_reduction_class(e46):
    assert reduction_class(e46, 3, 0) is ReductionClass.SUPERSINGULAR
    assert reduction_class(e46, 5, 4) is ReductionClass.ORDINARY
    assert reduction_class(e46, 23) is ReductionClass.SPLIT_MULT
    assert reduction_class(e46, 2) is ReductionClass.NONSPLIT_MULT
    with pytest.raises(ValueError):
        reduction_class(e46, 5)
