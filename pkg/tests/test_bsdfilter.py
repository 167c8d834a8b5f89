import dataclasses
import math

import pytest

from bsdtwist.algebra.ntheory import factorize, fundamental_discriminant, is_fundamental_discriminant, kronecker
from bsdtwist.bsdfilter import (
    STEP_NAMES,
    Branch,
    IncompleteDataError,
    RankMismatchError,
    Reason,
    TwistReason,
    algorithm1,
    algorithm2,
    base_curve,
    enumerate_twists,
    generic_family,
    s_witness,
)
from bsdtwist.curve import is_squarefree, make_curve
from bsdtwist.localdata import twist_root_number
from bsdtwist.lseries import count_points_naive

CLZ = ["46a1", "69a1", "77c1", "94a1", "114b1", "141b1", "142c1"]
TRIVIAL = ["106d1", "115a1", "118c1", "118d1", "141e1"]

BRANCH_REASON = {
    Branch.TWO_TORSION_CLZ: Reason.LALG_CLZ,
    Branch.NO_TWO_TORSION_NEG_DISC: Reason.LALG_NEG,
    Branch.NO_TWO_TORSION_POS_DISC: Reason.LALG_POS,
}
STEP_REASON = {
    "conductor": Reason.CONDUCTOR,
    "a3": Reason.A3,
    "isogeny": Reason.ISOGENY,
    "ramification": Reason.RAMIFICATION,
    "optimality": Reason.OPTIMALITY,
    "manin": Reason.MANIN,
    "rank": Reason.RANK,
    "isogenous_curve": Reason.ISOGENOUS_CURVE,
    "witness": Reason.NO_WITNESS,
}


@pytest.fixture(scope="module")
def verdicts(records_by_label):
    return {label: algorithm1(None, records_by_label[label]) for label in CLZ + TRIVIAL}


def test_accepted_curves(verdicts):
    for label in CLZ:
        assert verdicts[label].accepted and verdicts[label].branch is Branch.TWO_TORSION_CLZ
        assert verdicts[label].s_witness is not None
    for label in TRIVIAL:
        assert verdicts[label].accepted
        assert verdicts[label].branch in (Branch.NO_TWO_TORSION_NEG_DISC, Branch.NO_TWO_TORSION_POS_DISC)
    assert verdicts["141e1"].branch is Branch.NO_TWO_TORSION_POS_DISC


@pytest.mark.parametrize("label", ["62a1", "66b1", "105a1", "141c1"])
def test_known_rejections(records_by_label, label):
    v = algorithm1(None, records_by_label[label])
    assert not v.accepted and v.branch is Branch.NONE
    assert v.reason is Reason.LALG_CLZ


def test_prime_conductor_rejected_first(records_by_label):
    v = algorithm1(None, records_by_label["11a1"])
    assert v.reason is Reason.CONDUCTOR


@pytest.mark.parametrize("label", CLZ + TRIVIAL)
def test_mutations_reject_at_the_negated_step(records_by_label, verdicts, label):
    rec = records_by_label[label]
    branch = verdicts[label].branch
    for step in STEP_NAMES:
        if step in ("isogenous_curve", "witness") and branch is not Branch.TWO_TORSION_CLZ:
            continue
        v = algorithm1(None, rec, negate=[step])
        want = BRANCH_REASON[branch] if step == "lalg" else STEP_REASON[step]
        assert not v.accepted and v.reason is want, (label, step, v.reason)


def test_database_fields(records_by_label, e46):
    rec = records_by_label["46a1"]
    with pytest.raises(IncompleteDataError, match="manin_constant"):
        algorithm1(None, dataclasses.replace(rec, manin_constant=None))
    with pytest.raises(RankMismatchError):
        algorithm1(None, dataclasses.replace(rec, rank=1))
    with pytest.raises(ValueError):
        algorithm1(make_curve(0, -1, 1, -10, -20), rec)
    v = algorithm1(None, dataclasses.replace(rec, two_isogenous_sha=1))
    assert v.accepted and "analytic-surrogate" not in v.tags
    v = algorithm1(None, dataclasses.replace(rec, two_isogenous_sha=4))
    assert v.reason is Reason.ISOGENOUS_CURVE
    v = algorithm1(e46, dataclasses.replace(rec, optimal=False))
    assert v.reason is Reason.OPTIMALITY


def test_strict_a3(records_by_label):
    rec = records_by_label["46a1"]
    assert algorithm1(None, rec, strict_a3=True).reason is Reason.A3


def test_determinism(records_by_label, verdicts):
    again = algorithm1(None, records_by_label["46a1"])
    assert again == verdicts["46a1"]


def test_s_witness(e46):
    q = s_witness(e46, 10**4)
    assert q == 5
    assert s_witness(e46, 2) is None
    base = base_curve(e46)
    for bound in (100, 1000):
        q = s_witness(e46, bound)
        assert q % 4 == 1 and 46 % q and (1 + q - base.table[q]) % 4 == 2


# -- twists ---------------------------------------------------------------------------


def brute_admissible(E, N, branch, d):
    """Conditions on d checked from scratch: naive a_p, brute-force roots, direct Kronecker symbols."""
    if math.gcd(d, N) != 1:
        return False
    ps = factorize(abs(d)).primes
    aps = {p: count_points_naive(E, p) for p in ps}
    if any(aps[p] % p == 0 for p in ps):
        return False
    D = fundamental_discriminant(d) if d != 1 else 1
    Nps = factorize(N).primes
    if branch is Branch.TWO_TORSION_CLZ:
        for p in ps:
            n = p + 1 - aps[p]
            if p % 4 != 1 or n % 2 or (n // 2) % 2 == 0:
                return False
        return d % 8 == 1 and all(kronecker(D, p) == 1 for p in Nps if p != 2)
    if d % 4 != 1:
        return False
    f = [E.b6, 2 * E.b4, E.b2, 4]
    for p in ps:
        disc = E.discriminant
        if disc % p == 0 or any(sum(c * x**i for i, c in enumerate(f)) % p == 0 for x in range(p)):
            return False
    if not all(kronecker(D, p) == 1 for p in Nps):
        return False
    return d > 0 or branch is Branch.NO_TWO_TORSION_NEG_DISC


@pytest.mark.parametrize("label", ["46a1", "106d1", "141e1", "115a1"])
def test_enumeration_against_brute_force(records_by_label, verdicts, label):
    rec = records_by_label[label]
    branch = verdicts[label].branch
    base = base_curve(rec.curve())
    got = [v.d for v in enumerate_twists(base, branch, -1500, 1500)]
    want = [d for d in range(-1500, 1501)
            if d not in (0, 1) and is_squarefree(d) and brute_admissible(base.E, base.conductor, branch, d)]
    assert got == want
    assert got == sorted(set(got))
    for d in got:
        assert algorithm2(base, branch, d).accepted


def test_algorithm2_examples(e46):
    b = Branch.TWO_TORSION_CLZ
    assert algorithm2(e46, b, 23 * 5).reason is TwistReason.GCD
    assert not algorithm2(e46, b, -3).accepted
    assert algorithm2(e46, b, 185).accepted
    with pytest.raises(ValueError):
        algorithm2(e46, b, 9 * 5)
    with pytest.raises(ValueError):
        algorithm2(e46, Branch.NO_TWO_TORSION_NEG_DISC, 5)
    assert enumerate_twists(e46, b, -1000, -1) == []


def test_branch_coherence(e46):
    for v in enumerate_twists(e46, Branch.TWO_TORSION_CLZ, 1, 20000):
        assert v.d > 0 and v.d % 8 == 1
        assert all(p % 4 == 1 for p in factorize(v.d).primes)


def test_generic_family(e46):
    fam = generic_family(e46, 3000)
    assert 1 not in fam
    assert [abs(d) for d in fam] == sorted(abs(d) for d in fam)
    for d in fam:
        assert is_fundamental_discriminant(d) and math.gcd(d, 46) == 1
        assert twist_root_number(46, d, 1) == 1
    brute = [d for n in range(2, 3001) for d in (-n, n)
             if is_fundamental_discriminant(d) and math.gcd(d, 46) == 1 and kronecker(d, -46) == 1]
    assert fam == brute
    with pytest.raises(ValueError):
        generic_family(make_curve(0, 0, 1, -1, 0), 100)
