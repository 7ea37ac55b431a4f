import pytest

from groupshift.certificates import Certificate, EmptinessProof, exhaustion_digest, verify_certificate
from groupshift.cosets import sublattice_coset_table, subgroup_context
from groupshift.groups import FreeGroup, GroupError, identity_hom
from groupshift.search import BudgetExceeded
from groupshift.serialize import sft_digest
from groupshift.shift import PeriodicConfiguration, legal_partial, make_pattern, make_sft, member, stabilizer
from groupshift.solvers import (
    ball_search,
    extension_push,
    g_invariant_search,
    periodic_enumerate,
    periodic_search_on_quotient,
    periodic_solutions,
    quotients,
    transfer_commensurable,
    z_analyze,
)

import oracles
from helpers import BIN, Z, Z2, checkerboard, empty_z, golden, heis_to_z2, z_sft, zconf, zq

GOLDEN = [{0: "1", 1: "1"}]


# -- ball search -------------------------------------------------------------------

def test_ball_search_golden():
    cert = ball_search(golden(), 3)
    assert cert.kind == "legal-ball"
    assert verify_certificate(golden(), cert)
    assert legal_partial({(i,): "0101010"[i] for i in range(-3, 4)}, golden())


def test_ball_search_empty_example():
    cert = ball_search(empty_z(), 1)
    assert cert.kind == "empty-at-radius"
    assert cert.payload.nodes <= 8
    assert verify_certificate(empty_z(), cert)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_emptiness_is_monotone(n):
    assert ball_search(empty_z(), n).kind == "empty-at-radius"


def test_ball_search_full_shift_is_all_first_letter():
    cert = ball_search(z_sft([]), 2)
    assert set(cert.payload.labeling.values()) == {"0"}


# -- periodic search -------------------------------------------------------------------

def test_periodic_search_examples():
    assert periodic_search_on_quotient(golden(), zq(2)) == zconf("0")
    assert periodic_search_on_quotient(golden(), zq(2), exact=True).labeling == ("0", "1")
    assert periodic_search_on_quotient(golden(), zq(1)).labeling == ("0",)
    for p in range(1, 5):
        assert periodic_search_on_quotient(empty_z(), zq(p)) is None


@pytest.mark.parametrize("p", range(1, 7))
def test_periodic_search_complete_for_golden(p):
    found = [x.labeling for x in periodic_solutions(golden(), zq(p))]
    assert found == oracles.legal_cycles("01", GOLDEN, p)


def test_periodic_solutions_are_lexicographic():
    sols = [x.labeling for x in periodic_solutions(z_sft([]), zq(3))]
    assert sols == sorted(sols)
    assert len(sols) == 8


def test_periodic_enumerate_checkerboard():
    cert = periodic_enumerate(checkerboard(), 4)
    assert cert.provenance["index"] == 2
    assert cert.provenance["lattice"] == [[1, 1], [0, 2]]
    assert cert.provenance["visited"] == 3  # index 1, then (1,0),(0,2), then (1,1),(0,2)
    assert cert.stabilizer_index == 2
    assert verify_certificate(checkerboard(), cert)


def test_periodic_enumerate_golden_index_one():
    cert = periodic_enumerate(golden(), 1)
    assert cert.payload.labeling == ("0",)
    assert cert.stabilizer_index == 1


def test_periodic_enumerate_none():
    assert periodic_enumerate(empty_z(), 6) is None


def test_quotient_order_index_two():
    qs = [info for _, info in quotients(Z2, 2)]
    assert [i["index"] for i in qs] == [1, 2, 2, 2]


def test_free_group_needs_supplied_quotients():
    F2 = FreeGroup(2)
    s = make_sft(F2, BIN, [make_pattern(F2, {(): "1", (1,): "1"})])
    with pytest.raises(GroupError):
        periodic_enumerate(s, 4)


def _late_conflict():
    # x(k) != x(k+12) and x(k) != x(k+24) is an odd cycle: empty over two letters,
    # but a search only notices after a dozen cells are placed
    pats = [make_pattern(Z, {(0,): a, (d,): a}) for d in (12, 24) for a in "01"]
    return make_sft(Z, BIN, pats)


def test_budget_exhaustion_is_inconclusive():
    with pytest.raises(BudgetExceeded):
        periodic_search_on_quotient(_late_conflict(), zq(30), budget=50)
    assert periodic_search_on_quotient(_late_conflict(), zq(30), budget=10**6) is None


def test_periodic_enumerate_reports_inconclusive_when_nothing_found():
    with pytest.raises(BudgetExceeded):
        periodic_enumerate(_late_conflict(), 30, budget=50)


# -- invariant search ---------------------------------------------------------------------

def test_g_invariant_golden():
    cert = g_invariant_search(golden(), (2,), 3)
    lab = cert.payload.labeling
    assert all(lab[(i,)] == lab[(i + 2,)] for i in range(-3, 2))
    assert "evidence only" in cert.provenance["note"]
    assert verify_certificate(golden(), cert)


def test_g_invariant_empty_and_full():
    assert g_invariant_search(empty_z(), (1,), 2) is None
    cert = g_invariant_search(z_sft([]), (3,), 2)
    assert set(cert.payload.labeling.values()) == {"0"}


def test_g_invariant_rejects_identity():
    with pytest.raises(GroupError):
        g_invariant_search(golden(), (0,), 2)


# -- z analysis -----------------------------------------------------------------------------

def test_z_analyze_examples():
    g = z_analyze(golden())
    assert not g.empty and g.period == 1 and g.configuration.labeling == ("0",)
    assert z_analyze(empty_z()).empty
    alt = z_analyze(z_sft(["00", "11"]))
    assert alt.period == 2 and alt.configuration == zconf("01")


def test_z_analyze_wide_window():
    # forbid 000 and 111 and 0?1 patterns far apart
    s = z_sft(["000", "111"])
    r = z_analyze(s)
    assert r.period == oracles.z_oracle("01", [{0: "0", 1: "0", 2: "0"}, {0: "1", 1: "1", 2: "1"}])
    assert member(r.configuration, s)


def test_z_analyze_rejects_other_groups():
    with pytest.raises(GroupError):
        z_analyze(checkerboard())


# -- pipelines --------------------------------------------------------------------------------

def test_transfer_to_overgroup_golden():
    cert = transfer_commensurable(golden(), "to-overgroup", sublattice_coset_table(Z, [(2,)]))
    assert verify_certificate(golden(), cert)
    assert member(cert.payload, golden())
    assert cert.payload.cells.order == z_analyze(golden()).period


def test_transfer_to_subgroup_golden():
    two = sublattice_coset_table(Z, [(2,)])
    sub = subgroup_context(two)
    s = make_sft(sub.context, BIN, [make_pattern(sub.context, {(0,): "1", (1,): "1"})])
    cert = transfer_commensurable(s, "to-subgroup", two)
    assert verify_certificate(s, cert)
    # the ambient point's stabilizer lies inside 2Z
    assert cert.provenance["ambient_stabilizer_index"] % 2 == 0


def test_transfer_ambient_coordinates():
    two = sublattice_coset_table(Z, [(2,)])
    amb = make_sft(Z, BIN, [make_pattern(Z, {(0,): "1", (2,): "1"})])
    cert = transfer_commensurable(amb, "to-subgroup", two, coords="ambient")
    assert cert.payload.labeling == ("0",)


@pytest.mark.parametrize("direction", ["to-overgroup", "to-subgroup"])
def test_transfer_full_shift_gives_constant(direction):
    two = sublattice_coset_table(Z, [(2,)])
    cert = transfer_commensurable(z_sft([]), direction, two)
    assert cert.stabilizer_index == 1


def test_extension_push_checkerboard():
    cert = extension_push(checkerboard(), heis_to_z2(), 4)
    direct = periodic_enumerate(checkerboard(), 4)
    assert cert.stabilizer_index == 2
    assert cert.payload == direct.payload
    assert verify_certificate(checkerboard(), cert)


def test_extension_push_identity_and_full_shift():
    f = identity_hom(Z2)
    f = type(f)(f.source, f.target, f.images, ())
    cert = extension_push(checkerboard(), f, 4)
    assert cert.payload == periodic_enumerate(checkerboard(), 4).payload
    full = make_sft(Z2, BIN, [])
    assert extension_push(full, heis_to_z2(), 4).stabilizer_index == 1


# -- verification -------------------------------------------------------------------------------

def test_tampered_certificate_fails():
    cert = periodic_enumerate(checkerboard(), 4)
    x = cert.payload
    flipped = ("1" if x.labeling[0] == "0" else "0",) + x.labeling[1:]
    bad = Certificate(cert.kind, PeriodicConfiguration(x.quotient, flipped), cert.sft_digest,
                      cert.provenance, cert.stabilizer_index)
    v = verify_certificate(checkerboard(), bad)
    assert not v and "forbidden" in v.reason


def test_false_emptiness_claim_fails():
    s = golden()
    claim = Certificate("empty-at-radius", EmptinessProof(1, 0, exhaustion_digest(s, 1)), sft_digest(s))
    assert not verify_certificate(s, claim)


def test_digest_mismatch_fails():
    cert = periodic_enumerate(golden(), 2)
    v = verify_certificate(checkerboard(), cert)
    assert not v and v.reason == "sft digest mismatch"


def test_wrong_stabilizer_claim_fails():
    cert = periodic_enumerate(checkerboard(), 4)
    bad = Certificate(cert.kind, cert.payload, cert.sft_digest, cert.provenance, 4)
    assert not verify_certificate(checkerboard(), bad)


def test_stabilizer_of_found_points():
    cert = periodic_enumerate(z_sft(["00", "11"]), 4)
    assert stabilizer(cert.payload)[1] == 2
