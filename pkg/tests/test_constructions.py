import itertools

import pytest

from groupshift.constructions import (
    NotInShiftError,
    fix_sft,
    hb_decode,
    hb_encode,
    higher_block_sft,
    induce_configuration,
    induce_sft,
    locked_sft,
    locked_witness,
    product_configuration,
    product_sft,
    project_configuration,
    pullback_configuration,
    pullback_sft,
    restrict_configuration,
    subgroup_coordinates,
)
from groupshift.cosets import make_coset_table, quotient_hom, sublattice_coset_table, subgroup_context
from groupshift.groups import FreeGroup, GroupError, identity_hom
from groupshift.shift import (
    PeriodicConfiguration,
    ShiftError,
    make_pattern,
    make_sft,
    member,
    normalize_support,
    stabilizer,
)
from groupshift.solvers import periodic_solutions

import oracles
from helpers import BIN, H3, Z, Z2, checkerboard, golden, heis_to_z2, lattice_conf, z_sft, zconf, zq

TWO_Z = sublattice_coset_table(Z, [(2,)])


# -- higher block ---------------------------------------------------------------

def test_higher_block_sizes_golden_over_2z():
    hb = higher_block_sft(golden(), TWO_Z)
    assert hb.blocks == ((0,), (1,), (2,))
    assert len(hb.block_alphabet) == 8
    assert hb.overlap == ((0,), (2,), (-2,))
    # blocks containing 11 at positions (0,1) or (1,2)
    assert sorted(hb.block_of(p.letters[0]) for p in hb.encoding_patterns) == [
        ("0", "1", "1"), ("1", "1", "0"), ("1", "1", "1")]


def test_block_letters_list_source_letters_in_block_order():
    hb = higher_block_sft(golden(), TWO_Z)
    assert hb.block_alphabet.letters[:2] == ("0|0|0", "0|0|1")


def test_overlap_forces_shared_cell():
    # z(h)(2) must equal z(h+2)(0): x(h+2) is read by two blocks
    hb = higher_block_sft(golden(), TWO_Z)
    ctx = hb.subgroup.context
    good = PeriodicConfiguration(_ctx_q(ctx, 1), ("0|1|0",))
    assert member(good, hb.image_shift)
    bad = PeriodicConfiguration(_ctx_q(ctx, 1), ("0|1|1",))
    assert not member(bad, hb.image_shift)
    with pytest.raises(NotInShiftError, match="not in I"):
        hb_decode(hb, bad)


def _ctx_q(ctx, p):
    return quotient_hom(sublattice_coset_table(ctx, [(p,)]))


def test_encode_examples():
    hb01 = higher_block_sft(golden(), TWO_Z, blocks=[(0,), (1,)])
    z = hb_encode(hb01, zconf("01"))
    assert z.cells.order == 1 and z.labeling == ("0|1",)
    assert hb_decode(hb01, z) == zconf("01")

    hb = higher_block_sft(golden(), TWO_Z)
    z = hb_encode(hb, zconf("01"))
    assert set(z.labeling) == {"0|1|0"}
    const = hb_encode(hb, zconf("0"))
    assert const.labeling == ("0|0|0",)


def test_encode_rejects_non_members():
    hb = higher_block_sft(golden(), TWO_Z)
    with pytest.raises(NotInShiftError):
        hb_encode(hb, zconf("1"))


def test_full_shift_source_has_no_encoding_patterns():
    hb = higher_block_sft(z_sft([]), TWO_Z, coset_reps=[(0,), (1,)], omega=[(0,)])
    assert hb.encoding_patterns == ()
    assert hb.shift == hb.image_shift


def test_literal_overlap_patterns_define_same_shift():
    pair = higher_block_sft(golden(), TWO_Z)
    lit = higher_block_sft(golden(), TWO_Z, literal=True)
    assert len(lit.overlap_patterns) == 384  # 8^3 triples minus the 128 consistent ones
    E = [pair.subgroup.from_ambient(h) for h in pair.overlap]
    assert normalize_support(pair.image_shift, E) == normalize_support(lit.image_shift, E)


def test_higher_block_requires_covering_blocks():
    with pytest.raises(GroupError):
        higher_block_sft(golden(), sublattice_coset_table(Z, [(3,)]), blocks=[(0,), (1,)])


def test_higher_block_round_trip_on_all_small_points():
    three = sublattice_coset_table(Z, [(3,)])
    hb = higher_block_sft(golden(), three)
    for p in range(1, 7):
        for word in oracles.legal_cycles("01", [{0: "1", 1: "1"}], p):
            x = zconf(word)
            z = hb_encode(hb, x)
            assert member(z, hb.shift)
            assert hb_decode(hb, z) == x


# -- product ----------------------------------------------------------------------

def test_product_counts():
    g = golden()
    prod = product_sft(g, g)
    assert len(prod.forbidden) == 7  # 4 + 4 with the shared (1,1)(1,1) pattern merged
    assert len(product_sft(g, g, common_window=True).forbidden) == 7
    assert len(prod.alphabet) == 4


def test_product_with_full_shift_tracks_first_factor():
    full = z_sft([])
    prod = product_sft(golden(), full)
    for w1 in ("0", "1", "01", "11"):
        for w2 in ("0", "1", "01"):
            x = product_configuration(zconf(w1), zconf(w2))
            assert member(x, prod) == member(zconf(w1), golden())


def test_product_of_full_shifts_is_full():
    assert product_sft(z_sft([]), z_sft([])).forbidden == ()


def test_product_projection():
    x = product_configuration(zconf("01"), zconf("0"))
    s = golden()
    assert project_configuration(x, s, s, 0) == zconf("01")
    assert project_configuration(x, s, s, 1) == zconf("0")


def test_common_window_form_agrees_on_members():
    s1 = z_sft(["11"])
    s2 = z_sft(["1"])
    a = product_sft(s1, s2)
    b = product_sft(s1, s2, common_window=True)
    for p in range(1, 5):
        for word in itertools.product(a.alphabet.letters, repeat=p):
            x = PeriodicConfiguration(zq(p), word)
            assert member(x, a) == member(x, b)


# -- Fix and locked shifts -----------------------------------------------------------

def test_fix_2z_has_four_points_on_z2_quotient():
    fix = fix_sft(["a", "b"], Z, [(2,)])
    sols = list(periodic_solutions(fix, zq(2)))
    assert len(sols) == 4
    assert not any(member(x, fix) for x in [PeriodicConfiguration(zq(3), ("a", "a", "b"))])


def test_fix_whole_group_gives_constants():
    fix = fix_sft(["a", "b", "c"], Z, [(1,)])
    assert [x.labeling for x in periodic_solutions(fix, zq(1))] == [("a",), ("b",), ("c",)]
    assert list(periodic_solutions(fix, zq(2))) == [
        PeriodicConfiguration(zq(2), (a, a)) for a in "abc"]


def test_fix_center_of_heisenberg():
    fix = fix_sft(BIN, H3, [(0, 0, 1)])
    f = heis_to_z2()
    xbar = lattice_conf([(1, 1), (0, 2)], lambda t: "0" if t == (0, 0) else "1")
    assert member(pullback_configuration(xbar, f), fix)


def test_fix_requires_generators():
    with pytest.raises(ShiftError):
        fix_sft(BIN, Z, [])


def test_locked_shift_2z():
    L = locked_sft(TWO_Z)
    y = locked_witness(TWO_Z)
    assert y == zconf("01")
    assert member(y, L)
    assert stabilizer(y)[1] == 2
    assert not member(zconf("0"), L)


def test_locked_shift_lattice_witness():
    t = sublattice_coset_table(Z2, [(2, 0), (0, 2)])
    L = locked_sft(t)
    y = locked_witness(t)
    assert len(L.alphabet) == 4
    assert member(y, L)
    assert stabilizer(y)[1] == 4


def test_locked_shift_whole_group():
    L = locked_sft(sublattice_coset_table(Z, [(1,)]))
    assert L.alphabet.letters == ("0",)
    assert member(zconf("0"), L)


def test_locked_shift_needs_normal_subgroup():
    F2 = FreeGroup(2)
    with pytest.raises(GroupError):
        locked_sft(make_coset_table(F2, [[1, 2, 0], [1, 0, 2]]))


# -- induced SFT and restriction ------------------------------------------------------

def test_induce_golden_from_2z():
    sub = subgroup_context(TWO_Z)
    s = make_sft(sub.context, BIN, [make_pattern(sub.context, {(0,): "1", (1,): "1"})])
    ind = induce_sft(s, sub)
    assert [p.support for p in ind.forbidden] == [((0,), (2,))]
    amb = make_sft(Z, BIN, [make_pattern(Z, {(0,): "1", (2,): "1"})])
    assert induce_sft(amb, sub, coords="ambient") == ind
    assert subgroup_coordinates(amb, sub) == s


def test_induce_full_shift():
    sub = subgroup_context(TWO_Z)
    assert induce_sft(make_sft(sub.context, BIN, []), sub).forbidden == ()


def test_induce_ambient_rejects_supports_outside_subgroup():
    with pytest.raises(ShiftError):
        induce_sft(golden(), subgroup_context(TWO_Z), coords="ambient")


def test_induced_configuration_lies_in_induced_shift():
    sub = subgroup_context(TWO_Z)
    s = make_sft(sub.context, BIN, [make_pattern(sub.context, {(0,): "1", (1,): "1"})])
    ind = induce_sft(s, sub)
    for word in ("0", "01", "001"):
        x = PeriodicConfiguration(_ctx_q(sub.context, len(word)), tuple(word))
        xp = induce_configuration(x, sub)
        assert member(xp, ind)
        assert restrict_configuration(xp, sub) == x


# -- pullback ------------------------------------------------------------------------

def test_pullback_checkerboard_to_heisenberg():
    f = heis_to_z2()
    pb = pullback_sft(checkerboard(), f)
    good = lattice_conf([(1, 1), (0, 2)], lambda t: "0" if t == (0, 0) else "1")
    assert member(pullback_configuration(good, f), pb)
    bad = lattice_conf([(1, 0), (0, 1)], lambda t: "0")
    assert not member(pullback_configuration(bad, f), pb)


def test_pullback_along_identity_is_same_shift():
    f = identity_hom(Z2)
    f = type(f)(f.source, f.target, f.images, ())
    assert pullback_sft(checkerboard(), f).forbidden == checkerboard().forbidden


def test_pullback_of_full_shift_over_z2_quotient_is_fix():
    q = quotient_hom(TWO_Z)
    full = make_sft(q.target, ["a", "b"], [])
    assert pullback_sft(full, q) == fix_sft(["a", "b"], Z, q.kernel)


def test_pullback_needs_kernel():
    f = heis_to_z2()
    f = type(f)(f.source, f.target, f.images, None)
    with pytest.raises(GroupError):
        pullback_sft(checkerboard(), f)
