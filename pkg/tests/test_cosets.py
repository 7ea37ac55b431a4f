import pytest

from groupshift.cosets import (
    coset_of,
    enumerate_sublattices,
    finite_subgroup_table,
    hermite_normal_form,
    is_normal,
    make_coset_table,
    normal_subgroups,
    overlap_set,
    quotient_hom,
    schreier_generators,
    sublattice_coset_table,
    subgroup_context,
)
from groupshift.groups import FiniteGroup, FreeAbelianGroup, FreeGroup, GroupError

import oracles

Z = FreeAbelianGroup(1)
Z2 = FreeAbelianGroup(2)
F2 = FreeGroup(2)


def test_lattice_indices():
    assert sublattice_coset_table(Z2, [(2, 0), (0, 2)]).index == 4
    assert sublattice_coset_table(Z2, [(1, 1), (1, -1)]).index == 2
    t = sublattice_coset_table(Z, [(3,)])
    assert t.index == 3
    assert t.transversal == ((0,), (1,), (2,))


def test_coset_of_parity_lattice():
    t = sublattice_coset_table(Z2, [(1, 1), (1, -1)])
    assert coset_of(t, (0, 0)) == 0
    assert coset_of(t, (1, 0)) == 1
    assert coset_of(t, (1, 1)) == 0
    assert coset_of(t, (5, -3)) == 0


def test_walk_agrees_with_lattice_reduction():
    t = sublattice_coset_table(Z2, [(2, 1), (0, 3)])
    for a in range(-4, 5):
        for b in range(-4, 5):
            g = (a, b)
            word_walk = t.walk(0, Z2.identity())
            for i, e in Z2.to_word(g):
                for _ in range(abs(e)):
                    word_walk = t.step(word_walk, i, 1 if e > 0 else -1)
            assert word_walk == coset_of(t, g)


def test_hermite_normal_form():
    assert hermite_normal_form([(1, 1), (1, -1)]) == ((1, 1), (0, 2))
    assert hermite_normal_form([(0, 2), (2, 0)]) == ((2, 0), (0, 2))
    with pytest.raises(GroupError):
        hermite_normal_form([(1, 1), (2, 2)])


def test_index_two_sublattices_in_order():
    assert list(enumerate_sublattices(2, 2)) == [((1, 0), (0, 2)), ((1, 1), (0, 2)), ((2, 0), (0, 1))]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_sublattice_count_matches_subgroup_oracle(n):
    assert len(list(enumerate_sublattices(2, n))) == len(oracles.subgroups_of_order(n))


def test_sublattices_have_requested_index():
    for basis in enumerate_sublattices(3, 4):
        assert sublattice_coset_table(3, basis).index == 4


def test_inconsistent_action_rejected():
    # a and b do not commute on these cosets, but Z^2 is abelian
    with pytest.raises(GroupError, match="coset action inconsistent"):
        make_coset_table(Z2, [[1, 2, 0], [1, 0, 2]])
    with pytest.raises(GroupError, match="coset action inconsistent"):
        make_coset_table(F2, [[0, 0], [1, 0]])


def test_overlap_sets():
    two = sublattice_coset_table(Z, [(2,)])
    assert overlap_set(two, [(0,), (1,)]) == [(0,)]
    assert overlap_set(two, [(0,), (1,), (2,)]) == [(0,), (2,), (-2,)]
    whole = sublattice_coset_table(Z, [(1,)])
    assert overlap_set(whole) == [(0,)]


def test_normality():
    assert is_normal(sublattice_coset_table(Z2, [(2, 1), (0, 3)]))
    assert is_normal(make_coset_table(F2, [[1, 0], [0, 1]]))  # index 2
    assert is_normal(make_coset_table(F2, [[1, 2, 0], [0, 1, 2]]))
    assert not is_normal(make_coset_table(F2, [[1, 2, 0], [1, 0, 2]]))


def test_quotients():
    q = quotient_hom(sublattice_coset_table(Z, [(2,)]))
    assert q.target.order == 2
    klein = quotient_hom(sublattice_coset_table(Z2, [(2, 0), (0, 2)])).target
    assert klein.order == 4
    assert all(klein.mul(g, g) == klein.identity() for g in klein.elements())
    parity = quotient_hom(sublattice_coset_table(Z2, [(1, 1), (1, -1)]))
    assert parity((1, 0)) == 1 and parity((3, 1)) == 0
    with pytest.raises(GroupError):
        quotient_hom(make_coset_table(F2, [[1, 2, 0], [1, 0, 2]]))


def test_quotient_kernel_is_schreier_generators():
    t = sublattice_coset_table(Z2, [(2, 0), (0, 2)])
    q = quotient_hom(t)
    assert set(q.kernel) == set(schreier_generators(t))
    assert all(q(k) == 0 for k in q.kernel)


def test_free_subgroup_context_round_trip():
    t = make_coset_table(F2, [[1, 2, 0], [1, 0, 2]])
    sub = subgroup_context(t)
    assert sub.context.rank == 4  # index * (rank - 1) + 1
    for g in F2.ball(4):
        if coset_of(t, g) == 0:
            assert sub.to_ambient(sub.from_ambient(g)) == g


def test_lattice_subgroup_context():
    t = sublattice_coset_table(Z2, [(1, 1), (0, 2)])
    sub = subgroup_context(t)
    assert sub.to_ambient((1, 0)) == (1, 1)
    assert sub.from_ambient((3, 5)) == (3, 1)
    with pytest.raises(GroupError):
        sub.from_ambient((1, 0))


def test_finite_subgroups():
    C6 = FiniteGroup.cyclic(6)
    subs = normal_subgroups(C6)
    assert sorted(len(s) for s in subs) == [1, 2, 3, 6]
    t = finite_subgroup_table(C6, [0, 3])
    assert t.index == 3
    sub = subgroup_context(t)
    assert sub.context.order == 2
