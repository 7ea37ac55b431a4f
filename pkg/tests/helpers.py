"""Small SFTs and configurations shared by the test modules."""

from groupshift.cosets import quotient_hom, sublattice_coset_table
from groupshift.groups import FreeAbelianGroup, HeisenbergGroup, make_homomorphism
from groupshift.shift import Alphabet, PeriodicConfiguration, make_pattern, make_sft

Z = FreeAbelianGroup(1)
Z2 = FreeAbelianGroup(2)
H3 = HeisenbergGroup()
BIN = Alphabet(("0", "1"))


def zq(p: int):
    return quotient_hom(sublattice_coset_table(Z, [(p,)]))


def zconf(word) -> PeriodicConfiguration:
    return PeriodicConfiguration(zq(len(word)), tuple(word))


def z_sft(words, name: str = "", alphabet=BIN):
    """Z-SFT forbidding the given words on consecutive cells starting at 0."""
    pats = [make_pattern(Z, {(i,): a for i, a in enumerate(w)}) for w in words]
    return make_sft(Z, alphabet, pats, name)


def golden():
    return z_sft(["11"], "golden-mean")


def empty_z():
    return z_sft(["00", "01", "11"], "empty")


def checkerboard():
    pats = [make_pattern(Z2, {(0, 0): a, e: a}) for e in ((1, 0), (0, 1)) for a in "01"]
    return make_sft(Z2, BIN, pats, "checkerboard")


def lattice_conf(basis, rule) -> PeriodicConfiguration:
    """Configuration over Z^d/L labelled by ``rule(transversal element)``."""
    table = sublattice_coset_table(len(basis), basis)
    return PeriodicConfiguration(quotient_hom(table), tuple(rule(t) for t in table.transversal))


def checker_point():
    return lattice_conf([(2, 0), (0, 2)], lambda t: "0" if sum(t) % 2 == 0 else "1")


def heis_to_z2():
    return make_homomorphism(H3, Z2, [(1, 0), (0, 1), (0, 0)], kernel=[(0, 0, 1)], surjective=False)
