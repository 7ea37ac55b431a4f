"""Shifts of finite type over finitely generated groups.

Groups (Z^d, free groups, the discrete Heisenberg group, finite groups),
coset tables, SFTs and periodic configurations, the constructions that move
SFTs between commensurable groups and along quotient maps, and searches
that emit independently checkable certificates.
"""

from .certificates import Certificate, Verification, verify_certificate
from .constructions import (
    fix_sft,
    hb_decode,
    hb_encode,
    higher_block_sft,
    induce_sft,
    locked_sft,
    product_sft,
    pullback_sft,
)
from .cosets import (
    CosetTable,
    make_coset_table,
    quotient_hom,
    sublattice_coset_table,
    subgroup_context,
)
from .groups import (
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupError,
    HeisenbergGroup,
    Homomorphism,
    make_homomorphism,
)
from .search import BudgetExceeded
from .shift import (
    SFT,
    Alphabet,
    PeriodicConfiguration,
    ShiftError,
    make_pattern,
    make_sft,
    member,
    stabilizer,
)
from .solvers import (
    ball_search,
    extension_push,
    g_invariant_search,
    periodic_enumerate,
    periodic_search_on_quotient,
    transfer_commensurable,
    z_analyze,
)

__all__ = [name for name in dir() if not name.startswith("_")]
