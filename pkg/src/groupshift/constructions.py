"""SFT-to-SFT constructions and the matching maps on configurations."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Sequence

from .cosets import (
    CosetTable,
    Subgroup,
    coset_of,
    covers,
    induced_quotient,
    is_normal,
    overlap_set,
    quotient_hom,
    schreier_generators,
    subgroup_context,
)
from .groups import Element, GroupContext, GroupError, Homomorphism
from .shift import (
    SFT,
    Alphabet,
    Pattern,
    PeriodicConfiguration,
    ShiftError,
    joint_quotient,
    make_pattern,
    make_sft,
    member,
    minimize,
    normalize_support,
    union_support,
)

log = logging.getLogger(__name__)

BLOCK_CAP = 10**6


class NotInShiftError(ShiftError):
    """A configuration violates the shift a map is defined on."""


def block_letter(letters: Sequence[str]) -> str:
    return "|".join(letters)


def pair_letter(a: str, b: str) -> str:
    return f"({a},{b})"


# -- higher block shift -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class HigherBlockSystem:
    source: SFT
    subgroup: Subgroup
    blocks: tuple                 # T, ambient elements in canonical order
    coset_reps: tuple | None      # T', when T = T' * omega
    omega: tuple | None
    block_alphabet: Alphabet
    block_tuples: tuple           # block letter index -> tuple of source letters
    overlap: tuple                # E = H n T T^-1, ambient elements
    overlap_patterns: tuple[Pattern, ...]
    encoding_patterns: tuple[Pattern, ...]
    image_shift: SFT              # I, cut out by the overlap patterns
    shift: SFT                    # I n J (equal to I when built from a raw T)

    @property
    def table(self) -> CosetTable:
        return self.subgroup.table

    def block_of(self, letter: str) -> tuple[str, ...]:
        return self.block_tuples[self.block_alphabet.index(letter)]


def higher_block_sft(
    sft: SFT,
    table: CosetTable,
    coset_reps: Sequence[Element] | None = None,
    omega: Sequence[Element] | None = None,
    blocks: Sequence[Element] | None = None,
    literal: bool = False,
    cap: int = BLOCK_CAP,
) -> HigherBlockSystem:
    """Higher block presentation of ``sft`` over the subgroup of ``table``.

    With ``blocks`` (any finite T with HT = G) only the overlap shift I is
    built.  Otherwise T = T' * omega, where T' defaults to the table's
    transversal and omega to the union of forbidden supports plus the
    identity, and the encoding patterns J are added.

    Overlap constraints are emitted on pair supports ``{1, h}`` for
    ``h`` in E; ``literal=True`` emits them on all of E instead, which
    defines the same shift.
    """
    g = sft.group
    if table.group != g:
        raise GroupError("subgroup table and SFT use different groups")
    sub = subgroup_context(table)
    if blocks is not None:
        T = g.sorted(g.check(t) for t in blocks)
        reps = om = None
    else:
        reps = tuple(g.check(t) for t in (coset_reps if coset_reps is not None else table.transversal))
        if sorted(coset_of(table, t) for t in reps) != list(range(table.index)):
            raise GroupError("T' must contain exactly one representative per coset")
        om = g.sorted(omega) if omega is not None else union_support(sft)
        if g.identity() not in om:
            raise ShiftError("omega must contain the identity")
        oms = set(om)
        for p in sft.forbidden:
            if not set(p.support) <= oms:
                raise ShiftError("SFT is not normalized: a forbidden support leaves omega")
        T = g.sorted(g.mul(t, w) for t in reps for w in om)
        om = tuple(om)
    if not covers(table, T):
        raise GroupError("H T does not cover the group")
    A = sft.alphabet.letters
    if len(A) ** len(T) > cap:
        raise ShiftError(f"block alphabet of size {len(A)}^{len(T)} exceeds cap {cap}")
    tuples = tuple(itertools.product(A, repeat=len(T)))
    letters = tuple(block_letter(b) for b in tuples)
    pos = {t: i for i, t in enumerate(T)}
    E = overlap_set(table, T)
    ctx = sub.context
    one = ctx.identity()

    checks = {}
    for h in E:
        if h == g.identity():
            continue
        hi = g.inv(h)
        pairs = [(pos[t], pos[g.mul(hi, t)]) for t in T if g.mul(hi, t) in pos]
        if pairs:
            checks[h] = pairs

    overlap_patterns: list[Pattern] = []
    if literal:
        Eh = [sub.from_ambient(h) for h in E]
        idx_one = E.index(g.identity())
        if len(letters) ** len(E) > cap:
            raise ShiftError("literal overlap pattern set exceeds cap")
        for combo in itertools.product(range(len(letters)), repeat=len(E)):
            b1 = tuples[combo[idx_one]]
            if any(
                b1[i] != tuples[combo[E.index(h)]][j] for h, pairs in checks.items() for i, j in pairs
            ):
                overlap_patterns.append(make_pattern(ctx, zip(Eh, (letters[c] for c in combo))))
    else:
        for h, pairs in checks.items():
            hh = sub.from_ambient(h)
            left = [i for i, _ in pairs]
            right = [j for _, j in pairs]
            for b1, l1 in zip(tuples, letters):
                key = tuple(b1[i] for i in left)
                for b2, l2 in zip(tuples, letters):
                    if tuple(b2[j] for j in right) != key:
                        overlap_patterns.append(make_pattern(ctx, {one: l1, hh: l2}))

    encoding: list[Pattern] = []
    if reps is not None:
        spots = [[pos[g.mul(t, w)] for w in p.support] for t in reps for p in sft.forbidden]
        pats = [p.letters for t in reps for p in sft.forbidden]
        for b, l in zip(tuples, letters):
            if any(all(b[i] == a for i, a in zip(sp, pl)) for sp, pl in zip(spots, pats)):
                encoding.append(Pattern((one,), (l,)))

    I = make_sft(ctx, letters, overlap_patterns, name=f"I({sft.name})" if sft.name else "")
    full = make_sft(ctx, letters, overlap_patterns + encoding, name=f"HB({sft.name})" if sft.name else "")
    return HigherBlockSystem(
        sft, sub, tuple(T), reps, om, Alphabet(letters), tuples, tuple(E),
        I.forbidden, tuple(encoding), I, full,
    )


def restrict_quotient(x: PeriodicConfiguration, sub: Subgroup) -> tuple[Homomorphism, list[int]]:
    """``x``'s quotient map restricted to the subgroup, onto its image."""
    q = x.quotient
    images = tuple(q(sub.to_ambient(sub.context.gen(i))) for i in range(sub.context.rank))
    return Homomorphism(sub.context, q.target, images).corestrict()


def hb_encode(system: HigherBlockSystem, x: PeriodicConfiguration) -> PeriodicConfiguration:
    """The block configuration ``z(h)(t) = x(h t)`` over the subgroup."""
    if not member(x, system.source):
        raise NotInShiftError("configuration is not in the source SFT")
    qz, members = restrict_quotient(x, system.subgroup)
    Q = x.cells
    offsets = [x.quotient(t) for t in system.blocks]
    labels = tuple(
        block_letter([x.labeling[Q.mul(c, o)] for o in offsets]) for c in members
    )
    return PeriodicConfiguration(qz, labels)


def hb_decode(system: HigherBlockSystem, z: PeriodicConfiguration) -> PeriodicConfiguration:
    """Inverse of ``hb_encode``: ``x(h t) = z(h)(t)``."""
    if not member(z, system.image_shift):
        raise NotInShiftError("not in I: block configuration has an overlap violation")
    sub = system.subgroup
    g = sub.ambient
    table = sub.table
    rep: dict[int, tuple[int, Element]] = {}
    for k, t in enumerate(system.blocks):
        rep.setdefault(coset_of(table, t), (k, t))
    hom, reps = induced_quotient(sub, z.quotient)
    labels = []
    for r in reps:
        k, t = rep[coset_of(table, r)]
        h = sub.from_ambient(g.mul(r, g.inv(t)))
        labels.append(system.block_of(z.labeling[z.quotient(h)])[k])
    return minimize(PeriodicConfiguration(hom, tuple(labels)))


# -- products -----------------------------------------------------------------

def product_sft(s1: SFT, s2: SFT, common_window: bool = False, cap: int = BLOCK_CAP) -> SFT:
    """SFT on letter pairs whose members are exactly the pairs of members.

    By default each forbidden pattern keeps its own support and is paired
    with every labeling of that support by the other alphabet.  With
    ``common_window=True`` both factors are first normalized to the union
    Omega of all supports, giving the full ``P x B^Omega  u  A^Omega x Q``
    set; the shift is the same either way.
    """
    if s1.group != s2.group:
        raise ShiftError("product needs SFTs over the same group")
    g = s1.group
    A, B = s1.alphabet.letters, s2.alphabet.letters
    C = [pair_letter(a, b) for a in A for b in B]
    if common_window:
        omega = g.sorted({w for s in (s1, s2) for p in s.forbidden for w in p.support})
        first = normalize_support(s1, omega).forbidden if s1.forbidden else ()
        second = normalize_support(s2, omega).forbidden if s2.forbidden else ()
    else:
        first, second = s1.forbidden, s2.forbidden
    size = sum(len(B) ** len(p) for p in first) + sum(len(A) ** len(q) for q in second)
    if size > cap:
        raise ShiftError(f"product pattern set of size {size} exceeds cap {cap}")
    out = []
    for p in first:
        for bs in itertools.product(B, repeat=len(p)):
            out.append(Pattern(p.support, tuple(map(pair_letter, p.letters, bs))))
    for q in second:
        for as_ in itertools.product(A, repeat=len(q)):
            out.append(Pattern(q.support, tuple(map(pair_letter, as_, q.letters))))
    name = f"{s1.name}x{s2.name}" if s1.name and s2.name else ""
    return make_sft(g, C, out, name)


def product_configuration(x1: PeriodicConfiguration, x2: PeriodicConfiguration) -> PeriodicConfiguration:
    hom, pairs = joint_quotient(x1.quotient, x2.quotient)
    return PeriodicConfiguration(
        hom, tuple(pair_letter(x1.labeling[a], x2.labeling[b]) for a, b in pairs)
    )


def project_configuration(x: PeriodicConfiguration, s1: SFT, s2: SFT, component: int) -> PeriodicConfiguration:
    split = {pair_letter(a, b): (a, b) for a in s1.alphabet for b in s2.alphabet}
    return PeriodicConfiguration(x.quotient, tuple(split[c][component] for c in x.labeling))


# -- Fix(N) and the locked shift ----------------------------------------------

def fix_sft(alphabet: Alphabet | Sequence[str], group: GroupContext, generators: Sequence[Element]) -> SFT:
    """Configurations fixed by the normal subgroup generated by ``generators``.

    Forbids ``p`` on ``{1, a}`` with ``p(a) != p(1)`` for each ``a`` in the
    symmetrized generator list.
    """
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    if not generators:
        raise ShiftError("Fix needs at least one generator")
    one = group.identity()
    sym = []
    for a in generators:
        group.check(a)
        if a == one:
            log.warning("skipping identity generator in Fix")
            continue
        sym.extend([a, group.inv(a)])
    pats = [
        make_pattern(group, {one: b, a: c})
        for a in group.sorted(sym)
        for b in alphabet
        for c in alphabet
        if b != c
    ]
    return make_sft(group, alphabet, pats)


def locked_sft(table: CosetTable) -> SFT:
    """The locked shift of a finite-index normal subgroup N, on alphabet T.

    Members are exactly the configurations whose stabilizer is N.
    """
    if not is_normal(table):
        raise GroupError("locked shift requires a normal subgroup")
    g = table.group
    T = table.transversal
    letters = [g.format(t) for t in T]
    gens = schreier_generators(table)
    fixed = fix_sft(letters, g, gens).forbidden if gens else ()
    one = g.identity()
    distinct = [
        make_pattern(g, {one: a, t: a}) for t in T if t != one for a in letters
    ]
    return make_sft(g, letters, list(fixed) + distinct)


def locked_witness(table: CosetTable) -> PeriodicConfiguration:
    """``y(t n) = t``: each element labelled by its coset representative."""
    q = quotient_hom(table)
    return PeriodicConfiguration(q, tuple(table.group.format(t) for t in table.transversal))


# -- induced SFT on an overgroup ----------------------------------------------

def induce_sft(sft: SFT, sub: Subgroup, coords: str = "subgroup") -> SFT:
    """The same forbidden patterns, read as patterns on the ambient group.

    With ``coords="subgroup"`` supports are elements of the subgroup's own
    context and are mapped through the embedding.  With ``coords="ambient"``
    the SFT is already written on the ambient group and every support
    element must lie in the subgroup.
    """
    g = sub.ambient
    if coords == "subgroup":
        if sft.group != sub.context:
            raise ShiftError("SFT is not over the subgroup's context")
        pats = [
            make_pattern(g, {sub.to_ambient(w): a for w, a in p.items()}) for p in sft.forbidden
        ]
    elif coords == "ambient":
        if sft.group != g:
            raise ShiftError("SFT is not over the ambient group")
        for p in sft.forbidden:
            for w in p.support:
                if coset_of(sub.table, w) != 0:
                    raise ShiftError(f"support element {g.format(w)} is outside the subgroup")
        pats = list(sft.forbidden)
    else:
        raise ValueError(f"unknown coordinate convention {coords!r}")
    return make_sft(g, sft.alphabet, pats, name=f"ind({sft.name})" if sft.name else "")


def subgroup_coordinates(sft: SFT, sub: Subgroup) -> SFT:
    """Rewrite an SFT written on the ambient group with supports inside the
    subgroup as an SFT over the subgroup's own context."""
    if sft.group != sub.ambient:
        raise ShiftError("SFT is not over the ambient group")
    pats = []
    for p in sft.forbidden:
        for w in p.support:
            if coset_of(sub.table, w) != 0:
                raise ShiftError(f"support element {sft.group.format(w)} is outside the subgroup")
        pats.append(make_pattern(sub.context, {sub.from_ambient(w): a for w, a in p.items()}))
    return make_sft(sub.context, sft.alphabet, pats, name=sft.name)


def restrict_configuration(y: PeriodicConfiguration, sub: Subgroup) -> PeriodicConfiguration:
    """``y`` restricted to the subgroup, as a configuration over its context."""
    q, members = restrict_quotient(y, sub)
    return PeriodicConfiguration(q, tuple(y.labeling[c] for c in members))


def induce_configuration(x: PeriodicConfiguration, sub: Subgroup) -> PeriodicConfiguration:
    """``x'(t h) = x(h)`` on the ambient group, for a normal subgroup."""
    table = sub.table
    if not is_normal(table):
        raise GroupError("inducing configurations requires a normal subgroup")
    g = sub.ambient
    hom, reps = induced_quotient(sub, x.quotient)
    labels = []
    for r in reps:
        t = table.transversal[coset_of(table, r)]
        labels.append(x.at(sub.from_ambient(g.mul(g.inv(t), r))))
    return minimize(PeriodicConfiguration(hom, tuple(labels)))


# -- pullback along a quotient map --------------------------------------------

def section(f: Homomorphism, targets: Sequence[Element], max_radius: int = 12) -> dict:
    """Shortest, then canonically least, preimage of each target element."""
    need = set(targets)
    found: dict = {}
    for r in range(max_radius + 1):
        for g in f.source.ball(r):
            v = f(g)
            if v in need and v not in found:
                found[v] = g
        if len(found) == len(need):
            return found
    missing = [f.target.format(v) for v in need if v not in found]
    raise GroupError(f"no preimage within radius {max_radius} for {missing}")


def pullback_sft(sbar: SFT, f: Homomorphism) -> SFT:
    """Transport ``sbar`` along ``f: G -> Q`` and intersect with Fix(ker f)."""
    if sbar.group != f.target:
        raise ShiftError("SFT must live on the codomain of the homomorphism")
    if f.kernel is None:
        raise GroupError("pullback needs kernel generators for the homomorphism")
    g = f.source
    cells = {w for p in sbar.forbidden for w in p.support}
    lift = section(f, sorted(cells, key=f.target.order_key))
    pats = [make_pattern(g, {lift[w]: a for w, a in p.items()}) for p in sbar.forbidden]
    kernel = [k for k in f.kernel if k != g.identity()]
    if kernel:
        pats.extend(fix_sft(sbar.alphabet, g, kernel).forbidden)
    return make_sft(g, sbar.alphabet, pats, name=f"pull({sbar.name})" if sbar.name else "")


def pullback_configuration(xbar: PeriodicConfiguration, f: Homomorphism) -> PeriodicConfiguration:
    """``F(xbar) = xbar o f``."""
    q, members = f.compose(xbar.quotient).corestrict()
    return PeriodicConfiguration(q, tuple(xbar.labeling[c] for c in members))
