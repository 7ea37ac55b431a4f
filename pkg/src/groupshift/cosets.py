"""Finite-index subgroups as coset tables.

A ``CosetTable`` records how each generator of the ambient group permutes
the right cosets ``Hg``.  Coset 0 is ``H`` itself.  Tables come from
``sublattice_coset_table`` (Z^d), ``finite_subgroup_table`` (finite groups)
or ``make_coset_table`` (any backend, user supplied and validated).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .groups import (
    Element,
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupContext,
    GroupError,
    Homomorphism,
    finite_image,
    perm_ops,
    relator_violation,
)


@dataclass(frozen=True, eq=False)
class CosetTable:
    group: GroupContext
    index: int
    action: tuple[tuple[int, ...], ...]
    transversal: tuple
    basis: tuple | None = None  # Hermite normal form rows, Z^d only
    inverse_action: tuple[tuple[int, ...], ...] = field(default=(), repr=False)

    def step(self, coset: int, gen: int, sign: int) -> int:
        return (self.action if sign > 0 else self.inverse_action)[gen][coset]

    def walk(self, coset: int, g: Element) -> int:
        """Coset reached from ``coset`` by right multiplication with ``g``."""
        if self.basis is not None and coset == 0:
            return _lattice_coset(self, g)
        for i, e in self.group.to_word(g):
            maps = self.action[i] if e > 0 else self.inverse_action[i]
            for _ in range(abs(e) % _cycle_bound(maps, coset)):
                coset = maps[coset]
        return coset

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CosetTable)
            and self.group == other.group
            and self.action == other.action
            and self.transversal == other.transversal
        )

    def __hash__(self) -> int:
        return hash((self.group, self.action, self.transversal))


def _cycle_bound(perm: Sequence[int], start: int) -> int:
    n, c = 1, perm[start]
    while c != start:
        c = perm[c]
        n += 1
    return n


def _invert(perm: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(perm)
    for i, j in enumerate(perm):
        out[j] = i
    return tuple(out)


def coset_of(table: CosetTable, g: Element) -> int:
    """Id of the coset ``Hg``; 0 exactly when ``g`` lies in ``H``."""
    return table.walk(0, table.group.check(g))


def in_subgroup(table: CosetTable, g: Element) -> bool:
    return coset_of(table, g) == 0


def make_coset_table(
    group: GroupContext,
    action: Sequence[Sequence[int]],
    transversal: Sequence[Element] | None = None,
) -> CosetTable:
    """Validate a user-supplied coset action and build its table.

    ``action[i][c]`` is the coset reached from ``c`` by generator ``i``.
    Without a transversal, one is found breadth-first from coset 0 using
    generators and inverses in rank order.
    """
    action = tuple(tuple(int(c) for c in row) for row in action)
    if len(action) != group.rank:
        raise GroupError(f"coset action needs one map per generator ({group.rank})")
    n = len(action[0]) if action else 1
    for i, row in enumerate(action):
        if len(row) != n or sorted(row) != list(range(n)):
            raise GroupError(f"coset action inconsistent: generator {group.gens[i]} is not a permutation")
    problem = relator_violation(group, action, perm_ops(n))
    if problem:
        raise GroupError(f"coset action inconsistent: {problem}")
    table = CosetTable(group, n, action, (), inverse_action=tuple(_invert(r) for r in action))
    reps = _bfs_transversal(table)
    if len(reps) != n:
        raise GroupError("coset action inconsistent: not transitive from coset 0")
    if transversal is None:
        transversal = [reps[c] for c in range(n)]
    table = CosetTable(group, n, action, tuple(group.check(t) for t in transversal),
                       inverse_action=table.inverse_action)
    check_transversal(table)
    return table


def check_transversal(table: CosetTable) -> None:
    t = table.transversal
    if len(t) != table.index:
        raise GroupError("transversal must have one element per coset")
    if t[0] != table.group.identity():
        raise GroupError("transversal must start with the identity")
    for i, g in enumerate(t):
        if coset_of(table, g) != i:
            raise GroupError(f"transversal element {table.group.format(g)} is not in coset {i}")


def _bfs_transversal(table: CosetTable) -> dict[int, Element]:
    g = table.group
    reps = {0: g.identity()}
    frontier = [0]
    while frontier:
        nxt = []
        for c in frontier:
            for i, s in g.letters():
                d = table.step(c, i, s)
                if d not in reps:
                    reps[d] = g.mul(reps[c], g.letter(i, s))
                    nxt.append(d)
        frontier = nxt
    return reps


# -- Z^d sublattices ------------------------------------------------------

def hermite_normal_form(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Upper-triangular row Hermite normal form of a full-rank integer lattice.

    Pivots are positive and entries above each pivot lie in ``[0, pivot)``.
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        raise GroupError("empty basis")
    d = len(m[0])
    if any(len(r) != d for r in m):
        raise GroupError("basis vectors must have equal dimension")
    r = 0
    for col in range(d):
        while True:
            nz = [i for i in range(r, len(m)) if m[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: (abs(m[i][col]), i))
            m[r], m[piv] = m[piv], m[r]
            clean = True
            for i in range(r + 1, len(m)):
                if m[i][col]:
                    q = m[i][col] // m[r][col]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    clean = clean and not m[i][col]
            if clean:
                break
        if r < len(m) and m[r][col]:
            if m[r][col] < 0:
                m[r] = [-a for a in m[r]]
            for i in range(r):
                q = m[i][col] // m[r][col]
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
            r += 1
    hnf = [tuple(row) for row in m if any(row)]
    if len(hnf) < d or any(hnf[i][i] == 0 for i in range(d)):
        raise GroupError("infinite index: basis does not span a full-rank lattice")
    return tuple(hnf)


def _reduce(basis: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    v = list(v)
    for i, row in enumerate(basis):
        q = v[i] // row[i]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def _lattice_coset(table: CosetTable, g: Element) -> int:
    lookup = table.__dict__.get("_lookup")
    if lookup is None:
        lookup = {t: i for i, t in enumerate(table.transversal)}
        object.__setattr__(table, "_lookup", lookup)
    return lookup[_reduce(table.basis, g)]


def sublattice_coset_table(group: FreeAbelianGroup | int, basis: Sequence[Sequence[int]]) -> CosetTable:
    """Coset table of the sublattice spanned by ``basis`` in Z^d.

    The transversal is the Hermite-normal-form box, ordered canonically.
    """
    if isinstance(group, int):
        group = FreeAbelianGroup(group)
    if not isinstance(group, FreeAbelianGroup):
        raise GroupError("sublattice tables need a free abelian group")
    if any(len(v) != group.d for v in basis) or len(basis) != group.d:
        raise GroupError(f"need {group.d} basis vectors of dimension {group.d}")
    hnf = hermite_normal_form(basis)
    box = itertools.product(*(range(hnf[i][i]) for i in range(group.d)))
    reps = sorted(box, key=group.order_key)
    ids = {v: i for i, v in enumerate(reps)}
    action = tuple(
        tuple(ids[_reduce(hnf, group.mul(v, group.gen(k)))] for v in reps) for k in range(group.d)
    )
    return CosetTable(group, len(reps), action, tuple(reps), basis=hnf,
                      inverse_action=tuple(_invert(r) for r in action))


def enumerate_sublattices(d: int, index: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All index-``index`` sublattices of Z^d as HNF bases, lexicographically."""
    found = []
    for diag in _ordered_factorizations(index, d):
        slots = [(i, j) for i in range(d) for j in range(i + 1, d)]
        for values in itertools.product(*(range(diag[j]) for _, j in slots)):
            rows = [[0] * d for _ in range(d)]
            for i in range(d):
                rows[i][i] = diag[i]
            for (i, j), v in zip(slots, values):
                rows[i][j] = v
            found.append(tuple(tuple(r) for r in rows))
    found.sort(key=lambda b: tuple(itertools.chain.from_iterable(b)))
    yield from found


def _ordered_factorizations(n: int, d: int) -> Iterator[tuple[int, ...]]:
    if d == 1:
        yield (n,)
        return
    for k in range(1, n + 1):
        if n % k == 0:
            for rest in _ordered_factorizations(n // k, d - 1):
                yield (k,) + rest


# -- finite groups --------------------------------------------------------

def finite_subgroup_table(group: FiniteGroup, elements: Sequence[int]) -> CosetTable:
    """Coset table of the subgroup of a finite group generated by ``elements``."""
    members = set(group.subgroup_closure(elements))
    cosets: list[frozenset] = []
    reps: list[int] = []
    where: dict[int, int] = {}
    for g in sorted(group.elements(), key=group.order_key):
        if g in where:
            continue
        coset = frozenset(group.mul(h, g) for h in members)
        for x in coset:
            where[x] = len(cosets)
        cosets.append(coset)
        reps.append(g)
    action = tuple(
        tuple(where[group.mul(reps[c], s)] for c in range(len(reps))) for s in group.generators
    )
    return CosetTable(group, len(reps), action, tuple(reps),
                      inverse_action=tuple(_invert(r) for r in action))


def normal_subgroups(group: FiniteGroup) -> list[tuple[int, ...]]:
    """All normal subgroups, as sorted element tuples, by descending order."""

    def normal_closure(gens):
        members = set(group.subgroup_closure(gens))
        while True:
            extra = {group.conj(g, h) for g in group.elements() for h in members} - members
            if not extra:
                return tuple(sorted(members))
            members = set(group.subgroup_closure(members | extra))

    found = {normal_closure([g]) for g in group.elements()}
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(found), 2):
            j = tuple(group.subgroup_closure(set(a) | set(b)))
            if j not in found:
                found.add(j)
                changed = True
    return sorted(found, key=lambda s: (-len(s), s))


# -- derived data ---------------------------------------------------------

def schreier_generators(table: CosetTable) -> list[Element]:
    """Nontrivial Schreier generators of ``H``, canonically ordered."""
    g = table.group
    t = table.transversal
    out = set()
    for c in range(table.index):
        for i in range(g.rank):
            d = table.action[i][c]
            h = g.mul(g.mul(t[c], g.gen(i)), g.inv(t[d]))
            if h != g.identity():
                out.add(h)
    return g.sorted(out)


def overlap_set(table: CosetTable, transversal: Sequence[Element] | None = None) -> list[Element]:
    """``H`` intersected with ``{t t'^-1 : t, t' in T}``, canonically ordered."""
    g = table.group
    ts = list(transversal) if transversal is not None else list(table.transversal)
    prods = {g.mul(a, g.inv(b)) for a in ts for b in ts}
    prods.add(g.identity())
    return g.sorted(h for h in prods if coset_of(table, h) == 0)


def covers(table: CosetTable, elements: Sequence[Element]) -> bool:
    """True when ``H * elements`` is the whole group."""
    return {coset_of(table, t) for t in elements} == set(range(table.index))


def is_normal(table: CosetTable) -> bool:
    """True iff every conjugate of every Schreier generator stays in ``H``.

    Conjugating by the transversal element of coset ``c`` and testing
    membership is the same as checking that the generator fixes ``c``.
    """
    for h in schreier_generators(table):
        for c in range(table.index):
            if table.walk(c, h) != c:
                return False
    return True


def quotient_hom(table: CosetTable) -> Homomorphism:
    """The map ``G -> G/H`` for a normal ``H``; quotient elements are coset ids."""
    if not is_normal(table):
        raise GroupError("quotient requires a normal subgroup")
    g = table.group
    n = table.index
    mult = [[table.walk(a, table.transversal[b]) for b in range(n)] for a in range(n)]
    images = tuple(table.action[i][0] for i in range(g.rank))
    target = FiniteGroup(
        mult,
        names=[g.format(t) for t in table.transversal],
        generators=images,
        generator_names=g.gens,
        check=False,
    )
    return Homomorphism(g, target, images, tuple(schreier_generators(table)))


# -- subgroups as groups in their own right -------------------------------

@dataclass(frozen=True, eq=False)
class Subgroup:
    """A finite-index subgroup ``H`` presented as its own group context.

    ``embedding`` maps the context's generators into the ambient group;
    ``from_ambient`` rewrites an ambient element of ``H`` in context form.
    """

    table: CosetTable
    context: GroupContext
    embedding: Homomorphism
    _rewrite: object = field(repr=False, default=None)

    @property
    def ambient(self) -> GroupContext:
        return self.table.group

    def to_ambient(self, h: Element) -> Element:
        return self.embedding(h)

    def from_ambient(self, g: Element) -> Element:
        if coset_of(self.table, g) != 0:
            raise GroupError(f"{self.ambient.format(g)} is not in the subgroup")
        return self._rewrite(g)


def subgroup_context(table: CosetTable) -> Subgroup:
    """Present ``H`` as a group: Z^d for sublattices, a free group of rank
    ``index*(r-1)+1`` for subgroups of F_r, and a finite group otherwise."""
    g = table.group
    if isinstance(g, FreeAbelianGroup):
        basis = table.basis
        if basis is None:
            gens = schreier_generators(table)
            basis = hermite_normal_form(list(gens) + [tuple(table.index * x for x in g.gen(i))
                                                     for i in range(g.d)])
        ctx = FreeAbelianGroup(g.d)
        emb = Homomorphism(ctx, g, tuple(tuple(r) for r in basis))

        def rewrite(v):
            coeffs = []
            v = list(v)
            for i, row in enumerate(basis):
                q, rem = divmod(v[i], row[i])
                if rem:
                    raise GroupError("vector not in lattice")
                coeffs.append(q)
                v = [a - q * b for a, b in zip(v, row)]
            return tuple(coeffs)

        return Subgroup(table, ctx, emb, rewrite)

    if isinstance(g, FiniteGroup):
        members = [x for x in g.elements() if coset_of(table, x) == 0]
        pos = {x: k for k, x in enumerate(members)}
        mult = [[pos[g.mul(a, b)] for b in members] for a in members]
        gens = [pos[h] for h in schreier_generators(table)]
        ctx = FiniteGroup(mult, names=[g.names[x] for x in members], generators=gens, check=False)
        emb = Homomorphism(ctx, g, tuple(members[k] for k in gens))
        return Subgroup(table, ctx, emb, lambda x: pos[x])

    if isinstance(g, FreeGroup):
        reps = _bfs_transversal(table)
        basis: list[Element] = []
        labels: dict[tuple[int, int], int] = {}
        for c in range(table.index):
            for i in range(g.rank):
                d = table.action[i][c]
                h = g.mul(g.mul(reps[c], g.gen(i)), g.inv(reps[d]))
                if h != g.identity():
                    labels[(c, i)] = len(basis)
                    basis.append(h)
        if not basis:
            raise GroupError("trivial subgroup of a free group has infinite index")
        ctx = FreeGroup(len(basis))
        emb = Homomorphism(ctx, g, tuple(basis))

        def rewrite(w):
            out = ctx.identity()
            c = 0
            for i, s in g.to_word(w):
                if s > 0:
                    if (c, i) in labels:
                        out = ctx.mul(out, ctx.gen(labels[(c, i)]))
                    c = table.action[i][c]
                else:
                    d = table.inverse_action[i][c]
                    if (d, i) in labels:
                        out = ctx.mul(out, ctx.inv(ctx.gen(labels[(d, i)])))
                    c = d
            return out

        return Subgroup(table, ctx, emb, rewrite)

    raise GroupError(f"subgroups of the {g.backend} backend cannot be presented as groups")


def induced_quotient(sub: Subgroup, q_sub: Homomorphism) -> tuple[Homomorphism, list[Element]]:
    """A finite quotient of the ambient group through which every
    configuration determined by ``(q_sub(h), coset)`` with ``g = h t`` factors.

    The ambient group acts on pairs ``(element of q_sub's target, coset id)``
    by right multiplication; the image of that action is the quotient.
    Returns the surjective quotient map and a representative ambient element
    for each quotient element.
    """
    table = sub.table
    g = table.group
    qt = q_sub.target
    t = table.transversal
    n = table.index
    states = [(c, i) for c in qt.elements() for i in range(n)]
    sid = {s: k for k, s in enumerate(states)}
    perms = []
    for k in range(g.rank):
        moves = []
        for i in range(n):
            j = table.action[k][i]
            h = g.mul(g.mul(t[i], g.gen(k)), g.inv(t[j]))
            moves.append((q_sub(sub.from_ambient(h)), j))
        perms.append(tuple(sid[(qt.mul(c, moves[i][0]), moves[i][1])] for c, i in states))
    ops = perm_ops(len(states))
    group, _, reps = finite_image(perms, ops.mul, ops.identity(), g.gens, source=g)
    hom = Homomorphism(g, group, tuple(group.generators))
    return hom, reps
