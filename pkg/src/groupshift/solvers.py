"""Searches for periodic points, emptiness proofs and the transfer pipelines.

Outcomes are three-valued: a ``Certificate`` (found), ``None`` (proven
absent for the searched space), or ``BudgetExceeded`` (inconclusive).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .constructions import (
    hb_decode,
    higher_block_sft,
    induce_sft,
    locked_sft,
    pair_letter,
    product_sft,
    pullback_sft,
    restrict_configuration,
    section,
    subgroup_coordinates,
)
from .cosets import (
    CosetTable,
    enumerate_sublattices,
    finite_subgroup_table,
    is_normal,
    normal_subgroups,
    quotient_hom,
    sublattice_coset_table,
    subgroup_context,
)
from .certificates import Certificate, EmptinessProof, exhaustion_digest
from .groups import (
    Element,
    FiniteGroup,
    FreeAbelianGroup,
    GroupError,
    Homomorphism,
)
from .search import BudgetExceeded, Constraint, Search, default_budget, merge, reduce_constraint
from .serialize import encode_element, sft_digest
from .shift import (
    SFT,
    PeriodicConfiguration,
    ShiftError,
    make_partial,
    member,
    minimize,
    stabilizer,
)

__all__ = [
    "Certificate",
    "BudgetExceeded",
    "ball_search",
    "periodic_search_on_quotient",
    "periodic_solutions",
    "periodic_enumerate",
    "quotients",
    "g_invariant_search",
    "z_analyze",
    "transfer_commensurable",
    "extension_push",
]


# -- constraint building ----------------------------------------------------------

def quotient_constraints(sft: SFT, q: Homomorphism) -> list[Constraint]:
    Q = q.target
    out = []
    for support, forbidden in sft.grouped().items():
        offsets = [q(w) for w in support]
        for c in Q.elements():  # type: ignore[attr-defined]
            out.append(reduce_constraint([Q.mul(c, o) for o in offsets], forbidden))
    return merge(out)


def domain_constraints(sft: SFT, domain: Sequence[Element]) -> list[Constraint]:
    g = sft.group
    index = {d: i for i, d in enumerate(domain)}
    out = []
    for support, forbidden in sft.grouped().items():
        anchor_inv = g.inv(support[0])
        for d in domain:
            k = g.mul(d, anchor_inv)
            cells = [index.get(g.mul(k, w)) for w in support]
            if None not in cells:
                out.append(reduce_constraint(cells, forbidden))
    return merge(out)


# -- searches ---------------------------------------------------------------------

def periodic_solutions(
    sft: SFT, q: Homomorphism, budget: int | None = None, exact: bool = False
) -> Iterator[PeriodicConfiguration]:
    """All members of ``sft`` factoring through ``q``, lexicographically.

    With ``exact`` only points whose stabilizer is exactly the kernel of
    ``q`` are kept, i.e. those not factoring through a smaller quotient.
    """
    if q.source != sft.group:
        raise ShiftError("quotient map does not start at the SFT's group")
    Q = q.target
    if not isinstance(Q, FiniteGroup):
        raise GroupError("periodic search needs a finite quotient")
    letters = sft.alphabet.letters
    search = Search(Q.order, len(letters), quotient_constraints(sft, q), budget)
    for sol in search.solutions():
        x = PeriodicConfiguration(q, tuple(letters[i] for i in sol))
        if not exact or stabilizer(x)[1] == Q.order:
            yield x


def periodic_search_on_quotient(
    sft: SFT, q: Homomorphism, budget: int | None = None, exact: bool = False
) -> PeriodicConfiguration | None:
    """Lexicographically least member of ``sft`` factoring through ``q``."""
    return next(periodic_solutions(sft, q, budget, exact), None)


def quotients(group, max_index: int, supplied: Sequence[Homomorphism] | None = None) -> Iterator[tuple[Homomorphism, dict]]:
    """Finite quotients in canonical order: ascending index, then basis."""
    if supplied is not None:
        ranked = sorted(enumerate(supplied), key=lambda p: (p[1].target.order, p[0]))
        for k, q in ranked:
            if q.target.order <= max_index:
                yield q, {"quotient": f"supplied[{k}]", "index": q.target.order}
        return
    if isinstance(group, FreeAbelianGroup):
        for m in range(1, max_index + 1):
            for basis in enumerate_sublattices(group.d, m):
                table = sublattice_coset_table(group, basis)
                yield quotient_hom(table), {"index": m, "lattice": [list(r) for r in basis]}
        return
    if isinstance(group, FiniteGroup):
        for members in sorted(normal_subgroups(group), key=lambda s: (group.order // len(s), s)):
            m = group.order // len(members)
            if m > max_index:
                continue
            table = finite_subgroup_table(group, members)
            yield quotient_hom(table), {"index": m, "kernel": [group.format(k) for k in members]}
        return
    raise GroupError(f"no quotient enumeration for the {group.backend} backend; supply quotients")


def periodic_enumerate(
    sft: SFT,
    max_index: int,
    supplied: Sequence[Homomorphism] | None = None,
    budget: int | None = None,
    pipeline: str = "periodic_enumerate",
) -> Certificate | None:
    """First strongly periodic member over quotients of index at most ``max_index``."""
    skipped = []
    visited = 0
    for q, info in quotients(sft.group, max_index, supplied):
        visited += 1
        try:
            x = periodic_search_on_quotient(sft, q, budget)
        except BudgetExceeded:
            skipped.append(info)
            continue
        if x is not None:
            prov = {"pipeline": pipeline, "max_index": max_index, "visited": visited, **info}
            if skipped:
                prov["inconclusive"] = skipped
            return periodic_certificate(sft, x, prov)
    if skipped:
        raise BudgetExceeded(budget if budget is not None else default_budget())
    return None


def periodic_certificate(sft: SFT, x: PeriodicConfiguration, provenance: dict) -> Certificate:
    _, index = stabilizer(x)
    return Certificate("periodic-point", x, sft_digest(sft), provenance, stabilizer_index=index)


def ball_search(sft: SFT, radius: int, budget: int | None = None, max_cells: int = 200_000) -> Certificate:
    """Lexicographically least legal labeling of the ball, or an emptiness proof."""
    cells = sft.group.ball(radius)
    if len(cells) > max_cells:
        raise BudgetExceeded(max_cells)
    letters = sft.alphabet.letters
    search = Search(len(cells), len(letters), domain_constraints(sft, cells), budget)
    sol = search.first()
    dig = sft_digest(sft)
    prov = {"pipeline": "ball_search", "radius": radius}
    if sol is None:
        proof = EmptinessProof(radius, search.nodes, exhaustion_digest(sft, radius))
        return Certificate("empty-at-radius", proof, dig, prov, radius=radius)
    part = make_partial(sft.group, {c: letters[i] for c, i in zip(cells, sol)})
    return Certificate("legal-ball", part, dig, prov, radius=radius)


def g_invariant_search(sft: SFT, g: Element, radius: int, budget: int | None = None) -> Certificate | None:
    """A legal labeling of the ball with ``x(g h) = x(h)`` inside the ball.

    Evidence only: such a ball need not extend to a whole configuration.
    """
    G = sft.group
    G.check(g)
    if g == G.identity():
        raise GroupError("invariance element must not be the identity")
    cells = G.ball(radius)
    index = {c: i for i, c in enumerate(cells)}
    k = len(sft.alphabet)
    unequal = frozenset((a, b) for a in range(k) for b in range(k) if a != b)
    cons = domain_constraints(sft, cells)
    pairs = 0
    for h in cells:
        j = index.get(G.mul(g, h))
        if j is not None and j != index[h]:
            cons.append(Constraint(tuple(sorted((index[h], j))), unequal))
            pairs += 1
    sol = Search(len(cells), k, merge(cons), budget).first()
    if sol is None:
        return None
    letters = sft.alphabet.letters
    part = make_partial(G, {c: letters[i] for c, i in zip(cells, sol)})
    prov = {
        "pipeline": "g_invariant_search",
        "radius": radius,
        "element": encode_element(G, g),
        "constrained_pairs": pairs,
        "note": "evidence only; pairs leaving the ball are unconstrained",
    }
    return Certificate("g-invariant-ball", part, sft_digest(sft), prov, element=g, radius=radius)


# -- Z analysis -------------------------------------------------------------------

@dataclass(frozen=True)
class ZAnalysis:
    empty: bool
    period: int | None = None
    configuration: PeriodicConfiguration | None = None


def z_analyze(sft: SFT) -> ZAnalysis:
    """Decide emptiness of an SFT on Z and find a point of least period.

    Builds the graph of m-words (m+1 = window width) whose edges are the
    allowed (m+1)-words, trims it to its recurrent part, and takes a
    shortest cycle; its length is the least period of any point.
    """
    g = sft.group
    if not (isinstance(g, FreeAbelianGroup) and g.d == 1):
        raise GroupError("z_analyze needs the group Z")
    letters = sft.alphabet.letters
    if sft.forbidden:
        lo = min(w[0] for p in sft.forbidden for w in p.support)
        hi = max(w[0] for p in sft.forbidden for w in p.support)
    else:
        lo = hi = 0
    m = max(hi - lo, 1)
    bad = []
    for p in sft.forbidden:
        bad.append({w[0] - lo: a for w, a in p.items()})

    def allowed(word):
        for pat in bad:
            for shift in range(len(word) - m):
                if all(word[shift + i] == a for i, a in pat.items()):
                    return False
        return True

    vertices = list(itertools.product(letters, repeat=m))
    edges = {v: [v[1:] + (a,) for a in letters if allowed(v + (a,))] for v in vertices}
    # trim to vertices with in- and out-edges until stable
    alive = set(vertices)
    while True:
        indeg = {v: 0 for v in alive}
        for v in alive:
            for w in edges[v]:
                if w in alive:
                    indeg[w] += 1
        keep = {v for v in alive if indeg[v] and any(w in alive for w in edges[v])}
        if keep == alive:
            break
        alive = keep
    if not alive:
        return ZAnalysis(True)
    best = None
    for v in sorted(alive):
        dist = {v: 0}
        queue = deque([v])
        found = None
        while queue and found is None:
            u = queue.popleft()
            for w in edges[u]:
                if w not in alive:
                    continue
                if w == v:
                    found = dist[u] + 1
                    break
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if found is not None and (best is None or found < best):
            best = found
    period = best
    word = _least_cycle(alive, edges, period)
    table = sublattice_coset_table(g, [(period,)])
    q = quotient_hom(table)
    labels = tuple(word[t[0]] for t in table.transversal)
    return ZAnalysis(False, period, PeriodicConfiguration(q, labels))


def _least_cycle(alive, edges, length: int) -> tuple[str, ...]:
    """Lexicographically least letter sequence of a closed walk of ``length``."""
    for v in sorted(alive):
        def walk(u, seq):
            if len(seq) == length:
                return seq if u == v else None
            for w in edges[u]:
                if w in alive:
                    r = walk(w, seq + (u[0],))
                    if r is not None:
                        return r
            return None

        r = walk(v, ())
        if r is not None:
            return r
    raise AssertionError("cycle of the computed length must exist")


# -- transfer pipelines -------------------------------------------------------------

def transfer_commensurable(
    sft: SFT,
    direction: str,
    table: CosetTable,
    coset_reps: Sequence[Element] | None = None,
    max_index: int = 8,
    budget: int | None = None,
    supplied: Sequence[Homomorphism] | None = None,
    coords: str = "subgroup",
) -> Certificate | None:
    """Find a periodic point of ``sft`` by passing through a commensurable group.

    ``to-overgroup``: ``sft`` lives on G; search the higher block shift I n J
    on the subgroup H and decode.  ``to-subgroup``: ``sft`` lives on the
    subgroup H (in its own coordinates); search S' x L on G and restrict.
    """
    sub = subgroup_context(table)
    prov = {"pipeline": f"transfer_commensurable/{direction}", "subgroup_index": table.index,
            "max_index": max_index}
    if direction == "to-overgroup":
        system = higher_block_sft(sft, table, coset_reps=coset_reps)
        cert = periodic_enumerate(system.shift, max_index, supplied, budget,
                                  pipeline="transfer/search")
        if cert is None:
            return None
        z = cert.payload
        x = hb_decode(system, z)  # type: ignore[arg-type]
        prov.update({"block_alphabet": len(system.block_alphabet),
                     "subgroup_quotient_index": z.cells.order,  # type: ignore[attr-defined]
                     "subgroup_stabilizer_index": cert.stabilizer_index})
        return periodic_certificate(sft, x, prov)
    if direction == "to-subgroup":
        if not is_normal(table):
            raise GroupError("to-subgroup transfer needs a normal subgroup")
        if coords == "ambient":
            sft = subgroup_coordinates(sft, sub)
        induced = induce_sft(sft, sub)
        locked = locked_sft(table)
        prod = product_sft(induced, locked)
        cert = periodic_enumerate(prod, max_index, supplied, budget, pipeline="transfer/search")
        if cert is None:
            return None
        y = cert.payload
        split = {pair_letter(a, b): a for a in induced.alphabet for b in locked.alphabet}
        y1 = PeriodicConfiguration(y.quotient, tuple(split[c] for c in y.labeling))  # type: ignore[attr-defined]
        x = minimize(restrict_configuration(y1, sub))
        prov.update({"ambient_quotient_index": y.cells.order,  # type: ignore[attr-defined]
                     "ambient_stabilizer_index": cert.stabilizer_index})
        return periodic_certificate(sft, x, prov)
    raise ValueError(f"unknown direction {direction!r}")


def extension_push(
    sbar: SFT,
    f: Homomorphism,
    max_index: int = 8,
    supplied: Sequence[Homomorphism] | None = None,
    budget: int | None = None,
) -> Certificate | None:
    """Periodic point of ``sbar`` on Q obtained from the pullback on G.

    Searches the pullback over finite quotients of G.  Without supplied
    quotients and with Q free abelian, the quotients of G used are the
    lattice quotients of Q composed with ``f``; every periodic point of the
    pullback is fixed by the kernel of ``f``, so nothing is lost.
    """
    G, Q = f.source, f.target
    pulled = pullback_sft(sbar, f)
    if supplied is None:
        if isinstance(Q, (FreeAbelianGroup, FiniteGroup)):
            supplied = [f.compose(q) for q, _ in quotients(Q, max_index)]
        else:
            raise GroupError("supply quotients of the source group")
    cert = periodic_enumerate(pulled, max_index, supplied, budget, pipeline="extension/search")
    if cert is None:
        return None
    big = cert.payload
    xbar = push_down(big, f)  # type: ignore[arg-type]
    if not member(xbar, sbar):
        raise AssertionError("pushed configuration left the quotient SFT")
    prov = {"pipeline": "extension_push", "max_index": max_index,
            "source_quotient_index": big.cells.order,  # type: ignore[attr-defined]
            "source_stabilizer_index": cert.stabilizer_index}
    return periodic_certificate(sbar, xbar, prov)


def push_down(x: PeriodicConfiguration, f: Homomorphism) -> PeriodicConfiguration:
    """The configuration on Q with ``x = xbar o f``, for ``x`` fixed by ker f."""
    Qfin = x.cells
    kernel_image = [x.quotient(k) for k in (f.kernel or ())]
    table = finite_subgroup_table(Qfin, kernel_image)
    proj = quotient_hom(table)  # Qfin -> Qfin / q(N)
    Q = f.target
    lifts = section(f, [Q.gen(i) for i in range(Q.rank)])
    images = [proj(x.quotient(lifts[Q.gen(i)])) for i in range(Q.rank)]
    qbar = Homomorphism(Q, proj.target, tuple(images))
    labels = tuple(x.labeling[t] for t in table.transversal)
    for c in Qfin.elements():
        if x.labeling[c] != labels[proj(c)]:
            raise ShiftError("configuration is not fixed by the kernel")
    return minimize(PeriodicConfiguration(qbar, labels))
