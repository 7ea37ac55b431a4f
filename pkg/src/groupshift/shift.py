"""Alphabets, patterns, shifts of finite type and periodic configurations.

The shift action is ``(g x)(h) = x(g^-1 h)`` throughout.  A pattern ``p``
with support ``W`` appears in ``x`` when ``x(k w) = p(w)`` for all ``w`` in
``W`` and some ``k``; ``translate`` is the single place that applies the
action to a configuration.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .groups import Element, FiniteGroup, GroupContext, Homomorphism


class ShiftError(ValueError):
    """Inconsistent alphabet, pattern, SFT or configuration."""


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(str(a) for a in self.letters))
        if not self.letters:
            raise ShiftError("alphabet must be non-empty")
        if len(set(self.letters)) != len(self.letters):
            raise ShiftError("alphabet letters must be distinct")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __contains__(self, a: object) -> bool:
        return a in self._index

    @cached_property
    def _index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.letters)}

    def index(self, a: str) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise ShiftError(f"unknown letter {a!r}") from None


@dataclass(frozen=True)
class Pattern:
    """Letters on a finite support; support kept in canonical group order."""

    support: tuple
    letters: tuple[str, ...]

    def items(self):
        return zip(self.support, self.letters)

    def as_dict(self) -> dict:
        return dict(self.items())

    def __len__(self) -> int:
        return len(self.support)


def make_pattern(group: GroupContext, cells: Mapping | Iterable[tuple[Element, str]]) -> Pattern:
    items = list(cells.items()) if isinstance(cells, Mapping) else list(cells)
    seen: dict = {}
    for g, a in items:
        group.check(g)
        if g in seen:
            raise ShiftError(f"support element {group.format(g)} repeated")
        seen[g] = str(a)
    support = tuple(sorted(seen, key=group.order_key))
    return Pattern(support, tuple(seen[g] for g in support))


@dataclass(frozen=True, eq=False)
class SFT:
    """A shift of finite type: alphabet plus finite forbidden-pattern list."""

    group: GroupContext
    alphabet: Alphabet
    forbidden: tuple[Pattern, ...]
    name: str = field(default="", compare=False)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SFT)
            and self.group == other.group
            and self.alphabet == other.alphabet
            and self.forbidden == other.forbidden
        )

    def __hash__(self) -> int:
        return hash((self.group, self.alphabet, self.forbidden))

    def supports(self) -> list[tuple]:
        """Distinct supports in canonical order."""
        return sorted({p.support for p in self.forbidden}, key=self._support_key)

    def _support_key(self, support):
        return tuple(self.group.order_key(g) for g in support)

    def pattern_key(self, p: Pattern):
        return (self._support_key(p.support), tuple(self.alphabet.index(a) for a in p.letters))

    def grouped(self) -> dict[tuple, set[tuple[int, ...]]]:
        """Forbidden letter-index tuples grouped by support."""
        out: dict[tuple, set] = {}
        for p in self.forbidden:
            out.setdefault(p.support, set()).add(tuple(self.alphabet.index(a) for a in p.letters))
        return out


def make_sft(
    group: GroupContext,
    alphabet: Alphabet | Sequence[str],
    forbidden: Iterable[Pattern | Mapping],
    name: str = "",
) -> SFT:
    """Canonical SFT: patterns checked, sorted and deduplicated."""
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(tuple(alphabet))
    pats = []
    for p in forbidden:
        if not isinstance(p, Pattern):
            p = make_pattern(group, p)
        else:
            for g in p.support:
                group.check(g)
        for a in p.letters:
            if a not in alphabet:
                raise ShiftError(f"forbidden pattern uses unknown letter {a!r}")
        if not p.support:
            raise ShiftError("forbidden patterns need a non-empty support")
        pats.append(p)
    sft = SFT(group, alphabet, (), name)
    pats = sorted(set(pats), key=sft.pattern_key)
    return SFT(group, alphabet, tuple(pats), name)


def intersect(*sfts: SFT, name: str = "") -> SFT:
    """Intersection of SFTs over the same group and alphabet."""
    first = sfts[0]
    for s in sfts[1:]:
        if s.group != first.group or s.alphabet != first.alphabet:
            raise ShiftError("intersection needs a common group and alphabet")
    return make_sft(first.group, first.alphabet, [p for s in sfts for p in s.forbidden], name)


@dataclass(frozen=True)
class PartialConfiguration:
    group: GroupContext
    cells: tuple  # ((element, letter), ...) in canonical order

    @cached_property
    def labeling(self) -> dict:
        return dict(self.cells)

    @property
    def domain(self) -> tuple:
        return tuple(g for g, _ in self.cells)


def make_partial(group: GroupContext, labeling: Mapping[Element, str]) -> PartialConfiguration:
    return PartialConfiguration(group, tuple(make_pattern(group, labeling).items()))


@dataclass(frozen=True, eq=False)
class PeriodicConfiguration:
    """The configuration ``g -> labeling[quotient(g)]``.

    ``quotient`` is a surjective homomorphism onto a finite group; the kernel
    fixes the configuration, so it is strongly periodic.
    """

    quotient: Homomorphism
    labeling: tuple[str, ...]

    def __post_init__(self):
        t = self.quotient.target
        if not isinstance(t, FiniteGroup):
            raise ShiftError("periodic configurations need a finite quotient")
        if len(self.labeling) != t.order:
            raise ShiftError("labeling must cover every quotient element")

    @property
    def group(self) -> GroupContext:
        return self.quotient.source

    @property
    def cells(self) -> FiniteGroup:
        return self.quotient.target  # type: ignore[return-value]

    def at(self, g: Element) -> str:
        return self.labeling[self.quotient(g)]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PeriodicConfiguration) and same_configuration(self, other)

    def __hash__(self) -> int:
        return hash(self.group)


def periodic(quotient: Homomorphism, labeling: Sequence[str] | Mapping[int, str]) -> PeriodicConfiguration:
    if isinstance(labeling, Mapping):
        labeling = [labeling[c] for c in quotient.target.elements()]  # type: ignore[attr-defined]
    return PeriodicConfiguration(quotient, tuple(labeling))


def translate_cells(x: PeriodicConfiguration, c: int) -> tuple[str, ...]:
    """Labeling of ``g x`` for any ``g`` with quotient image ``c``."""
    q = x.cells
    ci = q.inv(c)
    return tuple(x.labeling[q.mul(ci, d)] for d in q.elements())


def translate(x: PeriodicConfiguration, g: Element) -> PeriodicConfiguration:
    return PeriodicConfiguration(x.quotient, translate_cells(x, x.quotient(g)))


def same_configuration(x: PeriodicConfiguration, y: PeriodicConfiguration) -> bool:
    """Equality as functions on the group, compared through a joint quotient."""
    if x.group != y.group:
        return False
    if x.quotient == y.quotient:
        return x.labeling == y.labeling
    joint = joint_quotient(x.quotient, y.quotient)
    return all(x.labeling[a] == y.labeling[b] for a, b in joint[1])


def joint_quotient(q1: Homomorphism, q2: Homomorphism) -> tuple[Homomorphism, list[tuple[int, int]]]:
    """The image of ``g -> (q1(g), q2(g))`` and its element pairs."""
    from .groups import finite_image

    t1, t2 = q1.target, q2.target
    images = list(zip(q1.images, q2.images))
    group, objs, _ = finite_image(
        images,
        lambda a, b: (t1.mul(a[0], b[0]), t2.mul(a[1], b[1])),
        (t1.identity(), t2.identity()),
        q1.source.gens,
        namer=lambda i, o: f"{t1.format(o[0])}|{t2.format(o[1])}",
    )
    return Homomorphism(q1.source, group, tuple(group.generators)), objs


# -- operations -------------------------------------------------------------

def _check_compatible(x: PeriodicConfiguration, sft: SFT) -> None:
    if x.group != sft.group:
        raise ShiftError("configuration and SFT live on different groups")
    bad = sorted(set(x.labeling) - set(sft.alphabet.letters))
    if bad:
        raise ShiftError(f"configuration uses letters outside the alphabet: {bad}")


def normalize_support(sft: SFT, omega: Iterable[Element]) -> SFT:
    """Extend every forbidden pattern to the common support ``omega`` in all ways."""
    g = sft.group
    omega = g.sorted(g.check(w) for w in omega)
    om = set(omega)
    out = []
    for p in sft.forbidden:
        if not set(p.support) <= om:
            raise ShiftError("support too small: a forbidden pattern is not contained in it")
        fixed = p.as_dict()
        free = [w for w in omega if w not in fixed]
        for letters in itertools.product(sft.alphabet.letters, repeat=len(free)):
            cells = dict(fixed)
            cells.update(zip(free, letters))
            out.append(Pattern(tuple(omega), tuple(cells[w] for w in omega)))
    return make_sft(g, sft.alphabet, out, sft.name)


def union_support(sft: SFT, include_identity: bool = True) -> list[Element]:
    g = sft.group
    cells = {w for p in sft.forbidden for w in p.support}
    if include_identity:
        cells.add(g.identity())
    return g.sorted(cells)


def occurrences(pattern: Pattern, x: PeriodicConfiguration) -> list[int]:
    """Quotient cells ``c`` such that ``labeling[c q(w)] = p(w)`` for all ``w``."""
    q = x.cells
    offsets = [x.quotient(w) for w in pattern.support]
    return [
        c
        for c in q.elements()
        if all(x.labeling[q.mul(c, o)] == a for o, a in zip(offsets, pattern.letters))
    ]


def appears(pattern: Pattern, x: PeriodicConfiguration) -> bool:
    return bool(occurrences(pattern, x))


def member(x: PeriodicConfiguration, sft: SFT) -> bool:
    """True iff no forbidden pattern of ``sft`` appears in ``x``."""
    _check_compatible(x, sft)
    return not any(appears(p, x) for p in sft.forbidden)


def legal_partial(x: PartialConfiguration | Mapping, sft: SFT) -> bool:
    """True iff no left translate ``k * supp(p)`` inside the domain carries ``p``."""
    lab = x.labeling if isinstance(x, PartialConfiguration) else dict(x)
    if isinstance(x, PartialConfiguration) and x.group != sft.group:
        raise ShiftError("partial configuration and SFT live on different groups")
    g = sft.group
    for a in set(lab.values()):
        if a not in sft.alphabet:
            raise ShiftError(f"unknown letter {a!r}")
    for p in sft.forbidden:
        anchor_inv = g.inv(p.support[0])
        for d in lab:
            k = g.mul(d, anchor_inv)
            if all(lab.get(g.mul(k, w)) == a for w, a in p.items()):
                return False
    return True


def stabilizer(x: PeriodicConfiguration) -> tuple[tuple[int, ...], int]:
    """Quotient elements fixing ``x`` and the index of the stabilizer in the group."""
    q = x.cells
    fixed = tuple(c for c in q.elements() if translate_cells(x, c) == x.labeling)
    return fixed, q.order // len(fixed)


def orbit(x: PeriodicConfiguration) -> list[PeriodicConfiguration]:
    seen: dict[tuple, None] = {}
    for c in x.cells.elements():
        seen.setdefault(translate_cells(x, c))
    return [PeriodicConfiguration(x.quotient, lab) for lab in seen]


def minimize(x: PeriodicConfiguration) -> PeriodicConfiguration:
    """Re-express ``x`` over the smallest quotient through which it factors.

    The normal core of the stabilizer in the current quotient is factored out.
    """
    from .cosets import finite_subgroup_table, quotient_hom

    q = x.cells
    fixed, _ = stabilizer(x)
    core = set(fixed)
    for c in q.elements():
        core &= {q.conj(c, k) for k in fixed}
    if len(core) == 1:
        return x
    table = finite_subgroup_table(q, sorted(core))
    proj = quotient_hom(table)
    labels = [x.labeling[t] for t in table.transversal]
    return PeriodicConfiguration(x.quotient.compose(proj), tuple(labels))


def config_window(x: PeriodicConfiguration, elements: Iterable[Element]) -> tuple[str, ...]:
    return tuple(x.at(g) for g in elements)


def warn(msg: str) -> None:
    warnings.warn(msg, stacklevel=3)
