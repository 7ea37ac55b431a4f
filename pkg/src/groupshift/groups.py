"""Finitely generated groups with an exact word problem.

Four backends are supported: free abelian groups Z^d, free groups F_r,
finite groups given by a multiplication table, and the discrete Heisenberg
group.  Elements are plain hashable values in a canonical form, so equality
of elements is ordinary ``==``.
"""

from __future__ import annotations

import itertools
import json
import string
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Sequence

Element = Hashable
Word = list  # list of (generator index, exponent) pairs


class GroupError(ValueError):
    """Invalid group data, element, or homomorphism."""


class GroupContext:
    """Base class for group backends.

    Subclasses provide ``mul``, ``inv``, ``identity``, ``gen``, ``to_word``
    and ``is_element``.  Generators are indexed from 0; letter ranks used for
    ordering are ``2*i`` for generator ``i`` and ``2*i + 1`` for its inverse.
    """

    backend: str = ""
    gens: tuple[str, ...] = ()
    is_finite = False

    # -- to be provided by backends -------------------------------------
    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    def gen(self, i: int) -> Element:
        raise NotImplementedError

    def to_word(self, g: Element) -> Word:
        raise NotImplementedError

    def is_element(self, g: Any) -> bool:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    def format(self, g: Element) -> str:
        return str(g)

    def length(self, g: Element) -> int:
        return self._bfs_length(g)

    # -- shared machinery -----------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.gens)

    def _key(self) -> str:
        key = self.__dict__.get("_cached_key")
        if key is None:
            key = self.__dict__["_cached_key"] = json.dumps(self.descriptor(), sort_keys=True)
        return key

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupContext) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._key()})"

    def check(self, g: Any) -> Element:
        if not self.is_element(g):
            raise GroupError(f"{g!r} is not an element of {self!r}")
        return g

    def eq(self, a: Element, b: Element) -> bool:
        return a == b

    def letter(self, i: int, sign: int) -> Element:
        g = self.gen(i)
        return g if sign > 0 else self.inv(g)

    def power(self, g: Element, k: int) -> Element:
        if k < 0:
            g, k = self.inv(g), -k
        result = self.identity()
        while k:
            if k & 1:
                result = self.mul(result, g)
            g = self.mul(g, g)
            k >>= 1
        return result

    def evaluate(self, word: Iterable[tuple[int, int]]) -> Element:
        result = self.identity()
        for i, e in word:
            result = self.mul(result, self.power(self.gen(i), e))
        return result

    def conj(self, g: Element, h: Element) -> Element:
        """Return g h g^-1."""
        return self.mul(self.mul(g, h), self.inv(g))

    def commutator(self, a: Element, b: Element) -> Element:
        """Return a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def letters(self) -> list[tuple[int, int]]:
        """Generators and inverses in rank order."""
        return [(i, s) for i in range(self.rank) for s in (1, -1)]

    def sort_key(self, g: Element) -> tuple[int, ...]:
        ranks = []
        for i, e in self.to_word(g):
            ranks.extend([2 * i + (e < 0)] * abs(e))
        return tuple(ranks)

    def order_key(self, g: Element) -> tuple:
        """Canonical order: word length, then letter ranks of the normal form."""
        return (self.length(g), self.sort_key(g))

    def sorted(self, elements: Iterable[Element]) -> list[Element]:
        return sorted(set(elements), key=self.order_key)

    def ball(self, n: int) -> list[Element]:
        """Elements of word length at most ``n`` in canonical order."""
        if n < 0:
            raise GroupError("ball radius must be non-negative")
        seen = {self.identity()}
        frontier = [self.identity()]
        steps = [self.letter(i, s) for i, s in self.letters()]
        for _ in range(n):
            nxt = []
            for g in frontier:
                for s in steps:
                    h = self.mul(g, s)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            if not nxt:
                break
            frontier = nxt
        return sorted(seen, key=self.order_key)

    def _bfs_length(self, g: Element) -> int:
        cache = self.__dict__.setdefault("_lengths", {self.identity(): 0})
        frontier = self.__dict__.setdefault("_length_frontier", [self.identity()])
        steps = [self.letter(i, s) for i, s in self.letters()]
        radius = max(cache.values())
        while g not in cache:
            if not frontier:
                raise GroupError(f"{g!r} not reachable from the generators")
            radius += 1
            nxt = []
            for h in frontier:
                for s in steps:
                    k = self.mul(h, s)
                    if k not in cache:
                        cache[k] = radius
                        nxt.append(k)
            frontier[:] = nxt
        return cache[g]


class FreeAbelianGroup(GroupContext):
    """Z^d with the standard basis; elements are integer tuples."""

    backend = "free-abelian"

    def __init__(self, rank: int, names: Sequence[str] | None = None):
        if rank < 1:
            raise GroupError("free abelian rank must be positive")
        self.d = rank
        self.gens = tuple(names) if names else tuple(f"e{i + 1}" for i in range(rank))
        if len(self.gens) != rank:
            raise GroupError("one generator name per coordinate required")

    def identity(self):
        return (0,) * self.d

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def gen(self, i):
        return tuple(int(j == i) for j in range(self.d))

    def power(self, g, k):
        return tuple(k * x for x in g)

    def to_word(self, g):
        return [(i, e) for i, e in enumerate(g) if e]

    def is_element(self, g):
        return isinstance(g, tuple) and len(g) == self.d and all(type(x) is int for x in g)

    def length(self, g):
        return sum(abs(x) for x in g)

    def descriptor(self):
        return {"backend": self.backend, "rank": self.d}

    def format(self, g):
        if self.d == 1:
            return str(g[0])
        return "(" + ",".join(map(str, g)) + ")"


class FreeGroup(GroupContext):
    """Free group on ``rank`` letters a, b, c, ...; inverses are upper case.

    Elements are freely reduced tuples of signed 1-based letter indices.
    """

    backend = "free-group"

    def __init__(self, rank: int):
        if not 1 <= rank <= 26:
            raise GroupError("free group rank must be between 1 and 26")
        self.r = rank
        self.gens = tuple(string.ascii_lowercase[:rank])

    def identity(self):
        return ()

    def mul(self, a, b):
        out = list(a)
        for x in b:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def gen(self, i):
        return (i + 1,)

    def power(self, g, k):
        return GroupContext.power(self, g, k)

    def to_word(self, g):
        return [(abs(x) - 1, 1 if x > 0 else -1) for x in g]

    def is_element(self, g):
        if not isinstance(g, tuple):
            return False
        if any(type(x) is not int or x == 0 or abs(x) > self.r for x in g):
            return False
        return all(g[i] != -g[i + 1] for i in range(len(g) - 1))

    def length(self, g):
        return len(g)

    def descriptor(self):
        return {"backend": self.backend, "rank": self.r}

    def format(self, g):
        if not g:
            return "1"
        return "".join(self.gens[x - 1] if x > 0 else self.gens[-x - 1].upper() for x in g)

    def parse(self, text: str):
        if text in ("", "1"):
            return ()
        out = ()
        for ch in text:
            if ch.lower() not in self.gens:
                raise GroupError(f"unknown free generator {ch!r}")
            i = self.gens.index(ch.lower()) + 1
            out = self.mul(out, (i if ch.islower() else -i,))
        return out


class HeisenbergGroup(GroupContext):
    """Discrete Heisenberg group with generators x, y, z and [x, y] = z central.

    An element (a, b, c) stands for the normal form x^a y^b z^c.  As an
    integer matrix it is [[1, a, c + a*b], [0, 1, b], [0, 0, 1]].
    """

    backend = "heisenberg"
    gens = ("x", "y", "z")

    def identity(self):
        return (0, 0, 0)

    def mul(self, g, h):
        a, b, c = g
        a2, b2, c2 = h
        return (a + a2, b + b2, c + c2 - a2 * b)

    def inv(self, g):
        a, b, c = g
        return (-a, -b, -c - a * b)

    def gen(self, i):
        return ((1, 0, 0), (0, 1, 0), (0, 0, 1))[i]

    def to_word(self, g):
        return [(i, e) for i, e in enumerate(g) if e]

    def is_element(self, g):
        return isinstance(g, tuple) and len(g) == 3 and all(type(x) is int for x in g)

    def descriptor(self):
        return {"backend": self.backend}

    def format(self, g):
        return "(" + ",".join(map(str, g)) + ")"


class FiniteGroup(GroupContext):
    """A finite group given by its multiplication table.

    Elements are the integers ``0..order-1``; ``generators`` are element
    indices which must generate the whole group.
    """

    backend = "finite"
    is_finite = True

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        names: Sequence[str] | None = None,
        generators: Sequence[int] | None = None,
        generator_names: Sequence[str] | None = None,
        check: bool = True,
    ):
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        n = len(self.table)
        if n == 0 or any(len(row) != n for row in self.table):
            raise GroupError("multiplication table must be square and non-empty")
        self.order = n
        self.names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(n))
        if len(set(self.names)) != n:
            raise GroupError("element names must be distinct")
        ids = [e for e in range(n) if self.table[e] == tuple(range(n))]
        if not ids or any(self.table[r][ids[0]] != r for r in range(n)):
            raise GroupError("multiplication table has no identity")
        self._identity = ids[0]
        self._inverse = []
        for a in range(n):
            inv = [b for b in range(n) if self.table[a][b] == self._identity]
            if len(inv) != 1:
                raise GroupError(f"element {self.names[a]} has no unique inverse")
            self._inverse.append(inv[0])
        if check:
            self._check_table()
        if generators is None:
            generators = [g for g in range(n) if g != self._identity]
        self.generators = tuple(int(g) for g in generators)
        if generator_names is None:
            generator_names = [self.names[g] for g in self.generators]
        self.gens = tuple(generator_names)
        self._words = self._spanning_words()

    def _check_table(self) -> None:
        n = self.order
        if any(sorted(row) != list(range(n)) for row in self.table):
            raise GroupError("multiplication table is not a Latin square")
        triples = itertools.product(range(n), repeat=3)
        if n > 60:
            # associativity sampled along a fixed deterministic stride
            triples = ((a, b, c) for a, b, c in triples if (a * 7 + b * 3 + c) % 17 == 0)
        t = self.table
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError("multiplication table is not associative")

    def _spanning_words(self) -> dict[int, list]:
        words = {self._identity: []}
        lengths = {self._identity: 0}
        queue = deque([self._identity])
        while queue:
            g = queue.popleft()
            for i, s in self.letters():
                h = self.mul(g, self.letter(i, s))
                if h not in words:
                    words[h] = words[g] + [(i, s)]
                    lengths[h] = lengths[g] + 1
                    queue.append(h)
        if len(words) != self.order:
            raise GroupError("generators do not generate the finite group")
        self._lengths = lengths
        return words

    def identity(self):
        return self._identity

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inverse[a]

    def gen(self, i):
        return self.generators[i]

    def to_word(self, g):
        merged: list[tuple[int, int]] = []
        for i, s in self._words[g]:
            if merged and merged[-1][0] == i and (merged[-1][1] > 0) == (s > 0):
                merged[-1] = (i, merged[-1][1] + s)
            else:
                merged.append((i, s))
        return merged

    def is_element(self, g):
        return type(g) is int and 0 <= g < self.order

    def length(self, g):
        return self._lengths[g]

    def order_key(self, g):
        return (self._lengths[g], g)

    def elements(self) -> range:
        return range(self.order)

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GroupError(f"unknown element {name!r}") from None

    def format(self, g):
        return self.names[g]

    def descriptor(self):
        return {
            "backend": self.backend,
            "elements": list(self.names),
            "table": [list(row) for row in self.table],
            "generators": [self.names[g] for g in self.generators],
            "generator_names": list(self.gens),
        }

    def subgroup_closure(self, elements: Iterable[int]) -> list[int]:
        """The subgroup generated by ``elements``, sorted by index."""
        members = {self._identity}
        frontier = [self._identity]
        gens = [g for g in set(elements)]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.mul(a, g)
                    if b not in members:
                        members.add(b)
                        nxt.append(b)
            frontier = nxt
        return sorted(members)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        table = [[(a + b) % n for b in range(n)] for a in range(n)]
        return cls(table, names=[str(i) for i in range(n)], generators=[1 % n], check=False)


def finite_image(
    gen_images: Sequence[Any],
    mul: Callable[[Any, Any], Any],
    identity: Any,
    generator_names: Sequence[str],
    source: GroupContext | None = None,
    namer: Callable[[int, Any], str] | None = None,
) -> tuple[FiniteGroup, list[Any], list[Element]]:
    """Close ``gen_images`` under ``mul`` into a finite group.

    Returns the group (elements in breadth-first discovery order, identity
    first), the underlying objects, and, if ``source`` is given, a source
    element mapping to each group element.  ``gen_images[i]`` is the image
    of source generator ``i``.
    """
    objs = [identity]
    index = {identity: 0}
    reps = [source.identity()] if source is not None else []
    pos = 0
    while pos < len(objs):
        for i, g in enumerate(gen_images):
            h = mul(objs[pos], g)
            if h not in index:
                index[h] = len(objs)
                objs.append(h)
                if source is not None:
                    reps.append(source.mul(reps[pos], source.gen(i)))
        pos += 1
    table = [[index[mul(a, b)] for b in objs] for a in objs]
    names = [namer(i, o) for i, o in enumerate(objs)] if namer else None
    group = FiniteGroup(
        table,
        names=names,
        generators=[index[g] for g in gen_images],
        generator_names=generator_names,
        check=False,
    )
    return group, objs, reps


class _PermOps:
    """Permutations of 0..n-1 composed left to right (apply a, then b)."""

    def __init__(self, n: int):
        self.n = n

    def identity(self):
        return tuple(range(self.n))

    def mul(self, a, b):
        return tuple(b[i] for i in a)

    def inv(self, a):
        out = [0] * len(a)
        for i, j in enumerate(a):
            out[j] = i
        return tuple(out)

    def power(self, g, k):
        return GroupContext.power(self, g, k)  # type: ignore[arg-type]

    def commutator(self, a, b):
        return GroupContext.commutator(self, a, b)  # type: ignore[arg-type]


def relator_violation(source: GroupContext, images: Sequence[Any], ops: Any) -> str | None:
    """Check that generator ``images`` extend to a homomorphism out of ``source``.

    ``ops`` supplies ``mul``/``inv``/``identity``/``power`` on the target.
    Returns a description of the first violated relator, or None.
    """
    if len(images) != source.rank:
        return f"expected {source.rank} generator images, got {len(images)}"

    def comm(a, b):
        return ops.mul(ops.mul(ops.inv(a), ops.inv(b)), ops.mul(a, b))

    e = ops.identity()
    if isinstance(source, FreeAbelianGroup):
        for i, j in itertools.combinations(range(source.rank), 2):
            if comm(images[i], images[j]) != e:
                return f"generators {source.gens[i]} and {source.gens[j]} must commute"
    elif isinstance(source, HeisenbergGroup):
        x, y, z = images
        if comm(x, y) != z:
            return "relator [x,y] = z violated"
        if comm(x, z) != e or comm(y, z) != e:
            return "z must be central"
    elif isinstance(source, FiniteGroup):
        def image_of(g):
            out = e
            for i, s in source.to_word(g):
                out = ops.mul(out, ops.power(images[i], s))
            return out

        values = {g: image_of(g) for g in source.elements()}
        for g in source.elements():
            for i, s in enumerate(source.generators):
                if values[source.mul(g, s)] != ops.mul(values[g], images[i]):
                    return f"relation broken at {source.format(g)}*{source.gens[i]}"
    return None


@dataclass(frozen=True, eq=False)
class Homomorphism:
    """A group homomorphism given by generator images.

    ``kernel`` optionally lists source elements generating the kernel as a
    normal subgroup.  Construct validated instances with ``make_homomorphism``.
    """

    source: GroupContext
    target: GroupContext
    images: tuple
    kernel: tuple | None = None

    def __call__(self, g: Element) -> Element:
        t = self.target
        out = t.identity()
        for i, e in self.source.to_word(g):
            out = t.mul(out, t.power(self.images[i], e))
        return out

    def compose(self, after: "Homomorphism") -> "Homomorphism":
        """``after`` applied to the result of ``self``."""
        if after.source != self.target:
            raise GroupError("cannot compose: codomain and domain differ")
        return Homomorphism(self.source, after.target, tuple(after(g) for g in self.images))

    def is_surjective(self) -> bool:
        if not isinstance(self.target, FiniteGroup):
            raise GroupError("surjectivity is only decidable for finite targets")
        return len(self.target.subgroup_closure(self.images)) == self.target.order

    def corestrict(self) -> tuple["Homomorphism", list[int]]:
        """Restrict the codomain of a finite-target map to its image.

        Returns the surjective map and, for each new element, the old index.
        """
        t = self.target
        if not isinstance(t, FiniteGroup):
            raise GroupError("corestriction needs a finite target")
        members = t.subgroup_closure(self.images)
        if len(members) == t.order:
            return self, list(t.elements())
        new = {old: k for k, old in enumerate(members)}
        table = [[new[t.mul(a, b)] for b in members] for a in members]
        group = FiniteGroup(
            table,
            names=[t.names[m] for m in members],
            generators=[new[g] for g in self.images],
            generator_names=self.source.gens,
            check=False,
        )
        return Homomorphism(self.source, group, tuple(new[g] for g in self.images)), members

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Homomorphism)
            and self.source == other.source
            and self.target == other.target
            and self.images == other.images
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.images))


def make_homomorphism(
    source: GroupContext,
    target: GroupContext,
    images: Sequence[Element],
    kernel: Sequence[Element] | None = None,
    surjective: bool = True,
) -> Homomorphism:
    """Validated homomorphism ``source -> target``.

    Checks that the images satisfy the source relators, that every listed
    kernel generator maps to the identity, and (for finite targets, when
    ``surjective``) that the images generate the target.
    """
    images = tuple(target.check(g) for g in images)
    problem = relator_violation(source, images, target)
    if problem:
        raise GroupError(f"not a homomorphism: {problem}")
    hom = Homomorphism(source, target, images, tuple(kernel) if kernel is not None else None)
    for k in hom.kernel or ():
        source.check(k)
        if hom(k) != target.identity():
            raise GroupError(f"kernel generator {source.format(k)} does not map to the identity")
    if surjective and target.is_finite and not hom.is_surjective():
        raise GroupError("homomorphism onto a finite group must be surjective")
    return hom


def identity_hom(group: GroupContext) -> Homomorphism:
    return Homomorphism(group, group, tuple(group.gen(i) for i in range(group.rank)), ())


def perm_ops(n: int) -> _PermOps:
    return _PermOps(n)
