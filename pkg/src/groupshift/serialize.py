"""JSON encodings of groups, elements, SFTs, coset tables and maps.

Elements are integer arrays for Z^d and the Heisenberg group, words such
as ``"aB"`` for free groups (``"1"`` is the identity), and element names
for finite groups.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Callable

from .cosets import CosetTable, make_coset_table, sublattice_coset_table
from .groups import (
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    GroupContext,
    GroupError,
    HeisenbergGroup,
    Homomorphism,
    make_homomorphism,
)
from .shift import SFT, Alphabet, PeriodicConfiguration, ShiftError, make_pattern, make_sft


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


# -- elements -----------------------------------------------------------------

def encode_element(group: GroupContext, g) -> Any:
    if isinstance(group, (FreeAbelianGroup, HeisenbergGroup)):
        return list(g)
    return group.format(g)


def decode_element(group: GroupContext, obj: Any):
    if isinstance(group, (FreeAbelianGroup, HeisenbergGroup)):
        if isinstance(obj, int) and isinstance(group, FreeAbelianGroup) and group.d == 1:
            obj = [obj]
        if not isinstance(obj, list):
            raise GroupError(f"expected an integer array, got {obj!r}")
        return group.check(tuple(obj))
    if isinstance(group, FreeGroup):
        if not isinstance(obj, str):
            raise GroupError(f"expected a word string, got {obj!r}")
        return group.parse(obj)
    if isinstance(group, FiniteGroup):
        if isinstance(obj, int) and not isinstance(obj, bool):
            if not 0 <= obj < group.order:
                raise GroupError(f"element index {obj} out of range for order {group.order}")
            return obj
        return group.index_of(str(obj))
    raise GroupError(f"cannot decode elements of {group!r}")


# -- groups -------------------------------------------------------------------

def group_to_json(group: GroupContext) -> dict:
    return group.descriptor()


def group_from_json(obj: dict) -> GroupContext:
    kind = obj.get("backend")
    if kind == "free-abelian":
        return FreeAbelianGroup(int(obj.get("rank", 1)), obj.get("generators"))
    if kind == "free-group":
        return FreeGroup(int(obj.get("rank", 2)))
    if kind == "heisenberg":
        return HeisenbergGroup()
    if kind == "finite":
        if "cyclic" in obj:
            return FiniteGroup.cyclic(int(obj["cyclic"]))
        names = obj.get("elements")
        table = obj["table"]
        if names is not None:
            pos = {n: i for i, n in enumerate(names)}
            table = [[pos[v] if isinstance(v, str) else v for v in row] for row in table]
        else:
            names = None
        gens = obj.get("generators")
        if gens is not None:
            gens = [names.index(x) if isinstance(x, str) else x for x in gens]
        return FiniteGroup(table, names=names, generators=gens, generator_names=obj.get("generator_names"))
    raise GroupError(f"unknown group backend {kind!r}")


# -- SFTs ---------------------------------------------------------------------

def sft_to_json(sft: SFT, group_ref: Any = None) -> dict:
    g = sft.group
    return {
        "group": group_ref if group_ref is not None else group_to_json(g),
        "alphabet": list(sft.alphabet.letters),
        "forbidden": [
            {"support": [encode_element(g, w) for w in p.support], "letters": list(p.letters)}
            for p in sft.forbidden
        ],
    }


def sft_from_json(obj: dict, resolve: Callable[[Any], GroupContext], name: str = "") -> SFT:
    group = resolve(obj["group"])
    alphabet = Alphabet(tuple(str(a) for a in obj["alphabet"]))
    pats = []
    for k, p in enumerate(obj.get("forbidden", [])):
        support = [decode_element(group, w) for w in p["support"]]
        letters = [str(a) for a in p["letters"]]
        if len(support) != len(letters):
            raise ShiftError(f"forbidden/{k}: support and letters differ in length")
        for a in letters:
            if a not in alphabet:
                raise ShiftError(f"forbidden/{k}: unknown letter {a!r}")
        try:
            pats.append(make_pattern(group, zip(support, letters)))
        except ShiftError as e:
            raise ShiftError(f"forbidden/{k}: {e}") from None
    return make_sft(group, alphabet, pats, name)


def sft_digest(sft: SFT) -> str:
    return digest(sft_to_json(sft))


# -- coset tables -------------------------------------------------------------

def table_to_json(table: CosetTable, group_ref: Any = None) -> dict:
    g = table.group
    out: dict = {"group": group_ref if group_ref is not None else group_to_json(g)}
    if table.basis is not None:
        out["basis"] = [list(r) for r in table.basis]
    out["index"] = table.index
    out["action"] = {g.gens[i]: list(row) for i, row in enumerate(table.action)}
    out["transversal"] = [encode_element(g, t) for t in table.transversal]
    return out


def table_from_json(obj: dict, resolve: Callable[[Any], GroupContext]) -> CosetTable:
    group = resolve(obj["group"])
    if "basis" in obj:
        table = sublattice_coset_table(group, [tuple(v) for v in obj["basis"]])  # type: ignore[arg-type]
        if "index" in obj and obj["index"] != table.index:
            raise GroupError(f"declared index {obj['index']} but basis has index {table.index}")
        return table
    action = obj["action"]
    if isinstance(action, dict):
        missing = [name for name in group.gens if name not in action]
        if missing:
            raise GroupError(f"action/{missing[0]}: missing generator (group has {', '.join(group.gens)})")
        rows = [action[name] for name in group.gens]
    else:
        rows = action
    trans = obj.get("transversal")
    if trans is not None:
        trans = [decode_element(group, t) for t in trans]
    table = make_coset_table(group, rows, trans)
    if "index" in obj and obj["index"] != table.index:
        raise GroupError("coset action inconsistent: declared index differs from action size")
    return table


# -- homomorphisms and configurations -----------------------------------------

def hom_to_json(hom: Homomorphism, source_ref: Any = None, target_ref: Any = None) -> dict:
    out = {
        "source": source_ref if source_ref is not None else group_to_json(hom.source),
        "target": target_ref if target_ref is not None else group_to_json(hom.target),
        "images": [encode_element(hom.target, g) for g in hom.images],
    }
    if hom.kernel is not None:
        out["kernel"] = [encode_element(hom.source, k) for k in hom.kernel]
    return out


def hom_from_json(obj: dict, resolve: Callable[[Any], GroupContext], surjective: bool = True) -> Homomorphism:
    src = resolve(obj["source"])
    dst = resolve(obj["target"])
    images = [decode_element(dst, v) for v in obj["images"]]
    kernel = obj.get("kernel")
    if kernel is not None:
        kernel = [decode_element(src, k) for k in kernel]
    return make_homomorphism(src, dst, images, kernel, surjective=surjective and dst.is_finite)


def quotient_to_json(x: PeriodicConfiguration) -> dict:
    q = x.quotient
    return {
        "target": group_to_json(q.target),
        "images": [encode_element(q.target, g) for g in q.images],
    }


def configuration_to_json(x: PeriodicConfiguration) -> tuple[dict, dict]:
    labeling = {x.cells.format(c): a for c, a in zip(x.cells.elements(), x.labeling)}
    return quotient_to_json(x), labeling


def configuration_from_json(group: GroupContext, quotient: dict, labeling: dict) -> PeriodicConfiguration:
    target = group_from_json(quotient["target"])
    images = [decode_element(target, v) for v in quotient["images"]]
    hom = make_homomorphism(group, target, images)
    labels = []
    for c in target.elements():  # type: ignore[attr-defined]
        name = target.format(c)
        if name not in labeling:
            raise ShiftError(f"labeling misses quotient element {name!r}")
        labels.append(str(labeling[name]))
    return PeriodicConfiguration(hom, tuple(labels))


def partial_to_json(group: GroupContext, cells) -> list:
    return [[encode_element(group, g), a] for g, a in cells]


def partial_from_json(group: GroupContext, obj: list) -> dict:
    return {decode_element(group, g): str(a) for g, a in obj}
