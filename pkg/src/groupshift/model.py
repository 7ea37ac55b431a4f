"""Model files: named groups, subgroups (coset tables), SFTs and homomorphisms.

A model file is a JSON object with any of the sections ``groups``,
``subgroups``, ``sfts`` and ``homs``, each mapping names to objects.
Objects refer to groups by name, by an inline group object, or as
``{"subgroup": name}`` for the subgroup's own coordinates.  A file whose
top level is a single SFT object is accepted too; the SFT is named after
the file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .cosets import CosetTable, Subgroup, subgroup_context
from .groups import GroupContext, GroupError, Homomorphism
from .serialize import (
    group_from_json,
    group_to_json,
    hom_from_json,
    hom_to_json,
    sft_from_json,
    sft_to_json,
    table_from_json,
    table_to_json,
)
from .shift import SFT, ShiftError

SECTIONS = ("groups", "subgroups", "sfts", "homs")


class ModelError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass
class ModelFile:
    groups: dict[str, GroupContext] = field(default_factory=dict)
    subgroups: dict[str, CosetTable] = field(default_factory=dict)
    sfts: dict[str, SFT] = field(default_factory=dict)
    homs: dict[str, Homomorphism] = field(default_factory=dict)

    def subgroup(self, name: str) -> Subgroup:
        return subgroup_context(self.lookup("subgroups", name))

    def lookup(self, section: str, name: str):
        table = getattr(self, section)
        if name not in table:
            known = ", ".join(sorted(table)) or "none"
            raise ModelError(f"/{section}/{name}", f"no such object (known: {known})")
        return table[name]


def _pointer(*parts: Any) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def bundled_path(name: str = "library.json") -> Path:
    return Path(str(resources.files("groupshift") / "models" / name))


def load_model(path: str | Path | None = None) -> ModelFile:
    path = Path(path) if path is not None else bundled_path()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelError("", f"cannot read {path}: {e.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError("", f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    return parse_model(obj, default_name=path.stem)


def parse_model(obj: Any, default_name: str = "sft") -> ModelFile:
    """Build and validate every object; errors carry a JSON-pointer path."""
    if not isinstance(obj, dict):
        raise ModelError("", "top level must be a JSON object")
    if "alphabet" in obj and "forbidden" in obj:
        obj = {"sfts": {default_name: obj}}
    unknown = sorted(set(obj) - set(SECTIONS))
    if unknown:
        raise ModelError(_pointer(unknown[0]), "unknown section")
    for s in SECTIONS:
        if not isinstance(obj.get(s, {}), dict):
            raise ModelError(_pointer(s), "section must be an object of named entries")
    m = ModelFile()

    def resolve_at(path: str):
        def resolve(ref: Any) -> GroupContext:
            if isinstance(ref, str):
                if ref not in m.groups:
                    raise ModelError(path, f"dangling reference to group {ref!r}")
                return m.groups[ref]
            if isinstance(ref, dict) and set(ref) == {"subgroup"}:
                name = ref["subgroup"]
                if name not in m.subgroups:
                    raise ModelError(path, f"dangling reference to subgroup {name!r}")
                return subgroup_context(m.subgroups[name]).context
            if isinstance(ref, dict):
                return _guard(path, group_from_json, ref)
            raise ModelError(path, f"bad group reference {ref!r}")
        return resolve

    for name, g in obj.get("groups", {}).items():
        m.groups[name] = _guard(_pointer("groups", name), group_from_json, g)
    for name, t in obj.get("subgroups", {}).items():
        p = _pointer("subgroups", name)
        m.subgroups[name] = _guard(p, table_from_json, t, resolve_at(p))
    for name, s in obj.get("sfts", {}).items():
        p = _pointer("sfts", name)
        m.sfts[name] = _guard(p, sft_from_json, s, resolve_at(p), name)
    for name, h in obj.get("homs", {}).items():
        p = _pointer("homs", name)
        m.homs[name] = _guard(p, hom_from_json, h, resolve_at(p))
    return m


def _guard(path: str, fn, *args):
    try:
        return fn(*args)
    except ModelError as e:
        if e.path.startswith(path):
            raise
        raise ModelError(path + e.path, e.message) from None
    except KeyError as e:
        raise ModelError(path + _pointer(e.args[0]), "missing field") from None
    except (GroupError, ShiftError) as e:
        msg = str(e)
        head, sep, rest = msg.partition(": ")
        if sep and head.startswith(("forbidden/", "action/")):
            raise ModelError(path + "/" + head, rest) from None
        raise ModelError(path, msg) from None
    except (TypeError, ValueError, IndexError) as e:
        raise ModelError(path, f"malformed entry ({e})") from None


def serialize_model(m: ModelFile) -> dict:
    """Inverse of ``parse_model``: groups are referenced by name where possible."""

    def ref(g: GroupContext) -> Any:
        for name, h in m.groups.items():
            if h == g:
                return name
        for name, t in m.subgroups.items():
            if subgroup_context(t).context == g:
                return {"subgroup": name}
        return group_to_json(g)

    out: dict = {}
    if m.groups:
        out["groups"] = {n: group_to_json(g) for n, g in m.groups.items()}
    if m.subgroups:
        out["subgroups"] = {n: table_to_json(t, ref(t.group)) for n, t in m.subgroups.items()}
    if m.sfts:
        out["sfts"] = {n: sft_to_json(s, ref(s.group)) for n, s in m.sfts.items()}
    if m.homs:
        out["homs"] = {n: hom_to_json(h, ref(h.source), ref(h.target)) for n, h in m.homs.items()}
    return out
