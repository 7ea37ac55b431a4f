"""Solver claims and their independent re-verification.

``verify_certificate`` trusts nothing but the payload: it re-checks
membership and stabilizers, re-checks legality of partial labelings, and
re-runs its own exhaustive search for emptiness claims.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .groups import Element, GroupError
from .serialize import (
    configuration_from_json,
    configuration_to_json,
    decode_element,
    digest,
    encode_element,
    partial_from_json,
    partial_to_json,
    sft_digest,
)
from .shift import (
    SFT,
    PartialConfiguration,
    PeriodicConfiguration,
    ShiftError,
    legal_partial,
    make_partial,
    member,
    stabilizer,
)

KINDS = ("periodic-point", "empty-at-radius", "legal-ball", "g-invariant-ball")


@dataclass(frozen=True)
class EmptinessProof:
    radius: int
    nodes: int
    digest: str


@dataclass(frozen=True, eq=False)
class Certificate:
    """A solver claim that ``verify_certificate`` can re-check from scratch.

    ``payload`` is a ``PeriodicConfiguration`` (periodic-point), a
    ``PartialConfiguration`` (legal-ball, g-invariant-ball), or an
    ``EmptinessProof`` (empty-at-radius).
    """

    kind: str
    payload: object
    sft_digest: str
    provenance: dict = field(default_factory=dict)
    stabilizer_index: int | None = None
    element: Element | None = None  # invariance element of a g-invariant-ball
    radius: int | None = None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Certificate) and to_json(self) == to_json(other)


@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


class CertificateError(ValueError):
    pass


def exhaustion_digest(sft: SFT, radius: int) -> str:
    """Content hash binding an emptiness claim to the SFT and the ball searched."""
    g = sft.group
    cells = [encode_element(g, c) for c in g.ball(radius)]
    return digest({"sft": sft_digest(sft), "radius": radius, "cells": cells})


# -- JSON -----------------------------------------------------------------------

def to_json(cert: Certificate) -> dict:
    out: dict = {"kind": cert.kind, "sft_digest": cert.sft_digest, "provenance": cert.provenance}
    p = cert.payload
    if cert.kind == "periodic-point":
        assert isinstance(p, PeriodicConfiguration)
        out["quotient"], out["labeling"] = configuration_to_json(p)
        out["stabilizer_index"] = cert.stabilizer_index
    elif cert.kind == "empty-at-radius":
        assert isinstance(p, EmptinessProof)
        out.update({"radius": p.radius, "nodes": p.nodes, "digest": p.digest})
    else:
        assert isinstance(p, PartialConfiguration)
        out["radius"] = cert.radius
        out["cells"] = partial_to_json(p.group, p.cells)
        if cert.kind == "g-invariant-ball":
            out["element"] = encode_element(p.group, cert.element)
    return out


def from_json(obj: dict, sft: SFT) -> Certificate:
    """Rebuild a certificate; elements are decoded in the SFT's group."""
    try:
        kind = obj["kind"]
        if kind not in KINDS:
            raise CertificateError(f"/kind: unknown certificate kind {kind!r}")
        dig = str(obj["sft_digest"])
        prov = dict(obj.get("provenance", {}))
        g = sft.group
        if kind == "periodic-point":
            x = configuration_from_json(g, obj["quotient"], obj["labeling"])
            idx = obj.get("stabilizer_index")
            return Certificate(kind, x, dig, prov, stabilizer_index=None if idx is None else int(idx))
        if kind == "empty-at-radius":
            proof = EmptinessProof(int(obj["radius"]), int(obj.get("nodes", 0)), str(obj["digest"]))
            return Certificate(kind, proof, dig, prov, radius=proof.radius)
        part = make_partial(g, partial_from_json(g, obj["cells"]))
        elem = decode_element(g, obj["element"]) if kind == "g-invariant-ball" else None
        radius = obj.get("radius")
        return Certificate(kind, part, dig, prov, element=elem, radius=None if radius is None else int(radius))
    except KeyError as e:
        raise CertificateError(f"/{e.args[0]}: missing field") from None
    except (GroupError, ShiftError) as e:
        raise CertificateError(str(e)) from None


# -- verification ---------------------------------------------------------------

def verify_json(sft: SFT, obj: dict) -> Verification:
    """Check the digest before decoding, so a foreign certificate is rejected cleanly."""
    if not isinstance(obj, dict) or "sft_digest" not in obj:
        raise CertificateError("/sft_digest: missing field")
    if obj["sft_digest"] != sft_digest(sft):
        return Verification(False, "sft digest mismatch")
    return verify_certificate(sft, from_json(obj, sft))


def verify_certificate(sft: SFT, cert: Certificate) -> Verification:
    if cert.sft_digest != sft_digest(sft):
        return Verification(False, "sft digest mismatch")
    p = cert.payload
    if cert.kind == "periodic-point":
        if not isinstance(p, PeriodicConfiguration) or p.group != sft.group:
            return Verification(False, "payload is not a configuration over the SFT's group")
        if any(a not in sft.alphabet for a in p.labeling):
            return Verification(False, "labeling uses letters outside the alphabet")
        if not member(p, sft):
            return Verification(False, "a forbidden pattern appears")
        _, index = stabilizer(p)
        if cert.stabilizer_index is not None and index != cert.stabilizer_index:
            return Verification(False, f"stabilizer index is {index}, claimed {cert.stabilizer_index}")
        return Verification(True, f"member; stabilizer index {index}")
    if cert.kind in ("legal-ball", "g-invariant-ball"):
        return _verify_ball(sft, cert)
    if cert.kind == "empty-at-radius":
        if not isinstance(p, EmptinessProof):
            return Verification(False, "payload is not an emptiness proof")
        if p.digest != exhaustion_digest(sft, p.radius):
            return Verification(False, "exhaustion digest mismatch")
        witness = _exhaust(sft, p.radius)
        if witness is not None:
            return Verification(False, f"a legal labeling of the radius-{p.radius} ball exists")
        return Verification(True, f"no legal labeling of the radius-{p.radius} ball")
    return Verification(False, f"unknown kind {cert.kind!r}")


def _verify_ball(sft: SFT, cert: Certificate) -> Verification:
    p = cert.payload
    if not isinstance(p, PartialConfiguration) or p.group != sft.group:
        return Verification(False, "payload is not a partial configuration over the SFT's group")
    g = sft.group
    if cert.radius is not None and set(p.domain) != set(g.ball(cert.radius)):
        return Verification(False, f"domain is not the radius-{cert.radius} ball")
    lab = p.labeling
    if any(a not in sft.alphabet for a in lab.values()):
        return Verification(False, "labeling uses letters outside the alphabet")
    if not legal_partial(lab, sft):
        return Verification(False, "a forbidden pattern appears inside the domain")
    if cert.kind == "g-invariant-ball":
        e = cert.element
        if e is None or e == g.identity():
            return Verification(False, "invariance element missing or trivial")
        for h, a in lab.items():
            b = lab.get(g.mul(e, h))
            if b is not None and b != a:
                return Verification(False, f"not invariant at {g.format(h)}")
        return Verification(True, "legal and invariant inside the ball (evidence only)")
    return Verification(True, "legal labeling of the ball")


def _exhaust(sft: SFT, radius: int) -> dict | None:
    """Depth-first search checking legality with ``legal_partial`` at every step."""
    cells = sft.group.ball(radius)
    letters = sft.alphabet.letters
    lab: dict = {}
    choice = [-1] * len(cells)
    i = 0
    while i >= 0:
        if i == len(cells):
            return lab
        choice[i] += 1
        if choice[i] == len(letters):
            lab.pop(cells[i], None)
            choice[i] = -1
            i -= 1
            continue
        lab[cells[i]] = letters[choice[i]]
        if legal_partial(lab, sft):
            i += 1
    return None
