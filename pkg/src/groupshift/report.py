"""Deterministic plain-text rendering of solver outcomes."""

from __future__ import annotations

from .certificates import Certificate, EmptinessProof
from .groups import FreeAbelianGroup
from .serialize import canonical_json, encode_element
from .shift import PartialConfiguration, PeriodicConfiguration, stabilizer


def period_block(x: PeriodicConfiguration) -> list[str] | None:
    """Rows of a fundamental rectangle for configurations over Z or Z^2."""
    g = x.group
    if not isinstance(g, FreeAbelianGroup) or g.d not in (1, 2):
        return None
    fixed = set(stabilizer(x)[0])

    def axis_period(i: int) -> int:
        n = 1
        while x.quotient(g.power(g.gen(i), n)) not in fixed:
            n += 1
        return n

    if g.d == 1:
        return ["".join(x.at((i,)) for i in range(axis_period(0)))]
    a, b = axis_period(0), axis_period(1)
    return ["".join(x.at((i, j)) for i in range(a)) for j in range(b)]


def _joined(row: list[str] | tuple[str, ...]) -> str:
    return "".join(row) if all(len(a) == 1 for a in row) else " ".join(row)


def render_configuration(x: PeriodicConfiguration) -> list[str]:
    lines = []
    Q = x.cells
    images = ", ".join(f"{g}->{Q.format(v)}" for g, v in zip(x.group.gens, x.quotient.images))
    lines.append(f"quotient: order {Q.order}; generators {images}")
    _, index = stabilizer(x)
    lines.append(f"stabilizer index: {index}")
    block = period_block(x)
    if block is not None and all(len(a) == 1 for row in block for a in row):
        lines.append(f"period block ({len(block[0])}x{len(block)}):" if len(block) > 1
                     else f"period block (length {len(block[0])}):")
        lines.extend("  " + row for row in block)
    else:
        lines.append("labeling:")
        lines.extend(f"  {Q.format(c)}: {a}" for c, a in zip(Q.elements(), x.labeling))
    return lines


def render_partial(p: PartialConfiguration) -> list[str]:
    g = p.group
    return [f"  {canonical_json(encode_element(g, h))}: {a}" for h, a in p.cells]


def render_provenance(prov: dict) -> str:
    return " ".join(f"{k}={canonical_json(v)}" for k, v in sorted(prov.items()))


def report_certificate(cert: Certificate, name: str = "", verdict: str = "") -> str:
    head = f"sft: {name} (digest {cert.sft_digest[:16]})" if name else f"sft digest: {cert.sft_digest[:16]}"
    lines = []
    p = cert.payload
    if cert.kind == "periodic-point":
        assert isinstance(p, PeriodicConfiguration)
        lines.append("FOUND periodic point")
        lines.append(head)
        lines.extend(render_configuration(p))
    elif cert.kind == "empty-at-radius":
        assert isinstance(p, EmptinessProof)
        lines.append(f"EMPTY (certified at radius {p.radius})")
        lines.append(head)
        lines.append(f"nodes searched: {p.nodes}")
        lines.append(f"exhaustion digest: {p.digest}")
    else:
        assert isinstance(p, PartialConfiguration)
        if cert.kind == "g-invariant-ball":
            elem = canonical_json(encode_element(p.group, cert.element))
            lines.append(f"EVIDENCE ONLY: legal ball of radius {cert.radius} invariant under {elem}")
        else:
            lines.append(f"LEGAL BALL of radius {cert.radius}")
        lines.append(head)
        lines.append("labeling:")
        lines.extend(render_partial(p))
    if cert.provenance:
        lines.append("provenance: " + render_provenance(cert.provenance))
    if verdict:
        lines.append("verified: " + verdict)
    return "\n".join(lines) + "\n"


def report_none(what: str) -> str:
    return f"NONE ({what})\n"


def report_inconclusive(budget: int) -> str:
    return f"INCONCLUSIVE (budget {budget} nodes)\n"


def report_z(period: int | None, cert: Certificate | None = None, name: str = "", verdict: str = "") -> str:
    if period is None:
        return "EMPTY (no cycle in the word graph)\n"
    out = f"nonempty, minimal period {period}\n"
    if cert is not None:
        out += report_certificate(cert, name, verdict)
    return out
