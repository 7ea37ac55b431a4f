"""Command-line front end: ``groupshift construct|solve|verify|validate``.

Exit codes: 0 found or verified, 1 proven negative, 2 inconclusive,
3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable

from . import constructions as C
from . import solvers as S
from .certificates import (
    Certificate,
    CertificateError,
    to_json as certificate_to_json,
    verify_certificate,
    verify_json,
)
from .groups import GroupError
from .model import ModelError, ModelFile, load_model
from .report import report_certificate, report_inconclusive, report_none, report_z
from .search import BudgetExceeded, default_budget
from .serialize import decode_element, sft_to_json
from .shift import SFT, Alphabet, ShiftError

FOUND, NEGATIVE, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


class Outcome:
    """Text for stdout, JSON for ``--out``/``--format json``, and an exit code."""

    def __init__(self, code: int, text: str, data: Any):
        self.code, self.text, self.data = code, text, data


def _dump(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_element(group, text: str):
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text
    return decode_element(group, value)


def _budget(args) -> int:
    return args.budget if args.budget is not None else default_budget()


# -- construct ----------------------------------------------------------------------

def _sft_outcome(sft: SFT, extra: dict | None = None) -> Outcome:
    data = sft_to_json(sft)
    lines = [
        f"group: {sft.group.descriptor()['backend']}",
        f"alphabet: {len(sft.alphabet)} letters",
        f"forbidden patterns: {len(sft.forbidden)}",
    ]
    for k, v in sorted((extra or {}).items()):
        lines.append(f"{k}: {v}")
    return Outcome(FOUND, "\n".join(lines) + "\n", data)


def cmd_construct(args, model: ModelFile) -> Outcome:
    kind = args.construction
    if kind == "higher-block":
        sft = model.lookup("sfts", args.sft)
        table = model.lookup("subgroups", args.subgroup)
        reps = None
        if args.coset_reps:
            reps = [decode_element(table.group, v) for v in json.loads(args.coset_reps)]
        system = C.higher_block_sft(sft, table, coset_reps=reps, literal=args.literal)
        return _sft_outcome(system.shift, {
            "block cells": len(system.blocks),
            "block letters": len(system.block_alphabet),
            "overlap set size": len(system.overlap),
        })
    if kind == "product":
        s1 = model.lookup("sfts", args.sft)
        s2 = model.lookup("sfts", args.sft2)
        return _sft_outcome(C.product_sft(s1, s2, common_window=args.common_window))
    if kind == "fix":
        group = model.lookup("groups", args.group)
        gens = [decode_element(group, v) for v in json.loads(args.elements)]
        alphabet = Alphabet(tuple(args.alphabet.split(",")))
        return _sft_outcome(C.fix_sft(alphabet, group, gens))
    if kind == "locked":
        return _sft_outcome(C.locked_sft(model.lookup("subgroups", args.subgroup)))
    if kind == "induce":
        sft = model.lookup("sfts", args.sft)
        return _sft_outcome(C.induce_sft(sft, model.subgroup(args.subgroup), coords=args.coords))
    if kind == "pullback":
        sft = model.lookup("sfts", args.sft)
        return _sft_outcome(C.pullback_sft(sft, model.lookup("homs", args.hom)))
    raise ValueError(kind)


# -- solve --------------------------------------------------------------------------

def _checked(sft: SFT, cert: Certificate, name: str, code: int = FOUND, prefix: str = "") -> Outcome:
    """Re-verify a fresh certificate before reporting it."""
    verdict = verify_certificate(sft, cert)
    data = certificate_to_json(cert)
    if not verdict:
        return Outcome(INCONCLUSIVE, f"VERIFICATION FAILED ({verdict.reason})\n", data)
    return Outcome(code, prefix + report_certificate(cert, name, verdict.reason), data)


def _quotients(args, model: ModelFile):
    if not args.quotient:
        return None
    return [model.lookup("homs", name) for name in args.quotient]


def cmd_solve(args, model: ModelFile) -> Outcome:
    kind = args.solver
    sft: SFT = model.lookup("sfts", args.sft)
    budget = _budget(args)
    if kind == "ball":
        cert = S.ball_search(sft, args.radius, budget)
        code = NEGATIVE if cert.kind == "empty-at-radius" else FOUND
        return _checked(sft, cert, args.sft, code)
    if kind == "periodic":
        cert = S.periodic_enumerate(sft, args.max_index, _quotients(args, model), budget)
        if cert is None:
            what = f"no periodic point over quotients of index <= {args.max_index}"
            return Outcome(NEGATIVE, report_none(what), {"result": "none", "max_index": args.max_index})
        return _checked(sft, cert, args.sft)
    if kind == "z":
        result = S.z_analyze(sft)
        if result.empty:
            return Outcome(NEGATIVE, report_z(None), {"result": "empty"})
        cert = S.periodic_certificate(sft, result.configuration, {
            "pipeline": "z_analyze", "minimal_period": result.period})
        out = _checked(sft, cert, args.sft, prefix=f"nonempty, minimal period {result.period}\n")
        return out
    if kind == "transfer":
        table = model.lookup("subgroups", args.subgroup)
        reps = None
        if args.coset_reps:
            reps = [decode_element(table.group, v) for v in json.loads(args.coset_reps)]
        cert = S.transfer_commensurable(sft, args.direction, table, coset_reps=reps,
                                        max_index=args.max_index, budget=budget, coords=args.coords)
        if cert is None:
            what = f"no periodic point found through quotients of index <= {args.max_index}"
            return Outcome(NEGATIVE, report_none(what), {"result": "none", "max_index": args.max_index})
        target = sft if args.coords == "subgroup" or args.direction == "to-overgroup" \
            else C.subgroup_coordinates(sft, model.subgroup(args.subgroup))
        return _checked(target, cert, args.sft)
    if kind == "extension":
        cert = S.extension_push(sft, model.lookup("homs", args.hom), args.max_index,
                                _quotients(args, model), budget)
        if cert is None:
            what = f"no periodic point of the pullback over quotients of index <= {args.max_index}"
            return Outcome(NEGATIVE, report_none(what), {"result": "none", "max_index": args.max_index})
        return _checked(sft, cert, args.sft)
    if kind == "invariant":
        g = parse_element(sft.group, args.element)
        cert = S.g_invariant_search(sft, g, args.radius, budget)
        if cert is None:
            what = f"no legal invariant labeling of the radius-{args.radius} ball"
            return Outcome(NEGATIVE, report_none(what), {"result": "none", "radius": args.radius})
        return _checked(sft, cert, args.sft)
    raise ValueError(kind)


def cmd_verify(args, model: ModelFile) -> Outcome:
    sft = model.lookup("sfts", args.sft)
    try:
        obj = json.loads(Path(args.cert).read_text(encoding="utf-8"))
    except OSError as e:
        raise CertificateError(f"cannot read {args.cert}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise CertificateError(f"invalid JSON at line {e.lineno}: {e.msg}") from None
    verdict = verify_json(sft, obj)
    data = {"ok": verdict.ok, "reason": verdict.reason}
    if verdict:
        return Outcome(FOUND, f"VERIFIED ({verdict.reason})\n", data)
    return Outcome(NEGATIVE, f"REJECTED ({verdict.reason})\n", data)


def cmd_validate(args, model: ModelFile) -> Outcome:
    counts = {k: len(getattr(model, k)) for k in ("groups", "subgroups", "sfts", "homs")}
    text = "valid: " + ", ".join(f"{n} {k}" for k, n in counts.items()) + "\n"
    return Outcome(FOUND, text, {"valid": True, **counts})


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model file (default: bundled library)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="also write the JSON result here")
    common.add_argument("--budget", type=int, help="backtracking node budget")

    p = argparse.ArgumentParser(prog="groupshift", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="build a derived SFT")
    csub = con.add_subparsers(dest="construction", required=True)
    c = csub.add_parser("higher-block", parents=[common])
    c.add_argument("--sft", required=True)
    c.add_argument("--subgroup", required=True)
    c.add_argument("--coset-reps", help="JSON list of coset representatives")
    c.add_argument("--literal", action="store_true", help="emit overlap patterns on all of E")
    c = csub.add_parser("product", parents=[common])
    c.add_argument("--sft", required=True)
    c.add_argument("--sft2", required=True)
    c.add_argument("--common-window", action="store_true")
    c = csub.add_parser("fix", parents=[common])
    c.add_argument("--group", required=True)
    c.add_argument("--elements", required=True, help="JSON list of generators")
    c.add_argument("--alphabet", required=True, help="comma-separated letters")
    c = csub.add_parser("locked", parents=[common])
    c.add_argument("--subgroup", required=True)
    c = csub.add_parser("induce", parents=[common])
    c.add_argument("--sft", required=True)
    c.add_argument("--subgroup", required=True)
    c.add_argument("--coords", choices=("subgroup", "ambient"), default="subgroup")
    c = csub.add_parser("pullback", parents=[common])
    c.add_argument("--sft", required=True)
    c.add_argument("--hom", required=True)

    sol = sub.add_parser("solve", help="search for configurations")
    ssub = sol.add_subparsers(dest="solver", required=True)
    s = ssub.add_parser("ball", parents=[common])
    s.add_argument("--sft", required=True)
    s.add_argument("--radius", type=int, required=True)
    s = ssub.add_parser("periodic", parents=[common])
    s.add_argument("--quotient", action="append", help="hom onto a finite group (repeatable)")
    s.add_argument("--sft", required=True)
    s.add_argument("--max-index", type=int, default=8)
    s = ssub.add_parser("z", parents=[common])
    s.add_argument("--sft", required=True)
    s = ssub.add_parser("transfer", parents=[common])
    s.add_argument("--sft", required=True)
    s.add_argument("--subgroup", required=True)
    s.add_argument("--direction", choices=("to-overgroup", "to-subgroup"), required=True)
    s.add_argument("--coset-reps", help="JSON list of coset representatives")
    s.add_argument("--coords", choices=("subgroup", "ambient"), default="subgroup")
    s.add_argument("--max-index", type=int, default=8)
    s = ssub.add_parser("extension", parents=[common])
    s.add_argument("--quotient", action="append", help="hom onto a finite group (repeatable)")
    s.add_argument("--sft", required=True)
    s.add_argument("--hom", required=True)
    s.add_argument("--max-index", type=int, default=8)
    s = ssub.add_parser("invariant", parents=[common])
    s.add_argument("--sft", required=True)
    s.add_argument("--element", required=True, help="JSON element, e.g. [2] or \"ab\"")
    s.add_argument("--radius", type=int, required=True)

    v = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    v.add_argument("--sft", required=True)
    v.add_argument("--cert", required=True)

    val = sub.add_parser("validate", parents=[common], help="parse and check a model file")
    val.add_argument("path", nargs="?", help="model file (overrides --model)")
    return p


COMMANDS: dict[str, Callable[[Any, ModelFile], Outcome]] = {
    "construct": cmd_construct,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "validate": cmd_validate,
}


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        model = load_model(getattr(args, "path", None) or args.model)
        outcome = COMMANDS[args.command](args, model)
    except BudgetExceeded as e:
        text = report_inconclusive(e.budget)
        outcome = Outcome(INCONCLUSIVE, text, {"result": "inconclusive", "budget": e.budget})
    except (ModelError, CertificateError, GroupError, ShiftError, ValueError) as e:
        print(f"error: {e}", file=stderr)
        return INPUT_ERROR
    if args.out:
        Path(args.out).write_text(_dump(outcome.data), encoding="utf-8")
    stdout.write(_dump(outcome.data) if args.format == "json" else outcome.text)
    return outcome.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
