"""Command line interface.

Exit codes: 0 success or accept, 1 domain rejection (invalid lattice,
rejected certificate, no valuation, lattice too large to enumerate),
2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import collapse as col
from . import filters as flt
from . import hilbert3 as h3
from . import lattices
from .oml import LatticeFormatError, OmlValidationError, validate_oml

LEMMA_TOLERANCE = 1e-4


class UsageError(Exception):
    pass


def _emit(args, human: str, machine: dict):
    if args.format == "machine":
        print(json.dumps(machine, sort_keys=True, ensure_ascii=False))
    else:
        print(human)


def _read_lattice(source: str):
    path = Path(source)
    name = source.removeprefix("bundled:")
    if not path.exists() and name in lattices.BUNDLED:
        path = lattices.bundled_path(name)
    try:
        return lattices.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {source}: {exc.strerror or exc}") from exc
    except LatticeFormatError as exc:
        raise UsageError(f"{source}: {exc}") from exc


def _validated(source: str):
    raw = _read_lattice(source)
    try:
        return validate_oml(raw)
    except LatticeFormatError as exc:
        raise UsageError(f"{source}: {exc}") from exc


def cmd_oml_check(args) -> int:
    raw = _read_lattice(args.path)
    try:
        L = validate_oml(raw)
    except LatticeFormatError as exc:
        raise UsageError(f"{args.path}: {exc}") from exc
    except OmlValidationError as exc:
        _emit(args, str(exc), {"valid": False, "error": exc.kind, "law": exc.law,
                               "witnesses": list(exc.witnesses)})
        return 1
    _emit(args, f"valid OML ({len(L)} elements, {len(L.atoms())} atoms)",
          {"valid": True, "elements": len(L), "atoms": sorted(L.atoms())})
    return 0


def cmd_filters(args) -> int:
    try:
        L = _validated(args.path)
    except OmlValidationError as exc:
        _emit(args, str(exc), {"valid": False, "error": exc.kind})
        return 1
    bound = args.max_elements
    try:
        if args.closure is not None:
            gens = [x.strip() for x in args.closure.split(",") if x.strip()]
            unknown = [x for x in gens if x not in L]
            if unknown or not gens:
                raise UsageError(f"unknown element name(s): {', '.join(unknown) or '(none given)'}")
            F = flt.sasaki_closure(flt.generated(L, gens))
            members = sorted(F.members)
            _emit(args, "{" + ", ".join(members) + "}" + ("  proper" if F.proper else "  improper"),
                  {"generators": gens, "closure": members, "proper": F.proper})
            return 0
        if args.enumerate:
            fs = [sorted(F.members) for F in flt.enumerate_sasaki_filters(L, bound)]
            human = "\n".join("{" + ", ".join(m) + "}" for m in fs) + f"\n{len(fs)} Sasaki filters"
            _emit(args, human, {"sasaki_filters": fs, "count": len(fs)})
            return 0
        if args.prevals or args.valuations:
            gen = flt.find_valuations if args.valuations else flt.enumerate_prevaluations
            kind = "valuations" if args.valuations else "pre-valuations"
            vs = [sorted(v.support) for v in gen(L, bound)]
            human = "\n".join("support {" + ", ".join(m) + "}" for m in vs) + f"\n{len(vs)} {kind}"
            _emit(args, human, {kind.replace("-", ""): vs, "count": len(vs)})
            return 0 if vs or not args.valuations else 1
    except flt.TooLarge as exc:
        _emit(args, str(exc), {"error": "TooLarge", "size": exc.size, "bound": exc.bound})
        return 1
    raise UsageError("choose one of --enumerate, --closure, --prevals, --valuations")


def cmd_lemma(args) -> int:
    if not 0.0 < args.theta < 90.0:
        raise UsageError("--theta must be strictly between 0 and 90 degrees")
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    theta = math.radians(args.theta)
    lo, hi = h3.lemma_interval(theta)
    scan = h3.scan_pair_dot(theta, args.grid, refine=not args.no_refine)
    dev_lo, dev_hi = abs(scan.minimum - lo), abs(scan.maximum - hi)
    ok = max(dev_lo, dev_hi) <= LEMMA_TOLERANCE
    human = (
        f"theta = {args.theta:g} deg, grid {args.grid}x{args.grid}\n"
        f"analytic  [{lo:.12f}, {hi:.12f}]\n"
        f"observed  [{scan.minimum:.12f}, {scan.maximum:.12f}]\n"
        f"deviation  {dev_lo:.3e}  {dev_hi:.3e}  {'OK' if ok else 'FAIL'}"
    )
    _emit(args, human, {
        "theta_deg": args.theta, "grid": args.grid, "analytic": [lo, hi],
        "observed": [scan.minimum, scan.maximum], "deviation": [dev_lo, dev_hi], "ok": ok,
    })
    return 0 if ok else 1


def _vector(text: str) -> np.ndarray:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad vector {text!r}") from exc
    if len(parts) != 3 or not all(math.isfinite(x) for x in parts):
        raise UsageError(f"expected three finite numbers, got {text!r}")
    return np.array(parts)


def cmd_collapse(args) -> int:
    if args.u is not None and args.v is not None:
        u, v = _vector(args.u), _vector(args.v)
    elif args.u is None and args.v is None and args.seed is not None:
        u, v = np.random.default_rng(args.seed).normal(size=(2, 3))
    else:
        raise UsageError("give both --u and --v, or --seed for a random pair")
    try:
        cert = col.collapse(u, v)
    except (col.DegeneratePair, h3.DegenerateInput) as exc:
        raise UsageError(str(exc)) from exc
    report = col.verify_certificate(cert)
    if args.out:
        try:
            Path(args.out).write_text(cert.to_json() + "\n")
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror or exc}") from exc
    angle = h3.angle_atoms(*(h3.atom(a) for a in cert.initial_atoms))
    _emit(args,
          f"angle {math.degrees(angle):.9f} deg, {len(cert.rounds)} rounds, "
          f"final residual {report.final_residual:.3e}, {'accepted' if report else 'REJECTED'}",
          {"angle": angle, "rounds": len(cert.rounds), "final_residual": report.final_residual,
           "accepted": report.accepted, "out": args.out})
    return 0 if report else 1


def cmd_verify(args) -> int:
    try:
        text = Path(args.path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror or exc}") from exc
    try:
        cert = col.CollapseCertificate.from_json(text)
    except col.CertificateFormatError as exc:
        raise UsageError(f"{args.path}: {exc}") from exc
    report = col.verify_certificate(cert)
    if report:
        human = f"accepted: {report.rounds} rounds, depth {report.depth}, final residual {report.final_residual:.3e}"
    else:
        human = f"rejected at check {report.check}: {report.reason}"
    _emit(args, human, report.to_dict())
    return 0 if report else 1


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("human", "machine"), default="human")

    p = argparse.ArgumentParser(prog="sasaki", description="Sasaki filters and collapse certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("oml-check", parents=[fmt], help="validate a lattice document")
    s.add_argument("path", help="lattice JSON file, or a bundled name such as mo2")
    s.set_defaults(func=cmd_oml_check)

    s = sub.add_parser("filters", parents=[fmt], help="closures, filters and (pre-)valuations")
    s.add_argument("path")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--enumerate", action="store_true")
    mode.add_argument("--closure", metavar="X1,X2,...")
    mode.add_argument("--prevals", action="store_true")
    mode.add_argument("--valuations", action="store_true")
    s.add_argument("--max-elements", type=int, default=flt.DEFAULT_MAX_ELEMENTS)
    s.set_defaults(func=cmd_filters)

    s = sub.add_parser("lemma", parents=[fmt], help="grid-scan the projected-pair inner product")
    s.add_argument("--theta", type=float, required=True, help="degrees")
    s.add_argument("--grid", type=int, default=720)
    s.add_argument("--no-refine", action="store_true")
    s.set_defaults(func=cmd_lemma)

    s = sub.add_parser("collapse", parents=[fmt], help="build a collapse certificate for two rays")
    s.add_argument("--u", metavar="X,Y,Z")
    s.add_argument("--v", metavar="X,Y,Z")
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_collapse)

    s = sub.add_parser("verify", parents=[fmt], help="check a collapse certificate")
    s.add_argument("path")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"sasaki: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
