"""Command line: ``heptad generate | verify | catalog | search | fixtures | spectrum | explain``.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 inadmissible
order, 4 search exhaustion.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import assembly
from .base_designs import (DERIVED_FIXTURES, Starter, derived_record,
                           fixture_dir, load_fixture, store_fixture)
from .catalog import CLASSES, get_class, reverse_class
from .design import Decomposition, MalformedCertificate, dump_certificate, parse_certificate
from .errors import Exhausted, HeptadError, InvalidHost, NotAdmissible
from .hosts import HostSpec
from .search import OrbitProfile, SearchBudget, derive_fixture, find_starters
from .verifier import diagnose, verify, verify_undirected

OK, FAILED, BAD_INPUT, INADMISSIBLE, EXHAUSTED = 0, 1, 2, 3, 4


def _class_arg(text: str) -> str:
    try:
        return get_class(text).name
    except KeyError as exc:
        raise argparse.ArgumentTypeError(str(exc.args[0])) from exc


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def cmd_generate(args) -> int:
    try:
        d = assembly.generate(args.v, args.cls)
    except NotAdmissible as exc:
        print(f"inadmissible: {exc.reason}", file=sys.stderr)
        return INADMISSIBLE
    except Exhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXHAUSTED
    text = dump_certificate(d, args.format)
    if args.out:
        Path(args.out).write_text(text)
        print(f"{len(d)} blocks")
    else:
        sys.stdout.write(text)
        print(f"{len(d)} blocks", file=sys.stderr)
    return OK


def cmd_verify(args) -> int:
    try:
        parsed = parse_certificate(Path(args.path).read_text())
    except (OSError, MalformedCertificate, KeyError) as exc:
        print(f"malformed certificate: {exc}", file=sys.stderr)
        return BAD_INPUT
    if isinstance(parsed, Decomposition):
        if not parsed.host.directed:
            print("malformed certificate: heptagon blocks on an undirected host", file=sys.stderr)
            return BAD_INPUT
        report = verify(parsed)
    else:
        host, blocks = parsed
        if host.directed:
            print("malformed certificate: undirected blocks on a directed host", file=sys.stderr)
            return BAD_INPUT
        report = verify_undirected(blocks, host)
    print(diagnose(report))
    return OK if report.ok else FAILED


def cmd_catalog(args) -> int:
    for c in CLASSES.values():
        rev = reverse_class(c)
        note = "self-reverse" if rev.id == c.id else f"reverse {rev.name}"
        arcs = " ".join(f"({t},{h})" for t, h in c.arcs)
        print(f"{c.name:<4} {c.word}  {note:<12}  {arcs}")
    pairs = sorted({tuple(sorted((c.id, reverse_class(c).id))) for c in CLASSES.values()
                    if reverse_class(c).id != c.id})
    for a, b in pairs:
        print(f"D{a} ↔ D{b} (reverse pair)")
    return OK


def cmd_spectrum(args) -> int:
    print(" ".join(map(str, assembly.spectrum(args.max))))
    return OK


def cmd_explain(args) -> int:
    try:
        node = assembly.plan(args.v, args.cls)
    except NotAdmissible as exc:
        print(f"inadmissible: {exc.reason}", file=sys.stderr)
        return INADMISSIBLE
    print(json.dumps(node.to_json(), indent=1) if args.json else node.render())
    return OK


def _search_request(text: str):
    data = json.loads(text)
    host = HostSpec.from_json(data["host"])
    profile = OrbitProfile(int(data["modulus"]), bool(data.get("infinity", False)),
                           tuple(int(o) for o in data["orbits"]), int(data.get("levels", 1)))
    budget = data.get("budget", {})
    budget = SearchBudget(nodes=int(budget.get("nodes", SearchBudget.nodes)),
                          seconds=budget.get("seconds"))
    keep = tuple(Starter(tuple(s), profile.modulus) for s in data.get("keep", ()))
    return host, data["class"], profile, budget, keep


def cmd_search(args) -> int:
    try:
        text = Path(args.request).read_text() if Path(args.request).is_file() else args.request
        host, cls, profile, budget, keep = _search_request(text)
        found = find_starters(host, cls, profile, budget, keep)
    except Exhausted as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXHAUSTED
    except (ValueError, KeyError, TypeError, InvalidHost) as exc:
        print(f"bad search request: {exc}", file=sys.stderr)
        return BAD_INPUT
    print(json.dumps({"class": found.cls, **found.to_json()}))
    return OK


def cmd_fixtures(args) -> int:
    status = OK
    directory = fixture_dir()
    for name, (host, cls) in DERIVED_FIXTURES.items():
        path = directory / f"{name}.json"
        stored = None
        try:
            stored = load_fixture(path)
        except (OSError, HeptadError) as exc:
            if not args.regen:
                print(f"{name}: {exc}")
                status = FAILED
                continue
        if not args.regen:
            print(f"{name}: ok {stored.sha256}")
            continue
        try:
            fresh = derive_fixture(host, cls)
        except Exhausted as exc:
            print(f"{name}: search exhausted: {exc}")
            return EXHAUSTED
        if stored is None:
            if args.write:
                store_fixture(fresh, path)
                print(f"{name}: stored {fresh.sha256}")
            else:
                print(f"{name}: derived {fresh.sha256} (nothing stored)")
                status = FAILED
        elif fresh.sha256 == stored.sha256:
            print(f"{name}: reproduced {fresh.sha256}")
        else:
            print(f"{name}: MISMATCH stored {stored.sha256} derived {fresh.sha256}")
            if args.write:
                store_fixture(fresh, path)
            else:
                status = FAILED
    derived_record.cache_clear()
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heptad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build and write a certificate for K*_v")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--class", dest="cls", type=_class_arg, required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a certificate file")
    p.add_argument("path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="list the ten oriented heptagons")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("search", help="search for starters; request is JSON text or a file")
    p.add_argument("request")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("fixtures", help="check the derived fixtures, or re-derive them")
    p.add_argument("--regen", action="store_true")
    p.add_argument("--write", action="store_true", help="store re-derived fixtures that differ or are missing")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("spectrum", help="admissible orders up to a bound")
    p.add_argument("--max", type=_positive, required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("explain", help="print the construction plan")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--class", dest="cls", type=_class_arg, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_explain)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
