"""
Command-line front end.

    python -m khovanov compute --pd "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)" --variant odd
    python -m khovanov verify --corpus corpus/ --checks dsquared,euler
    python -m khovanov corpus validate

Exit codes: 0 pass, 1 check failure, 2 input error, 3 internal invariant violation.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from khovanov.config import Settings, get_settings
from khovanov.core.coeff import SpecVariant
from khovanov.core.complex import build_complex, complex_to_json
from khovanov.core.cube import build_cube, cube_to_json, sign_assignment
from khovanov.core.diagram import Diagram, parse_pd, with_arrows
from khovanov.core.homology import render_table
from khovanov.exceptions import InputError, KhovanovError
from khovanov.models.schemas import VALID_CHECKS, Job, VerifyReport
from khovanov.observability.logfire_config import (
    configure_structlog,
    initialize_logfire,
    log_error,
    log_event,
    log_warning,
)
from khovanov.services.compute import block_tables, compute_table, enforce_limit
from khovanov.services.corpus import CorpusService, entry_diagram
from khovanov.services.verification import VerificationService


def _dump(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def parse_blocks(text: Optional[str]) -> Optional[tuple[int, int]]:
    """'-2..2' -> (-2, 2)."""
    if text is None:
        return None
    low, sep, high = text.partition("..")
    try:
        return (int(low), int(high)) if sep else (int(low), int(low))
    except ValueError:
        raise InputError(f"--blocks expects LOW..HIGH, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="khovanov",
        description="Generalized, even, odd and unified Khovanov homology from PD codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_source(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group()
        group.add_argument("--pd", help="inline PD code, e.g. 'X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)'")
        group.add_argument("--file", help="PD file (corpus front matter optional)")
        group.add_argument("--corpus", help="directory of corpus *.pd files")
        p.add_argument("--arrows", help="arrow override, one 0/1 bit per crossing")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--allow-large", action="store_true", help="lift the crossing limit")

    compute = sub.add_parser("compute", help="compute a homology table")
    add_source(compute)
    compute.add_argument("--variant", default="even", help="even, odd, unified, mod2, negated or generalized")
    compute.add_argument("--blocks", help="splitting-degree block depths LOW..HIGH (generalized)")
    compute.add_argument("--dump-complex", action="store_true")
    compute.add_argument("--dump-cube", action="store_true")

    verify = sub.add_parser("verify", help="run verification suites")
    add_source(verify)
    verify.add_argument(
        "--checks",
        default=",".join(VALID_CHECKS),
        help=f"comma-separated subset of {','.join(VALID_CHECKS)}",
    )
    verify.add_argument("--seed", type=int, default=None)

    corpus = sub.add_parser("corpus", help="manage the PD corpus")
    corpus.add_argument("action", choices=["list", "add", "validate"])
    corpus.add_argument("path", nargs="?", help="file to add")
    corpus.add_argument("--dir", help="corpus directory (defaults to KH_CORPUS_DIR)")
    corpus.add_argument("--json", action="store_true")
    return parser


def make_job(args: argparse.Namespace, settings: Settings) -> Job:
    try:
        return Job(
            pd=args.pd,
            file=args.file,
            corpus=args.corpus,
            variant=getattr(args, "variant", "even"),
            checks=[c.strip() for c in getattr(args, "checks", "").split(",") if c.strip()],
            output="json" if args.json else "text",
            arrows=args.arrows,
            dump_complex=getattr(args, "dump_complex", False),
            dump_cube=getattr(args, "dump_cube", False),
            blocks=parse_blocks(getattr(args, "blocks", None)),
            seed=settings.seed if getattr(args, "seed", None) is None else args.seed,
            allow_large=args.allow_large,
        )
    except ValidationError as e:
        raise InputError(e.errors()[0]["msg"]) from e


def _read_diagram(path: Path) -> Diagram:
    if not path.exists():
        raise InputError(f"file not found: {path}")
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("---"):
        return entry_diagram(CorpusService(path.parent).load_entry(path))
    return parse_pd(text)


def load_diagrams(job: Job, settings: Settings) -> list[tuple[str, Diagram, list[Diagram]]]:
    """(name, diagram, equivalent presentations) for every diagram the job names."""
    if job.pd is not None:
        items = [(job.pd, parse_pd(job.pd), [])]
    elif job.file is not None:
        items = [(job.file, _read_diagram(Path(job.file)), [])]
    else:
        corpus_dir = Path(job.corpus) if job.corpus else settings.corpus_path
        service = CorpusService(corpus_dir, _corpus_config(settings))
        items = [
            (e.name, entry_diagram(e), service.equivalents(e.name))
            for e in service.list_entries()
        ]
    out = []
    for name, d, equivalents in items:
        if job.arrows is not None:
            try:
                d = with_arrows(d, job.arrows)
            except ValueError as e:
                raise InputError(str(e)) from e
        enforce_limit(d, settings.crossing_limit, job.allow_large)
        out.append((name, d, equivalents))
    return out


def _corpus_config(settings: Settings) -> dict[str, Any]:
    try:
        return settings.load_corpus_config()
    except FileNotFoundError:
        log_warning("corpus_config_missing", path=settings.corpus_config_path)
        return {"groups": []}


def cmd_compute(job: Job, settings: Settings) -> int:
    variant = SpecVariant(job.variant)
    documents = []
    for name, d, _ in load_diagrams(job, settings):
        c = build_complex(d)
        if variant is SpecVariant.GENERALIZED:
            low, high = job.blocks or (0, 0)
            tables = block_tables(d, low, high, c)
        else:
            tables = [compute_table(d, variant, c)]
        doc: dict[str, Any] = {
            "diagram": name,
            "tables": [t.model_dump(mode="json") for t in tables],
        }
        if job.dump_complex:
            doc["complex"] = complex_to_json(c)
        if job.dump_cube:
            cube = build_cube(d)
            doc["cube"] = cube_to_json(cube, sign_assignment(cube))
        documents.append(doc)
        if job.output == "text":
            print(f"# {name}")
            for t in tables:
                print(render_table(t))
            extras = {k: doc[k] for k in ("complex", "cube") if k in doc}
            if extras:
                print(_dump(extras))
    if job.output == "json":
        print(_dump(documents[0] if len(documents) == 1 else documents))
    log_event("compute_finished", diagrams=len(documents), variant=variant.value)
    return 0


def _verify_one(payload: tuple[str, Diagram, list[Diagram], list[str], int]) -> VerifyReport:
    name, d, equivalents, checks, seed = payload
    return VerificationService(seed=seed).run(d, checks, name, equivalents)


def cmd_verify(job: Job, settings: Settings) -> int:
    if not job.checks:
        raise InputError("no checks selected")
    payloads = [(n, d, eq, job.checks, job.seed) for n, d, eq in load_diagrams(job, settings)]
    if settings.threads > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=settings.threads) as pool:
            reports = list(pool.map(_verify_one, payloads))
    else:
        reports = [_verify_one(p) for p in payloads]

    if job.output == "json":
        dumped = [r.model_dump(mode="json") for r in reports]
        print(_dump(dumped[0] if len(dumped) == 1 else dumped))
    else:
        for r in reports:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.diagram}")
            for check in r.checks:
                print(f"  {'ok  ' if check.passed else 'FAIL'} {check.name}")
                for detail in check.details:
                    print(f"       {detail}")
    failed = [r.diagram for r in reports if not r.passed]
    if failed:
        log_error("verify_failed", diagrams=failed)
        return 1
    return 0


def cmd_corpus(args: argparse.Namespace, settings: Settings) -> int:
    service = CorpusService(Path(args.dir or settings.corpus_path), _corpus_config(settings))
    if args.action == "list":
        entries = service.list_entries()
        if args.json:
            print(_dump([e.model_dump(mode="json", exclude={"expected"}) for e in entries]))
        else:
            for e in entries:
                partner = service.mirror_partner(e.name)
                mirror_note = f" mirror={partner}" if partner else ""
                print(f"{e.name:<20} crossings={e.crossings:<3} components={e.components:<2} {e.pd}{mirror_note}")
        return 0
    if args.action == "add":
        if not args.path:
            raise InputError("corpus add needs a file path")
        entry = service.add(Path(args.path))
        print(entry.path)
        return 0
    results = service.validate(settings.threads)
    if args.json:
        print(_dump([r.model_dump(mode="json") for r in results]))
    else:
        for r in results:
            print(f"{'ok  ' if r.passed else 'FAIL'} {r.name}")
            for detail in r.details:
                print(f"     {detail}")
    return 0 if all(r.passed for r in results) else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    configure_structlog("DEBUG" if settings.debug else settings.log_level)
    initialize_logfire()
    try:
        if args.command == "corpus":
            return cmd_corpus(args, settings)
        job = make_job(args, settings)
        if args.command == "compute":
            return cmd_compute(job, settings)
        return cmd_verify(job, settings)
    except KhovanovError as e:
        print(f"error: {e}", file=sys.stderr)
        log_error("command_failed", command=args.command, error=str(e), exit_code=e.exit_code)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
