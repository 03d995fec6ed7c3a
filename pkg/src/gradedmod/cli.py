"""Command line front end.

    gradedmod verify-paper [--input segre.gpa] [--max-degree 20]
    gradedmod hilbert --module nprime --format csv
    gradedmod gb --module nprime
    gradedmod member --module nprime --element w --multiple T1
    gradedmod colon --module nprime --by T1
    gradedmod intersect --left A --right B
    gradedmod nprime [--module nprime]
    gradedmod oracle --module nprime

Exit status: 0 when every check passes, 1 when a check fails, 2 for usage or
input errors, 3 when a resource limit is hit, 4 on I/O failure.  Only the
thread budget (GRADEDMOD_THREADS) and the report path (GRADEDMOD_REPORT) may
come from the environment.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from dataclasses import dataclass

from . import module as mod
from .brackets import kaehler_relations, realizes_to_zero
from .cache import GBCache
from .dsl import PresentationFile, _parse_expr, _poly_lookup, parse_input
from .hilbert import ResourceLimitExceeded, dims_oracle, expand, hilbert_of_presentation
from .report import Section, VerificationReport
from .ring import CoefficientField, Polynomial
from .segre import CROSS_CHECK_PRIME, SegreSuite, bundled_input, segre_from_file

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE, EXIT_IO = 0, 1, 2, 3, 4
FORMATS = ("text", "csv", "keyvalue")


@dataclass(frozen=True)
class RunConfig:
    degree_bound: int = 20
    prime: int | None = None
    threads: int = 1
    output_format: str = "keyvalue"
    report_path: str | None = None

    def __post_init__(self):
        if self.degree_bound < 0:
            raise ValueError("degree bound must be non-negative")
        if self.threads < 1:
            raise ValueError("thread budget must be positive")
        if self.output_format not in FORMATS:
            raise ValueError(f"unknown format {self.output_format!r}")
        if self.prime is not None:
            CoefficientField(self.prime)

    @property
    def field(self) -> CoefficientField | None:
        return None if self.prime is None else CoefficientField(self.prime)


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="presentation file (default: the bundled Segre fixture)")
    p.add_argument("--format", choices=FORMATS, default="keyvalue")
    p.add_argument("--report", help="also write the report to this path")
    p.add_argument("--threads", type=int, help="thread budget")
    p.add_argument("--prime", type=int, help="work over GF(p) instead of QQ (probabilistic)")
    p.add_argument("--max-degree", type=int, default=20)
    p.add_argument("--cache", help="directory of the on-disk Groebner basis store")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="gradedmod", description="Graded module computations.")
    sub = top.add_subparsers(dest="command", required=True)
    p = sub.add_parser("verify-paper", help="run every Segre verification section")
    _common(p)
    p.add_argument("--support-degree", type=int, default=30)
    p.add_argument("--sections", nargs="+", choices=SegreSuite.SECTIONS)
    p = sub.add_parser("hilbert", help="Hilbert series of a module")
    _common(p)
    p.add_argument("--module", required=True)
    p = sub.add_parser("gb", help="reduced Groebner basis of a module's relations")
    _common(p)
    p.add_argument("--module", required=True)
    p = sub.add_parser("member", help="membership of an element in multiple*F + relations")
    _common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--element", required=True, help="element name or expression over the bracket symbols")
    p.add_argument("--multiple", help="polynomial f: test membership in f*F + relations")
    p.add_argument("--expect", choices=("member", "nonmember"), default="member")
    p = sub.add_parser("colon", help="colon of a module's relations by a polynomial")
    _common(p)
    p.add_argument("--module", required=True)
    p.add_argument("--by", required=True)
    p = sub.add_parser("intersect", help="intersection of two relation submodules")
    _common(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p = sub.add_parser("nprime", help="show a bracket-module presentation")
    _common(p)
    p.add_argument("--module")
    p = sub.add_parser("oracle", help="dense linear algebra dimensions against the Groebner route")
    _common(p)
    p.add_argument("--module", required=True)
    return top


def _config(args) -> RunConfig:
    threads = args.threads
    if threads is None:
        env = os.environ.get("GRADEDMOD_THREADS")
        try:
            threads = int(env) if env else 1
        except ValueError:
            raise UsageError("GRADEDMOD_THREADS must be an integer") from None
    report = args.report or os.environ.get("GRADEDMOD_REPORT") or None
    try:
        return RunConfig(args.max_degree, args.prime, threads, args.format, report)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args, cfg: RunConfig) -> PresentationFile:
    if args.input:
        with open(args.input) as fh:
            text = fh.read()
    else:
        text = bundled_input()
    return parse_input(text, cfg.field)


def _resolve(pf: PresentationFile, name: str):
    """(presentation, bracket module or None) for a module name."""
    if name in pf.bracket_modules:
        b = pf.bracket_modules[name]
        return b.presentation, b
    if name in pf.submodules:
        spec = pf.submodules[name]
        b = pf.bracket_modules[spec.module]
        return mod.Presentation(b.free, spec.submodule), b
    if name == "algebra":
        if pf.ring is None:
            raise UsageError("no ring declared")
        F = mod.FreeModule(pf.ring, 1)
        return mod.Presentation(F, mod.Submodule(F, tuple(F.element([r]) for r in pf.relations.values()))), None
    raise UsageError(f"unknown module {name!r}")


def _poly_arg(pf: PresentationFile, text: str) -> Polynomial:
    v = _parse_expr(text, 1, 1, pf.ring, _poly_lookup(pf), None)
    if not isinstance(v, Polynomial):
        raise UsageError("expected a polynomial")
    return v


def _header(command: str, pf: PresentationFile, extra=()) -> list[tuple[str, str]]:
    fld = pf.coefficients
    return [
        ("command", command),
        ("input_digest", hashlib.sha256(pf.serialize().encode()).hexdigest()[:16]),
        ("field", fld.label()),
        ("mode", "exact" if fld.prime is None else "probabilistic cross-check"),
        *extra,
    ]


def cmd_verify(args, cfg: RunConfig) -> VerificationReport:
    pf = _load(args, cfg)
    try:
        data = segre_from_file(pf)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cross = None if pf.coefficients.prime is not None else CROSS_CHECK_PRIME
    suite = SegreSuite(data, cfg.degree_bound, args.support_degree, cross_check_prime=cross)
    return suite.run(cfg.threads, args.sections)


def cmd_hilbert(args, cfg: RunConfig) -> VerificationReport:
    pf = _load(args, cfg)
    pres, _ = _resolve(pf, args.module)
    series = hilbert_of_presentation(pres)
    e = expand(series, cfg.degree_bound)
    sec = Section("hilbert")
    sec.add_series(args.module, e.coefficients)
    sec.witness("series", f"{series.normalized()}\n{series.normalized().over_t_minus_one()}")
    sec.check("dimensions_nonnegative", all(c >= 0 for c in e.values()))
    return VerificationReport(_header("hilbert", pf, [("bound", str(cfg.degree_bound))]), [sec])


def cmd_gb(args, cfg: RunConfig) -> VerificationReport:
    pf = _load(args, cfg)
    pres, _ = _resolve(pf, args.module)
    gb = mod.groebner(pres.relations)
    sec = Section("gb")
    sec.info("size", len(gb))
    sec.check("generators_reduce_to_zero", all(mod.normal_form(g, gb).is_zero() for g in pres.relations.generators))
    sec.witness("basis", gb.serialize() or "0")
    return VerificationReport(_header("gb", pf), [sec])


def cmd_member(args, cfg: RunConfig) -> VerificationReport:
    pf = _load(args, cfg)
    pres, b = _resolve(pf, args.module)
    if args.element in pf.elements:
        v = pf.elements[args.element][1]
    else:
        if b is None:
            raise UsageError("expressions need a bracket module")
        owner = pf.submodules[args.module].module if args.module in pf.submodules else args.module
        v = _parse_expr(args.element, 1, 1, pf.ring, _poly_lookup(pf, owner), b)
    if isinstance(v, Polynomial) or v.ambient != pres.free:
        raise UsageError("element does not live in the module's ambient")
    target = pres.relations
    if args.multiple:
        target = mod.multiples(pres.free, _poly_arg(pf, args.multiple)) + target
    found = mod.is_member(v, target)
    sec = Section("member")
    sec.info("is_member", str(found).lower())
    sec.check(f"expect_{args.expect}", found == (args.expect == "member"))
    return VerificationReport(_header("member", pf), [sec])


def cmd_colon(args, cfg: RunConfig) -> VerificationReport:
    pf = _load(args, cfg)
    pres, _ = _resolve(pf, args.module)
    f = _poly_arg(pf, args.by)
    C = mod.colon(pres.relations, f)
    sec = Section("colon")
    sec.info("generators", len(C))
    sec.check("generators_satisfy_definition", all(mod.is_member(x * f, pres.relations) for x in C.generators))
    sec.info("multiplication_injective", str(mod.equal(C, pres.relations)).lower())
    sec.witness("generators", "\n".join(g.serialize() for g in C.generators) or "0")
    return VerificationReport(_header("colon", pf), [sec])


def cmd_intersect(args, cfg: RunConfig) -> VerificationReport:
    pf = _load(args, cfg)
    a, _ = _resolve(pf, args.left)
    b, _ = _resolve(pf, args.right)
    if a.free != b.free:
        raise UsageError("modules live in different ambients")
    I = mod.intersect(a.relations, b.relations)
    sec = Section("intersect")
    sec.info("generators", len(I))
    sec.check("generators_in_both", all(mod.is_member(g, a.relations) and mod.is_member(g, b.relations)
                                        for g in I.generators))
    sec.witness("generators", "\n".join(g.serialize() for g in I.generators) or "0")
    return VerificationReport(_header("intersect", pf), [sec])


def cmd_nprime(args, cfg: RunConfig) -> VerificationReport:
    pf = _load(args, cfg)
    if args.module:
        if args.module not in pf.bracket_modules:
            raise UsageError(f"unknown bracket module {args.module!r}")
        name = args.module
    elif len(pf.bracket_modules) == 1:
        (name,) = pf.bracket_modules
    else:
        raise UsageError("several bracket modules; pass --module")
    b = pf.bracket_modules[name]
    sec = Section("nprime")
    sec.info("rank", b.free.rank)
    sec.info("relations", len(b.relations))
    sec.witness("slots", "\n".join(f"{s} {n} degree {d}" for s, (n, d) in
                                   enumerate(zip(b.slot_names(), b.free.shifts))))
    sec.witness("relations", "\n".join(f"{lab}: {r.serialize()}" for lab, r in zip(b.labels, b.relations.generators)))
    sec.check("relations_homogeneous", all(r.is_homogeneous() for r in b.relations.generators))
    alg = pf.algebra()
    omega = kaehler_relations(alg)
    sec.check("relations_realize_to_zero", all(realizes_to_zero(alg, b, r, omega) for r in b.relations.generators))
    return VerificationReport(_header("nprime", pf), [sec])


def cmd_oracle(args, cfg: RunConfig) -> VerificationReport:
    pf = _load(args, cfg)
    pres, _ = _resolve(pf, args.module)
    gb = expand(hilbert_of_presentation(pres), cfg.degree_bound)
    orc = dims_oracle(pres, cfg.degree_bound)
    sec = Section("oracle")
    sec.add_series("groebner", gb.coefficients)
    sec.add_series("oracle", orc.coefficients)
    sec.check("agree", gb == orc)
    return VerificationReport(_header("oracle", pf, [("bound", str(cfg.degree_bound))]), [sec])


COMMANDS = {
    "verify-paper": cmd_verify,
    "hilbert": cmd_hilbert,
    "gb": cmd_gb,
    "member": cmd_member,
    "colon": cmd_colon,
    "intersect": cmd_intersect,
    "nprime": cmd_nprime,
    "oracle": cmd_oracle,
}


def run_command(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cache = None
    try:
        cfg = _config(args)
        if args.cache:
            cache = GBCache(args.cache)
            mod.set_gb_cache(cache)
        report = COMMANDS[args.command](args, cfg)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except ResourceLimitExceeded as exc:
        print(f"error: resource limit: {exc}", file=err)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_IO
    finally:
        if cache is not None:
            mod.set_gb_cache(None)
    if cache is not None:
        report.header.append(("gb_cache", f"hits={cache.hits} misses={cache.misses}"))
    text = report.render(cfg.output_format)
    out.write(text)
    if cfg.report_path:
        try:
            with open(cfg.report_path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: {exc}", file=err)
            return EXIT_IO
    if not report.passed:
        print("failing: " + ", ".join(report.failing()), file=err)
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
