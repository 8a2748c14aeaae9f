"""
Command-line front end.

Every command reads JSON documents, runs one check and emits a report; the exit
code is 0 (holds), 1 (fails), 2 (unknown) or 3 (input error).

Usage:
    python -m src.cli check-monic --rep data/input/s2_a2.json
    python -m src.cli enumerate --quiver data/input/a2.json --algebra data/input/dual_f2.json --bound 2 --out data/output/oracle
    python -m src.cli reciprocity --quiver data/input/a2.json --algebra data/input/dual_f2.json \
        --tmodule data/input/t_regular.json --testset data/output/oracle
"""

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from .algebra import Algebra, Module, ground_algebra
from .config import DECOMPOSITION_TRIALS, DEFAULT_CUTOFF, DEFAULT_SEED, ENUMERATION_BUDGET
from .errors import (AlgebraMismatchError, BudgetExceeded, DecompositionError, FieldMismatchError, InputError,
                     PreconditionError, UnsupportedFieldError)
from .exactlin import Field as ScalarField
from .fintype import (auslander_equality_check, certify_finite_type, enumerate_indecomposables, lemma63_construct,
                      rel_dim)
from .homalg import are_isomorphic, decompose, ext_dims, hom_basis
from .logger import CheckLogger, setup_logging
from .monrep import Representation, cok, is_monic, lambda_algebra
from .panel import PanelRunner
from .quiver import Quiver
from .schemas import ModuleDoc, QuiverDoc, Verdict, build_algebra, module_doc, parse_document
from .tiltperp import (cotilt_transfer_check, ext_branch_check, gp_corollary_check, gp_membership, hat_membership,
                       is_cotilting, is_gorenstein, perp_membership, reciprocity_check, simple_reduction_check)
from .utils import (load_representation, load_representation_dir, report_text, save_report, summarize_verdicts,
                    write_oracle_dir)

INPUT_ERRORS = (InputError, FieldMismatchError, AlgebraMismatchError, UnsupportedFieldError)

# commands whose T lives over A even when a quiver gives the Λ context
T_OVER_BASE = {"transfer", "reciprocity", "simple-reduction", "ext-branch"}


class CommandRequest(BaseModel):
    """One invocation: the command, its document paths, cutoffs and seed"""
    command: str
    quiver: Optional[str] = None
    algebra: Optional[str] = None
    module: Optional[str] = None
    module2: Optional[str] = None
    tmodule: Optional[str] = None
    rep: Optional[str] = None
    testset: Optional[str] = None
    vertex: Optional[int] = None
    degree: int = Field(default=2, ge=0)
    bound: Optional[str] = None
    monic_only: bool = False
    cutoff: int = Field(default=DEFAULT_CUTOFF, ge=0)
    seed: int = DEFAULT_SEED
    field: Optional[str] = None
    out: Optional[str] = None
    json_output: bool = False
    quiet: bool = False


@dataclass
class Documents:
    """Validated inputs of a request"""
    field: Optional[ScalarField] = None
    quiver: Optional[Quiver] = None
    algebra: Optional[Algebra] = None
    module: Optional[Module] = None
    module2: Optional[Module] = None
    tmodule: Optional[Module] = None
    rep: Optional[Representation] = None
    testset: List[Representation] = dc_field(default_factory=list)

    @property
    def context(self) -> Optional[Algebra]:
        """Λ = kQ⊗A when a quiver is given, else A."""
        if self.quiver is not None and self.algebra is not None:
            return lambda_algebra(self.quiver, self.algebra)
        return self.algebra

    def require(self, *names: str) -> None:
        for name in names:
            value = getattr(self, name)
            if value is None or (name == "testset" and not value):
                raise InputError(f"--{name} is required for this command")

    def lambda_module(self) -> Module:
        """M from --module, or the module of --rep."""
        if self.module is not None:
            return self.module
        if self.rep is not None:
            return self.rep.module
        raise InputError("--module or --rep is required for this command")


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})")


def _located(path: str, fn: Callable[[], Any]) -> Any:
    try:
        return fn()
    except InputError as exc:
        raise exc.relocate(f"{path}#")


def _load_module(path: str, context: Optional[Algebra], default: Optional[ScalarField]) -> Module:
    def build() -> Module:
        doc = parse_document(ModuleDoc, _read_json(path))
        if doc.algebra is not None:
            return doc.build_standalone(default, Path(path).parent)
        if context is None:
            raise InputError("module document has no algebra and no --algebra was given", "/algebra")
        return doc.build(context)
    return _located(path, build)


def parse_documents(req: CommandRequest) -> Documents:
    """Parses and validates every document the request names."""
    docs = Documents()
    if req.field:
        docs.field = ScalarField.parse(req.field)
    if req.quiver:
        docs.quiver = _located(req.quiver, lambda: parse_document(QuiverDoc, _read_json(req.quiver)).build())
    if req.algebra:
        docs.algebra = _located(req.algebra, lambda: build_algebra(_read_json(req.algebra), docs.field,
                                                                    Path(req.algebra).parent))
    elif docs.quiver is not None and docs.field is not None:
        docs.algebra = ground_algebra(docs.field)
    if req.rep:
        docs.rep = _located(req.rep, lambda: load_representation(Path(req.rep), docs.field))
        if docs.algebra is None:
            docs.algebra = docs.rep.algebra
        if docs.quiver is None:
            docs.quiver = docs.rep.quiver
    if req.testset:
        docs.testset = load_representation_dir(req.testset, docs.field)
        if docs.testset and docs.algebra is None:
            docs.algebra = docs.testset[0].algebra
    context = docs.context
    if req.module:
        docs.module = _load_module(req.module, context, docs.field)
    if req.module2:
        docs.module2 = _load_module(req.module2, context, docs.field)
    if req.tmodule:
        base = docs.algebra if req.command in T_OVER_BASE else context
        docs.tmodule = _load_module(req.tmodule, base, docs.field)
    return docs


def _parse_bound(text: Optional[str]) -> Any:
    if not text:
        raise InputError("--bound is required for this command")
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"bad bound {text!r} (expected N or N1,N2,...)", "/bound")
    if any(v < 0 for v in values):
        raise InputError("bounds must be non-negative", "/bound")
    return values[0] if len(values) == 1 else values


# -- command handlers: each returns the verdict and the command-specific result -----------------

Outcome = Tuple[Verdict, Dict[str, Any]]


def _check_monic(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("rep")
    result = is_monic(docs.rep)
    if result.monic:
        return Verdict.holds("monic"), {"dim_vector": list(docs.rep.dim_vector)}
    return Verdict.fails("monic", {"vertex": result.vertex, "kernel_vector": result.kernel_vector}), {}


def _cok(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("rep")
    if req.vertex is None:
        raise InputError("--vertex is required for this command")
    docs.rep.quiver.check_vertex(req.vertex)
    module, _ = cok(docs.rep, req.vertex)
    return Verdict.holds("cok"), {"vertex": req.vertex, "dim": module.dim, "module": module_doc(module)}


def _hom(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    x = docs.lambda_module()
    docs.require("module2")
    basis = hom_basis(x, docs.module2)
    log.info(f"dim Hom = {basis.dim}")
    return Verdict.holds("hom"), {"dim": basis.dim, "basis": [m.to_rows() for m in basis.matrices]}


def _ext(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    x = docs.lambda_module()
    docs.require("module2")
    dims = ext_dims(x, docs.module2, req.degree)
    log.print_dimension_table("Ext dimensions", ["s", "dim Ext^s"], enumerate(dims))
    return Verdict.holds("ext"), {"dims": dims}


def _perp(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    x = docs.lambda_module()
    docs.require("tmodule")
    return perp_membership(x, docs.tmodule, req.cutoff), {}


def _hat(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    x = docs.lambda_module()
    docs.require("tmodule")
    verdict, res = hat_membership(x, docs.tmodule, req.cutoff, req.seed)
    result = {"terms": [m.dim for m in res.terms], "length": res.length} if res is not None else {}
    return verdict, result


def _cotilt_check(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("tmodule")
    found = is_cotilting(docs.tmodule, req.cutoff, req.seed)
    result: Dict[str, Any] = {"r": found.r}
    if found.coresolution is not None:
        result["terms"] = [m.dim for m in found.coresolution.terms]
    return found.verdict, result


def _transfer(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("quiver", "tmodule")
    return cotilt_transfer_check(docs.quiver, docs.tmodule, req.cutoff, req.seed), {}


def _reciprocity(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("quiver", "tmodule", "testset")
    log.info(f"{len(docs.testset)} representations in the test set")
    return reciprocity_check(docs.quiver, docs.tmodule, docs.testset, req.cutoff, PanelRunner()), {}


def _simple_reduction(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("quiver", "tmodule", "testset")
    return simple_reduction_check(docs.quiver, docs.tmodule, docs.testset, req.cutoff, PanelRunner()), {}


def _ext_branch(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("quiver", "tmodule", "rep")
    verdict = ext_branch_check(docs.quiver, docs.tmodule, docs.rep, req.degree)
    dims = (verdict.witness or {}).get("dims", {})
    if dims:
        log.print_dimension_table("Ext over Λ and over A", ["vertex"] + [f"s={s}" for s in range(req.degree + 1)],
                                  ([v] + list(row) for v, row in dims.items()))
    return verdict, {}


def _gp_check(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    if docs.testset:
        docs.require("quiver")
        return gp_corollary_check(docs.quiver, docs.testset, req.cutoff, PanelRunner()), {}
    return gp_membership(docs.lambda_module(), req.cutoff), {}


def _gorenstein(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("algebra")
    a = docs.context
    return is_gorenstein(a, req.cutoff), {"dim": a.dim}


def _certify(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("quiver", "algebra")
    m = docs.lambda_module()
    certificate = certify_finite_type(docs.quiver, docs.algebra, m, req.seed)
    log.print_verdict_table(list(certificate.checks.values()), title="Certificate checks")
    report = certificate.report()
    return certificate.verdict, {"checks": report["checks"], "conclusion": report["conclusion"],
                                 "summary": summarize_verdicts(list(certificate.checks.values())),
                                 "summands": report["summands"]}


def _rel_dim(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    m = docs.lambda_module()
    docs.require("module2")
    found = rel_dim(m, docs.module2, req.cutoff, req.seed)
    if found.finite:
        return Verdict.holds("rel_dim", witness={"rel_dim": found.value}, seed=req.seed), found.to_dict()
    return Verdict.unknown("rel_dim", {"cutoff": req.cutoff}, seed=req.seed), found.to_dict()


def _auslander(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    m = docs.lambda_module()
    docs.require("module2")
    return auslander_equality_check(m, docs.module2, req.cutoff, req.seed), {}


def _lemma63(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    m = docs.lambda_module()
    docs.require("tmodule", "module2")
    built = lemma63_construct(m, docs.tmodule, docs.module2, req.cutoff, req.seed)
    return built.verdict, {"sequence": [s.dim for s in built.sequence], "pd_y": built.pd_y.to_dict(),
                           "pd_hom": built.pd_hom.to_dict(), "y": module_doc(built.y)}


def _enumerate(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    docs.require("quiver", "algebra")
    bound = _parse_bound(req.bound)
    found = enumerate_indecomposables(docs.quiver, docs.algebra, bound, req.seed, req.monic_only,
                                      ENUMERATION_BUDGET, PanelRunner())
    log.print_dimension_table("Indecomposables per dimension vector", ["dim vector", "count"],
                              sorted(found.counts.items()))
    result = {"counts": dict(found.counts), "visited": found.visited, "total": found.total,
              "partial": found.partial, "representations": len(found.representations)}
    if req.out:
        bounds = [bound] * docs.quiver.vertex_count if isinstance(bound, int) else bound
        write_oracle_dir(found, docs.quiver, docs.algebra, bounds, req.monic_only, req.seed, req.out)
        result["directory"] = req.out
    if found.partial:
        return Verdict.unknown("enumerate", {"budget": ENUMERATION_BUDGET}, witness={"visited": found.visited},
                               seed=req.seed), result
    return Verdict.holds("enumerate", witness={"classes": len(found.representations)}, seed=req.seed), result


def _decompose(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    x = docs.lambda_module()
    found = decompose(x, req.seed)
    summands = [{"dim": m.dim, "multiplicity": mult, "module": module_doc(m, with_algebra=False)}
                for m, mult in found.summands]
    result = {"pieces": len(found.pieces), "summands": summands}
    if not found.verify():
        return Verdict.fails("decompose", {"reason": "witness is not an isomorphism"}, seed=req.seed), result
    return Verdict.holds("decompose", witness={"pieces": len(found.pieces)}, seed=req.seed), result


def _iso(req: CommandRequest, docs: Documents, log: CheckLogger) -> Outcome:
    x = docs.lambda_module()
    docs.require("module2")
    found = are_isomorphic(x, docs.module2, req.seed, attempts=DECOMPOSITION_TRIALS)
    result = {"status": found.status, "witness": found.witness.to_rows() if found.witness is not None else None}
    if found.status == "yes":
        return Verdict.holds("iso", witness={"reason": found.reason}, seed=req.seed), result
    if found.status == "no":
        return Verdict.fails("iso", {"reason": found.reason}, seed=req.seed), result
    verdict = Verdict.unknown("iso", {"attempts": DECOMPOSITION_TRIALS}, witness={"reason": found.reason}, seed=req.seed)
    return verdict, result


COMMANDS: Dict[str, Tuple[Callable[[CommandRequest, Documents, CheckLogger], Outcome], str]] = {
    "check-monic": (_check_monic, "is every δ_i of the representation injective"),
    "cok": (_cok, "cokernel of δ_i at a vertex"),
    "hom": (_hom, "basis of Hom(M, M2)"),
    "ext": (_ext, "dim Ext^s(M, M2) for s up to --degree"),
    "perp": (_perp, "membership of M in the left perpendicular category of T"),
    "hat": (_hat, "finite add(T)-coresolution of M"),
    "cotilt-check": (_cotilt_check, "is T cotilting"),
    "transfer": (_transfer, "is kQ⊗T cotilting over kQ⊗A"),
    "reciprocity": (_reciprocity, "Mon(Q, ⊥T) against ⊥(kQ⊗T) on a test set"),
    "simple-reduction": (_simple_reduction, "⊥(kQ⊗T) against ⊥(⊕ S(i)⊗T) on a test set"),
    "ext-branch": (_ext_branch, "Ext over Λ from P(i)⊗T against Ext over A at the branch"),
    "gp-check": (_gp_check, "Gorenstein-projective membership, or the monic description on a test set"),
    "gorenstein": (_gorenstein, "finite injective dimension of the regular module on both sides"),
    "certify-finite-type": (_certify, "certificate for Mon(Q, A) = add(M)"),
    "rel-dim": (_rel_dim, "relative dimension of M2 with respect to add(M)"),
    "auslander-check": (_auslander, "proj.dim of Hom(M, M2) against the relative dimension"),
    "lemma63": (_lemma63, "projective dimension two steps above Hom(M, X)"),
    "enumerate": (_enumerate, "indecomposable representations within a dimension bound"),
    "decompose": (_decompose, "Krull-Schmidt decomposition with multiplicities"),
    "iso": (_iso, "isomorphism test with a witness"),
}


def _error_report(req: CommandRequest, exc: Exception) -> Dict[str, Any]:
    error = {"type": type(exc).__name__, "message": getattr(exc, "message", str(exc))}
    if getattr(exc, "location", ""):
        error["location"] = exc.location
    return {"command": req.command, "error": error}


def execute(req: CommandRequest, log: Optional[CheckLogger] = None) -> Tuple[Dict[str, Any], int]:
    """Runs one command; returns the report and the exit code."""
    log = log or CheckLogger(quiet=True)
    if req.command not in COMMANDS:
        return _error_report(req, InputError(f"unknown command {req.command!r}")), 3
    handler, _ = COMMANDS[req.command]
    log.print_header(req.command, req.seed)
    try:
        log.step(1, "Parsing documents")
        docs = parse_documents(req)
        log.step(2, "Running check")
        verdict, result = handler(req, docs, log)
    except INPUT_ERRORS as exc:
        log.error(str(exc))
        log.print_footer()
        return _error_report(req, exc), 3
    except PreconditionError as exc:
        verdict, result = Verdict.fails(req.command, {"precondition": str(exc)}, seed=req.seed), {}
    except DecompositionError as exc:
        verdict = Verdict.unknown(req.command, {"trials": DECOMPOSITION_TRIALS}, witness={"reason": str(exc)},
                                  seed=req.seed)
        result = {}
    except BudgetExceeded as exc:
        verdict = Verdict.unknown(req.command, {"budget": ENUMERATION_BUDGET}, witness={"reason": str(exc)},
                                  seed=req.seed)
        result = {}
    log.verdict(verdict)
    log.print_footer(verdict.status)
    report = {"command": req.command, "verdict": verdict.report(), "result": result}
    return report, verdict.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moncat", description="Monomorphism categories and cotilting checks")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("--quiver", help="quiver document")
        sub.add_argument("--algebra", help="algebra document (A); defaults to the ground field")
        sub.add_argument("--module", help="module document (M or X)")
        sub.add_argument("--module2", help="second module document")
        sub.add_argument("--tmodule", help="module document for T")
        sub.add_argument("--rep", help="representation document")
        sub.add_argument("--testset", help="directory of representation documents")
        sub.add_argument("--vertex", type=int)
        sub.add_argument("--degree", type=int, default=2, help="largest Ext degree (default 2)")
        sub.add_argument("--bound", help="branch dimension bound: N or N1,N2,...")
        sub.add_argument("--monic-only", action="store_true")
        sub.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
        sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sub.add_argument("--field", help="fp:P or q, for documents without a field")
        sub.add_argument("--out", help="report file (oracle directory for enumerate)")
        sub.add_argument("--json", dest="json_output", action="store_true", help="print the report on stdout")
        sub.add_argument("--quiet", action="store_true")
        sub.add_argument("--verbose", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    values = {k: v for k, v in vars(args).items() if k != "verbose"}
    try:
        req = CommandRequest(**values)
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 3
    report, code = execute(req, CheckLogger(quiet=req.quiet))
    if req.out and req.command != "enumerate":
        save_report(report, req.out)
    if req.json_output:
        sys.stdout.write(report_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
