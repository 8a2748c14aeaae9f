"""
Finite-type certificates for monomorphism categories, relative dimensions
over End(M)^op, and the enumeration oracle for small instances.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import (Algebra, Module, ModuleMap, algebra_radical, direct_sum, ground_algebra, injective_cogenerator,
                      quotient_module, zero_module)
from .config import DEFAULT_CUTOFF, DEFAULT_SEED, ENUMERATION_BUDGET
from .errors import AlgebraMismatchError, InputError, PreconditionError, UnsupportedFieldError
from .exactlin import Matrix, column_space, hstack, rank
from .homalg import (DimensionResult, EndomorphismAlgebra, HomBasis, are_isomorphic, decompose, endo_algebra,
                     global_dimension, hom_basis, hom_dim, homological_dimension, indecomposables_isomorphism,
                     is_indecomposable, kernel_cokernel)
from .monrep import Representation, is_monic, lambda_algebra, m_functor, module_to_rep
from .panel import PanelRunner
from .quiver import Quiver
from .schemas import CertificateReport, Status, Verdict, representation_doc
from .tiltperp import (add_membership, add_pieces, left_add_approximation, minimal_components, perp_membership,
                       right_add_approximation)

logger = logging.getLogger(__name__)

# Γ up to this dimension goes through the generic global dimension routine
GENERIC_GAMMA_DIM = 24


def _require_prime_field(x: Union[Module, Algebra], what: str) -> None:
    if not x.field.is_finite:
        raise UnsupportedFieldError(f"{what} needs decomposition, only available over prime fields")


def _split_lambda(lam: Algebra) -> Optional[Tuple[Quiver, Algebra]]:
    if lam.kind == "tensor" and lam.factors[0].kind == "path_algebra":
        return lam.factors[0].quiver, lam.factors[1]
    return None


def _contains(pieces: Sequence[Module], candidate: Module) -> bool:
    return any(indecomposables_isomorphism(candidate, p) is not None for p in pieces)


# -- generator and relative cogenerator --------------------------------------------------------

def indecomposable_projectives(lam: Algebra, seed: int = DEFAULT_SEED) -> List[Tuple[str, Module]]:
    """P(i)⊗P for Λ = kQ⊗A; the basic summands of Λ otherwise."""
    split = _split_lambda(lam)
    if split is None:
        return [(f"P{k}", p) for k, p in enumerate(decompose(lam.regular, seed).basic)]
    q, a = split
    projectives = decompose(a.regular, seed).basic
    return [(f"P({i})⊗P{k}", m_functor(q, i, p).module) for i in q.vertices for k, p in enumerate(projectives)]


def is_generator(m: Module, seed: int = DEFAULT_SEED) -> Verdict:
    """Every indecomposable projective is isomorphic to a summand of m."""
    check = "generator"
    _require_prime_field(m, "the generator test")
    pieces = decompose(m, seed).basic if m.dim else []
    for label, p in indecomposable_projectives(m.algebra, seed):
        if not _contains(pieces, p):
            return Verdict.fails(check, {"missing": label}, seed=seed)
    return Verdict.holds(check, seed=seed)


def is_relative_cogenerator_mon(m: Module, seed: int = DEFAULT_SEED) -> Verdict:
    """Summands of m are monic and every summand P(i)⊗I of kQ⊗D(A) occurs in m."""
    check = "relative_cogenerator"
    _require_prime_field(m, "the relative cogenerator test")
    split = _split_lambda(m.algebra)
    if split is None:
        raise InputError("module is not over a tensor of a path algebra with A")
    q, a = split
    pieces = decompose(m, seed).basic if m.dim else []
    for k, p in enumerate(pieces):
        monic = is_monic(module_to_rep(p))
        if not monic.monic:
            return Verdict.fails(check, {"summand": k, "clause": "monic", "vertex": monic.vertex}, seed=seed)
    injectives = decompose(injective_cogenerator(a), seed).basic
    for i in q.vertices:
        for k, inj in enumerate(injectives):
            if not _contains(pieces, m_functor(q, i, inj).module):
                return Verdict.fails(check, {"missing": f"P({i})⊗I{k}"}, seed=seed)
    return Verdict.holds(check, seed=seed)


# -- global dimension of End(M)^op ---------------------------------------------------------------

def radical_maps(pieces: Sequence[Module], a_index: int) -> List[Tuple[int, Matrix]]:
    """Basis of rad(M_b, M_a) for all pieces b, as (b, matrix) pairs."""
    target = pieces[a_index]
    out: List[Tuple[int, Matrix]] = []
    for b, p in enumerate(pieces):
        if b == a_index:
            endo = endo_algebra(target)
            rad = algebra_radical(endo.algebra)
            out.extend((b, endo.element(rad.data[:, k])) for k in range(rad.cols))
        else:
            out.extend((b, h) for h in hom_basis(p, target).matrices)
    return out


def sink_map(pieces: Sequence[Module], a_index: int) -> ModuleMap:
    """Minimal right almost split map E -> M_a inside add of the pieces."""
    target = pieces[a_index]
    components = radical_maps(pieces, a_index)
    targets = [sum(1 for b, _ in components if b == j) for j in range(len(pieces))]
    if components:
        components = minimal_components(components, pieces, targets)
    source = direct_sum([pieces[b] for b, _ in components], target.algebra)
    return ModuleMap(source, target, hstack(target.field, [h for _, h in components], rows=target.dim))


def gamma_global_dimension(pieces: Sequence[Module]) -> DimensionResult:
    """
    gl.dim End(M)^op for M the sum of the given pairwise non-isomorphic
    indecomposables, M a generator.

    With g: E -> M_a the sink map and K its kernel, the simple at M_a has
    projective dimension 0 when E = 0, 1 when K = 0, 2 when K is in add(M),
    and at least 3 otherwise.
    """
    worst = 0
    for a_index in range(len(pieces)):
        g = sink_map(pieces, a_index)
        if g.source.dim == 0:
            continue
        kernel = kernel_cokernel(g).kernel
        if kernel.dim == 0:
            worst = max(worst, 1)
        elif add_membership(kernel, kernel, pieces=pieces).ok:
            worst = max(worst, 2)
        else:
            return DimensionResult(at_least=3)
    return DimensionResult(value=worst)


# -- certificates ----------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteTypeCertificate:
    quiver: Quiver
    algebra: Algebra
    verdict: Verdict
    checks: Dict[str, Verdict]
    summands: Tuple[Representation, ...] = ()

    @property
    def conclusion(self) -> Optional[str]:
        return "Mon(Q,A) = add(M)" if self.verdict.ok else None

    def report(self) -> Dict:
        doc = CertificateReport(**self.verdict.model_dump(), checks=self.checks, conclusion=self.conclusion,
                                summands=[representation_doc(x) for x in self.summands])
        return doc.model_dump(mode="json")


def certify_finite_type(q: Quiver, a: Algebra, m: Module, seed: int = DEFAULT_SEED) -> FiniteTypeCertificate:
    """Mon(Q, A) = add(m) when m is a generator and relative cogenerator with gl.dim End(m)^op ≤ 2."""
    check = "finite_type"
    _require_prime_field(m, "certification")
    if m.algebra != lambda_algebra(q, a):
        raise AlgebraMismatchError("M is not a module over kQ⊗A")
    checks = {"generator": is_generator(m, seed), "relative_cogenerator": is_relative_cogenerator_mon(m, seed)}
    for name, verdict in checks.items():
        if not verdict.ok:
            failed = Verdict.fails(check, {"precondition": name, "detail": verdict.witness}, seed=seed)
            return FiniteTypeCertificate(q, a, failed, checks)
    pieces = decompose(m, seed).basic
    basic = direct_sum(pieces, m.algebra)
    gamma_dim = sum(hom_dim(u, v) for u in pieces for v in pieces)
    if gamma_dim <= GENERIC_GAMMA_DIM:
        gamma = endo_algebra(basic).algebra.opposite
        gldim = global_dimension(gamma, 2)
        method = "generic"
    else:
        gldim = gamma_global_dimension(pieces)
        method = "sink_maps"
    logger.info("gl.dim of End(M)^op (dim %d, %s): %s", gamma_dim, method, gldim)
    detail = {"gldim": str(gldim), "gamma_dim": gamma_dim, "method": method}
    if gldim.within(2):
        checks["gldim_end_le_2"] = Verdict.holds("gldim_end_le_2", witness=detail, cutoffs={"gldim": 2})
    else:
        checks["gldim_end_le_2"] = Verdict.fails("gldim_end_le_2", detail, cutoffs={"gldim": 2})
        failed = Verdict.fails(check, {"precondition": "gldim_end_le_2", "detail": detail}, seed=seed)
        return FiniteTypeCertificate(q, a, failed, checks)
    summands = tuple(module_to_rep(p, label=f"M{k}") for k, p in enumerate(pieces))
    verdict = Verdict.holds(check, witness={"summands": len(summands), "gldim": gldim.value, "method": method},
                            cutoffs={"gldim": 2}, seed=seed)
    return FiniteTypeCertificate(q, a, verdict, checks, summands)


# -- relative dimension and Hom modules ---------------------------------------------------------------

def rel_dim(m: Module, x: Module, cutoff: int = DEFAULT_CUTOFF, seed: int = DEFAULT_SEED) -> DimensionResult:
    """Least d with Ω_M^d(X) in add(M), Ω_M the kernel of a minimal right add(M)-approximation."""
    _require_prime_field(m, "rel_dim")
    pieces = add_pieces(m, minimize=True, seed=seed)
    current = x
    for d in range(cutoff + 1):
        if add_membership(current, m, pieces=pieces).ok:
            return DimensionResult(value=d)
        approx = right_add_approximation(m, current, minimize=True, seed=seed, pieces=pieces)
        current = kernel_cokernel(approx).kernel
    return DimensionResult(at_least=cutoff + 1)


@dataclass(frozen=True, eq=False)
class HomModule:
    """Hom(M, X) as a module over Γ = End(M)^op, with γ acting by h -> h∘γ."""
    module: Module
    endo: EndomorphismAlgebra
    hom: HomBasis


def hom_module(m: Module, x: Module, endo: Optional[EndomorphismAlgebra] = None) -> HomModule:
    endo = endo or endo_algebra(m)
    gamma = endo.algebra.opposite
    hom = hom_basis(m, x)
    if hom.dim == 0:
        return HomModule(zero_module(gamma), endo, hom)
    action = []
    for b in endo.hom.matrices:
        action.append(hstack(x.field, [hom.coords(h @ b) for h in hom.matrices]))
    label = f"Hom({m.label},{x.label})" if m.label and x.label else ""
    return HomModule(Module(gamma, tuple(action), label=label), endo, hom)


def hom_map(source: HomModule, target: HomModule, f: Matrix) -> ModuleMap:
    """Hom(M, f): h -> f∘h"""
    field = f.field
    if source.hom.dim == 0 or target.hom.dim == 0:
        return ModuleMap(source.module, target.module, Matrix.zeros(field, target.module.dim, source.module.dim))
    return ModuleMap(source.module, target.module,
                     hstack(field, [target.hom.coords(f @ h) for h in source.hom.matrices]))


def auslander_equality_check(m: Module, x: Module, cutoff: int = DEFAULT_CUTOFF, seed: int = DEFAULT_SEED) -> Verdict:
    """proj.dim over End(M)^op of Hom(M, X) against rel.dim_M X; equal when M is a generator."""
    check = "auslander"
    _require_prime_field(m, "the relative dimension check")
    generator = is_generator(m, seed).ok
    left = homological_dimension(hom_module(m, x).module, "projective", cutoff)
    right = rel_dim(m, x, cutoff, seed)
    detail = {"pd_gamma": str(left), "rel_dim": str(right), "generator": generator}
    if not (left.finite and right.finite):
        if left.finite and not right.finite and not generator:
            return Verdict.holds(check, witness=detail, cutoffs={"cutoff": cutoff}, seed=seed)
        return Verdict.unknown(check, {"cutoff": cutoff}, witness=detail, seed=seed)
    if left.value > right.value or (generator and left.value != right.value):
        return Verdict.fails(check, detail, cutoffs={"cutoff": cutoff}, seed=seed)
    return Verdict.holds(check, witness=detail, cutoffs={"cutoff": cutoff}, seed=seed)


@dataclass(frozen=True, eq=False)
class Lemma63Result:
    y: Module
    sequence: Tuple[Module, Module, Module]
    maps: Tuple[Matrix, Matrix]
    pd_y: DimensionResult
    pd_hom: DimensionResult
    verdict: Verdict


def lemma63_construct(m: Module, t: Module, x: Module, cutoff: int = DEFAULT_CUTOFF,
                      seed: int = DEFAULT_SEED) -> Lemma63Result:
    """
    Y = cok(Hom(M, T_0) -> Hom(M, T_1)) for 0 -> X -> T_0 -> T_1 built from left
    add(T)-approximations; proj.dim Y should be 2 + proj.dim Hom(M, X).
    """
    check = "lemma63"
    if not add_membership(t, m).ok:
        raise PreconditionError("T is not in add(M)")
    pieces = add_pieces(t, t.field.is_finite, seed)
    if add_membership(x, t, pieces=pieces).ok:
        raise PreconditionError("X lies in add(T)")
    u = left_add_approximation(t, x, pieces=pieces)
    if rank(u.matrix) != x.dim:
        raise PreconditionError("X is not cogenerated by T")
    split = kernel_cokernel(u)
    c, proj = split.cokernel, split.cokernel_projection
    w = left_add_approximation(t, c, pieces=pieces)
    if rank(w.matrix) != c.dim:
        raise PreconditionError("no exact sequence 0 -> X -> T_0 -> T_1 with terms in add(T)")
    for name, module in (("X", x), ("image", c)):
        if perp_membership(module, t, cutoff).status == Status.FAILS:
            raise PreconditionError(f"{name} is not in the left perpendicular category of T")
    t0, t1 = u.target, w.target
    d = w.matrix @ proj
    endo = endo_algebra(m)
    h_x, h_0, h_1 = hom_module(m, x, endo), hom_module(m, t0, endo), hom_module(m, t1, endo)
    v = hom_map(h_0, h_1, d)
    image = column_space(v.matrix)
    y, _ = quotient_module(h_1.module, image, label="Y")
    pd_y = homological_dimension(y, "projective", cutoff)
    pd_hom = homological_dimension(h_x.module, "projective", cutoff)
    detail = {"pd_y": str(pd_y), "pd_hom": str(pd_hom), "dims": [x.dim, t0.dim, t1.dim]}
    if pd_hom.finite and pd_y.finite:
        ok = pd_y.value == pd_hom.value + 2
        verdict = (Verdict.holds(check, witness=detail, cutoffs={"cutoff": cutoff}, seed=seed) if ok
                   else Verdict.fails(check, detail, cutoffs={"cutoff": cutoff}, seed=seed))
    elif pd_hom.finite and pd_hom.value + 2 <= cutoff:
        verdict = Verdict.fails(check, detail, cutoffs={"cutoff": cutoff}, seed=seed)
    else:
        verdict = Verdict.unknown(check, {"cutoff": cutoff}, witness=detail, seed=seed)
    return Lemma63Result(y, (x, t0, t1), (u.matrix, d), pd_y, pd_hom, verdict)


# -- enumeration oracle -------------------------------------------------------------------------------

def _jordan_module(a: Algebra, j: int) -> Module:
    field = a.field
    shift = field.zeros(j, j)
    for k in range(j - 1):
        shift[k + 1, k] = field.one
    nil = Matrix.wrap(field, shift)
    return Module(a, tuple(nil.power(l) for l in range(a.dim)), label=f"k[x]/x^{j}")


def _multisets(items: Sequence[Tuple[int, Module]], total: int, start: int = 0) -> Iterator[List[Module]]:
    """Multisets of (dim, module) items with dimensions summing to ``total``."""
    if total == 0:
        yield []
        return
    for k in range(start, len(items)):
        dim, module = items[k]
        if dim <= total:
            for rest in _multisets(items, total - dim, k):
                yield [module] + rest


def module_catalog(a: Algebra, bound: int, seed: int = DEFAULT_SEED) -> Dict[int, List[Module]]:
    """One module per isomorphism class for each dimension up to ``bound``."""
    if a.kind == "ground":
        indecomposables = [(1, a.free_module(1))]
    elif a.kind == "trunc_poly":
        indecomposables = [(j, _jordan_module(a, j)) for j in range(1, min(a.degree, bound) + 1)]
    elif a.kind == "path_algebra":
        inner = enumerate_indecomposables(a.quiver, ground_algebra(a.field), bound, seed, total_bound=bound,
                                          runner=PanelRunner(workers=1))
        indecomposables = [(x.total_dim, Module(a, x.module.action, label=x.label)) for x in inner.representations]
    else:
        raise InputError(f"no module catalog for algebras of kind {a.kind!r}", "/algebra/kind")
    catalog: Dict[int, List[Module]] = {0: [zero_module(a)]}
    for d in range(1, bound + 1):
        catalog[d] = [direct_sum(parts, a) for parts in _multisets(indecomposables, d)]
    return catalog


@dataclass
class EnumerationResult:
    representations: List[Representation]
    partial: bool
    visited: int
    total: int
    counts: Dict[str, int] = dc_field(default_factory=dict)


def _dim_key(dims: Sequence[int]) -> str:
    return ",".join(str(d) for d in dims)


@dataclass(frozen=True)
class _Bucket:
    dims: Tuple[int, ...]
    choices: Tuple[Tuple[int, ...], ...]
    size: int


def _hom_elements(h: HomBasis) -> Iterator[Matrix]:
    for coeffs in itertools.product(h.field.elements(), repeat=h.dim):
        yield h.combine(np.array(coeffs, dtype=h.field.dtype))


def _fingerprint(x: Representation, choice: Tuple[int, ...]) -> Tuple:
    return (choice, tuple(rank(mat) for mat in x.arrow_maps), hom_dim(x.module, x.module))


def enumerate_indecomposables(q: Quiver, a: Algebra, bound: Union[int, Sequence[int]], seed: int = DEFAULT_SEED,
                              monic_only: bool = False, budget: int = ENUMERATION_BUDGET,
                              runner: Optional[PanelRunner] = None,
                              total_bound: Optional[int] = None) -> EnumerationResult:
    """
    Indecomposable representations of Q over A with branch dimensions within
    ``bound``, one per isomorphism class, by exhausting arrow matrices over
    catalog branches.
    """
    if not a.field.is_finite:
        raise UnsupportedFieldError("enumeration needs a finite prime field")
    bounds = [bound] * q.vertex_count if isinstance(bound, int) else list(bound)
    if len(bounds) != q.vertex_count:
        raise InputError(f"expected {q.vertex_count} branch bounds, got {len(bounds)}", "/bound")
    catalog = module_catalog(a, max(bounds + [0]), seed)
    hom_cache: Dict[Tuple[int, int], HomBasis] = {}

    def homs(u: Module, v: Module) -> HomBasis:
        key = (id(u), id(v))
        if key not in hom_cache:
            hom_cache[key] = hom_basis(u, v)
        return hom_cache[key]

    p = a.field.characteristic
    buckets: List[_Bucket] = []
    for dims in itertools.product(*(range(b + 1) for b in bounds)):
        if sum(dims) == 0 or (total_bound is not None and sum(dims) > total_bound):
            continue
        choices = tuple(itertools.product(*(range(len(catalog[d])) for d in dims)))
        size = 0
        for choice in choices:
            branches = [catalog[d][c] for d, c in zip(dims, choice)]
            size += p ** sum(homs(branches[s - 1], branches[e - 1]).dim for s, e in q.arrows)
        buckets.append(_Bucket(tuple(dims), choices, size))
    buckets.sort(key=lambda b: (sum(b.dims), b.dims))
    total = sum(b.size for b in buckets)
    allowances, remaining = [], budget
    for b in buckets:
        allowances.append(min(b.size, remaining))
        remaining -= allowances[-1]

    def run_bucket(job: Tuple[_Bucket, int]) -> List[Representation]:
        bucket, allowance = job
        seen: Dict[Tuple, List[Tuple[Module, bool]]] = {}
        found: List[Tuple[Tuple, Representation]] = []
        visited = 0
        for choice in bucket.choices:
            branches = tuple(catalog[d][c] for d, c in zip(bucket.dims, choice))
            spaces = [homs(branches[s - 1], branches[e - 1]) for s, e in q.arrows]
            for maps in itertools.product(*(_hom_elements(h) for h in spaces)):
                if visited >= allowance:
                    return [x for _, x in sorted(found, key=lambda item: item[0])]
                visited += 1
                x = Representation(q, a, branches, tuple(maps))
                if monic_only and not is_monic(x).monic:
                    continue
                key = _fingerprint(x, choice)
                known = seen.setdefault(key, [])
                if any(are_isomorphic(other, x.module, seed).status == "yes" for other, _ in known):
                    continue
                indecomposable = is_indecomposable(x.module, seed)
                known.append((x.module, indecomposable))
                if indecomposable:
                    order = (choice, tuple(m.key() for m in maps))
                    found.append((order, x))
        return [x for _, x in sorted(found, key=lambda item: item[0])]

    runner = runner or PanelRunner()
    per_bucket = runner.map(run_bucket, list(zip(buckets, allowances)))
    representations: List[Representation] = []
    counts: Dict[str, int] = {}
    for bucket, reps in zip(buckets, per_bucket):
        key = _dim_key(bucket.dims)
        for k, x in enumerate(reps):
            representations.append(Representation(q, a, x.branches, x.arrow_maps, label=f"X[{key}]#{k}"))
        if reps:
            counts[key] = len(reps)
    visited = sum(allowances)
    partial = visited < total
    if partial:
        logger.warning("enumeration budget %d reached after %d of %d candidates", budget, visited, total)
    logger.info("enumerated %d indecomposables over %d dimension vectors", len(representations), len(counts))
    return EnumerationResult(representations, partial, visited, total, counts)
