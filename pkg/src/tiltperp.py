"""
Perpendicular categories, add(T)-approximations and resolutions, cotilting
modules and the checks relating them to monic representations.

Resolutions by add(T) are stored as 0 -> T_m -> ... -> T_0 -> X -> 0 with
maps[0]: T_0 -> X and maps[k]: T_k -> T_{k-1}.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import Module, ModuleMap, direct_sum, injective_cogenerator, regular_module, zero_module
from .config import DEFAULT_CUTOFF, DEFAULT_SEED
from .errors import ModuleError, PreconditionError, UnsupportedFieldError
from .exactlin import Matrix, hstack, rank, solve_linear, vstack
from .homalg import (DimensionResult, decompose, endo_algebra, ext_dims, hom_basis, hom_dim,
                     homological_dimension, kernel_cokernel, projective_resolution)
from .monrep import (Representation, RepMap, cok, is_monic, kq_dual_rep, kq_regular_rep, lambda_algebra,
                     m_functor, module_map_to_rep_map, module_to_rep, mon_membership, rep_direct_sum,
                     rep_map_to_module_map, simple_lift, tensor_map, tensor_rep)
from .panel import PanelRunner
from .quiver import Path, Quiver, path_index, paths, paths_between
from .schemas import Status, Verdict

logger = logging.getLogger(__name__)


# -- perpendicular categories --------------------------------------------------------------

def perp_membership(x: Module, t: Module, cutoff: int = DEFAULT_CUTOFF,
                    injdim: Optional[DimensionResult] = None) -> Verdict:
    """X ∈ ⊥T; exact when inj.dim T is certified within the cutoff."""
    check = "perp"
    if x.dim == 0:
        return Verdict.holds(check)
    if injdim is None:
        injdim = homological_dimension(t, "injective", cutoff)
    if injdim.finite:
        r = injdim.value
        if r == 0:
            return Verdict.holds(check, cutoffs={"injdim": r})
        dims = ext_dims(x, t, r)
        for s in range(1, r + 1):
            if dims[s]:
                return Verdict.fails(check, {"degree": s, "dim": dims[s]}, cutoffs={"injdim": r})
        return Verdict.holds(check, cutoffs={"injdim": r})
    dims = ext_dims(x, t, cutoff)
    for s in range(1, cutoff + 1):
        if dims[s]:
            return Verdict.fails(check, {"degree": s, "dim": dims[s]}, cutoffs={"cutoff": cutoff})
    return Verdict.unknown(check, {"cutoff": cutoff})


# -- add(M) ------------------------------------------------------------------------------------

def add_pieces(m: Module, minimize: bool = False, seed: int = DEFAULT_SEED) -> List[Module]:
    """Modules whose add equals add(m): indecomposable classes, or the recorded parts."""
    if minimize:
        if not m.field.is_finite:
            raise UnsupportedFieldError("minimal approximations need decomposition over a prime field")
        return decompose(m, seed).basic
    seen, out = set(), []
    for p in m.summands():
        if id(p) not in seen and p.dim:
            seen.add(id(p))
            out.append(p)
    return out


def _approximates(components: Sequence[Tuple[int, Matrix]], pieces: Sequence[Module],
                  homs: Dict[Tuple[int, int], Tuple[Matrix, ...]], targets: Sequence[int]) -> bool:
    for j, p in enumerate(pieces):
        images = [(h @ g).flatten() for c, h in components for g in homs[(j, c)]]
        if not images:
            if targets[j]:
                return False
            continue
        if rank(hstack(p.field, images)) != targets[j]:
            return False
    return True


def minimal_components(components: Sequence[Tuple[int, Matrix]], pieces: Sequence[Module],
                       targets: Sequence[int]) -> List[Tuple[int, Matrix]]:
    """
    Greedily drops maps (piece index, matrix) into a common target while the
    composites from every piece still span a space of dimension ``targets[j]``.
    """
    homs = {(j, c): hom_basis(pj, pc).matrices for j, pj in enumerate(pieces) for c, pc in enumerate(pieces)}
    kept = list(components)
    k = 0
    while k < len(kept):
        trial = kept[:k] + kept[k + 1:]
        if _approximates(trial, pieces, homs, targets):
            kept = trial
        else:
            k += 1
    return kept


def right_add_approximation(m: Module, x: Module, minimize: bool = False, seed: int = DEFAULT_SEED,
                            pieces: Optional[Sequence[Module]] = None) -> ModuleMap:
    """
    Evaluation map M' -> X with M' in add(m) through which every map from add(m) factors.

    With ``minimize`` the pieces are indecomposable and components are dropped
    greedily while Hom(m, M') -> Hom(m, X) stays surjective.
    """
    field = x.field
    pieces = list(pieces) if pieces is not None else add_pieces(m, minimize, seed)
    components: List[Tuple[int, Matrix]] = []
    for c, p in enumerate(pieces):
        components.extend((c, h) for h in hom_basis(p, x).matrices)
    if minimize and components:
        components = minimal_components(components, pieces, [hom_dim(p, x) for p in pieces])
    source = direct_sum([pieces[c] for c, _ in components], m.algebra)
    matrix = hstack(field, [h for _, h in components], rows=x.dim)
    return ModuleMap(source, x, matrix)


def left_add_approximation(m: Module, x: Module, pieces: Optional[Sequence[Module]] = None) -> ModuleMap:
    """X -> M' with M' in add(m) through which every map X -> add(m) factors."""
    pieces = list(pieces) if pieces is not None else add_pieces(m)
    targets, rows = [], []
    for p in pieces:
        for h in hom_basis(x, p).matrices:
            targets.append(p)
            rows.append(h)
    target = direct_sum(targets, m.algebra)
    return ModuleMap(x, target, vstack(x.field, rows, cols=x.dim))


def add_membership(x: Module, m: Module, pieces: Optional[Sequence[Module]] = None) -> Verdict:
    """X ∈ add(m) exactly when its right add(m)-approximation splits."""
    check = "add"
    if x.dim == 0:
        return Verdict.holds(check)
    approx = right_add_approximation(m, x, pieces=pieces)
    if rank(approx.matrix) < x.dim:
        return Verdict.fails(check, {"reason": "approximation is not surjective", "rank": rank(approx.matrix)})
    homs = hom_basis(x, approx.source)
    if homs.dim:
        system = hstack(x.field, [(approx.matrix @ h).flatten() for h in homs.matrices])
        if solve_linear(system, Matrix.identity(x.field, x.dim).flatten()) is not None:
            return Verdict.holds(check)
    return Verdict.fails(check, {"reason": "approximation does not split"})


# -- add(T)-resolutions ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Coresolution:
    target: Module
    terms: Tuple[Module, ...]
    maps: Tuple[Matrix, ...]

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def verify(self, pieces: Optional[Sequence[Module]] = None) -> bool:
        if not self.terms:
            return self.target.dim == 0
        if rank(self.maps[0]) != self.target.dim:
            return False
        for k in range(1, len(self.maps)):
            if not (self.maps[k - 1] @ self.maps[k]).is_zero():
                return False
            if rank(self.maps[k]) != self.terms[k - 1].dim - rank(self.maps[k - 1]):
                return False
        if rank(self.maps[-1]) != self.terms[-1].dim:
            return False
        codomains = (self.target,) + self.terms[:-1]
        try:
            for d, s, t in zip(self.maps, self.terms, codomains):
                ModuleMap(s, t, d).validate()
        except ModuleError:
            return False
        if pieces is not None:
            return all(add_membership(term, term, pieces=pieces).ok for term in self.terms)
        return True


def _check_self_orthogonal(t: Module, cutoff: int) -> None:
    dims = ext_dims(t, t, cutoff)
    for s in range(1, cutoff + 1):
        if dims[s]:
            raise PreconditionError(f"T is not self-orthogonal: Ext^{s}(T, T) has dimension {dims[s]}")


def hat_membership(x: Module, t: Module, cutoff: int = DEFAULT_CUTOFF, seed: int = DEFAULT_SEED,
                   pieces: Optional[Sequence[Module]] = None,
                   checked: bool = False) -> Tuple[Verdict, Optional[Coresolution]]:
    """Iterated right add(T)-approximations; holds once a kernel lands in add(T)."""
    check = "hat"
    if not checked:
        _check_self_orthogonal(t, cutoff)
    minimize = t.field.is_finite and pieces is None
    pieces = list(pieces) if pieces is not None else add_pieces(t, minimize, seed)
    terms: List[Module] = []
    maps: List[Matrix] = []
    current, inclusion = x, None
    for step in range(cutoff + 1):
        if add_membership(current, t, pieces=pieces).ok:
            terms.append(current)
            maps.append(Matrix.identity(x.field, x.dim) if inclusion is None else inclusion)
            res = Coresolution(x, tuple(terms), tuple(maps))
            return Verdict.holds(check, cutoffs={"length": step}, seed=seed), res
        approx = right_add_approximation(t, current, pieces=pieces)
        if rank(approx.matrix) < current.dim:
            return Verdict.fails(check, {"step": step, "reason": "approximation is not surjective"}, seed=seed), None
        terms.append(approx.source)
        maps.append(approx.matrix if inclusion is None else inclusion @ approx.matrix)
        split = kernel_cokernel(approx)
        if split.kernel.dim == 0:
            return Verdict.holds(check, cutoffs={"length": step}, seed=seed), Coresolution(x, tuple(terms), tuple(maps))
        current, inclusion = split.kernel, split.kernel_inclusion
    return Verdict.unknown(check, {"cutoff": cutoff}, witness={"kernel_dim": current.dim}, seed=seed), None


@dataclass(frozen=True, eq=False)
class CotiltResult:
    verdict: Verdict
    r: Optional[int]
    coresolution: Optional[Coresolution]


def is_cotilting(t: Module, cutoff: int = DEFAULT_CUTOFF, seed: int = DEFAULT_SEED) -> CotiltResult:
    check = "cotilting"
    injdim = homological_dimension(t, "injective", cutoff)
    if not injdim.finite:
        return CotiltResult(Verdict.unknown(check, {"injdim": cutoff}, witness={"axiom": "finite injective dimension"}), None, None)
    r = injdim.value
    if r:
        dims = ext_dims(t, t, r)
        for s in range(1, r + 1):
            if dims[s]:
                return CotiltResult(Verdict.fails(check, {"axiom": "self-orthogonal", "degree": s, "dim": dims[s]},
                                                  cutoffs={"injdim": r}), r, None)
    verdict, res = hat_membership(injective_cogenerator(t.algebra), t, cutoff, seed, checked=True)
    if verdict.status == Status.FAILS:
        return CotiltResult(Verdict.fails(check, {"axiom": "coresolution of D(A)", "detail": verdict.witness},
                                          cutoffs={"injdim": r}), r, None)
    if verdict.status == Status.UNKNOWN:
        return CotiltResult(Verdict.unknown(check, {"injdim": r, "cutoff": cutoff},
                                            witness={"axiom": "coresolution of D(A)"}), r, None)
    return CotiltResult(Verdict.holds(check, cutoffs={"injdim": r}, witness={"r": r, "length": res.length}, seed=seed),
                        r, res)


# -- mapping cone ----------------------------------------------------------------------------------

def _term(res: Coresolution, k: int) -> Module:
    return res.terms[k] if k < len(res.terms) else zero_module(res.target.algebra)


def _diff(res: Coresolution, k: int) -> Matrix:
    """maps[k] padded with zero maps past the end."""
    if k < len(res.maps):
        return res.maps[k]
    source = _term(res, k)
    target = res.target if k == 0 else _term(res, k - 1)
    return Matrix.zeros(res.target.field, target.dim, source.dim)


def _lift(source: Module, target: Module, post: Matrix, rhs: Matrix) -> Matrix:
    """g: source -> target with post @ g == rhs."""
    field = source.field
    if source.dim == 0 or target.dim == 0:
        if not rhs.is_zero():
            raise PreconditionError("lifting system unsolvable: T is not self-orthogonal")
        return Matrix.zeros(field, target.dim, source.dim)
    homs = hom_basis(source, target)
    if homs.dim == 0:
        if not rhs.is_zero():
            raise PreconditionError("lifting system unsolvable: T is not self-orthogonal")
        return Matrix.zeros(field, target.dim, source.dim)
    system = hstack(field, [(post @ h).flatten() for h in homs.matrices])
    coeffs = solve_linear(system, rhs.flatten())
    if coeffs is None:
        raise PreconditionError("lifting system unsolvable: T is not self-orthogonal")
    return homs.combine(coeffs.data[:, 0])


def _prune(target: Module, terms: List[Module], maps: List[Matrix],
           pieces: Optional[Sequence[Module]]) -> Tuple[List[Module], List[Matrix]]:
    while pieces is not None and len(terms) > 1 and rank(maps[-1]) == terms[-1].dim:
        top = ModuleMap(terms[-1], terms[-2], maps[-1])
        split = kernel_cokernel(top)
        if not add_membership(split.cokernel, split.cokernel, pieces=pieces).ok:
            break
        below = maps[-2]
        # the map out of T_{m-1} factors through its cokernel by the top map
        induced = _factor_through(split.cokernel_projection, below)
        terms = terms[:-2] + [split.cokernel]
        maps = maps[:-2] + [induced]
    return terms, maps


def _factor_through(proj: Matrix, d: Matrix) -> Matrix:
    """g with g @ proj == d, for proj surjective and d vanishing on its kernel."""
    field = proj.field
    solution = solve_linear(proj.T, d.T)
    if solution is None:
        raise PreconditionError("map does not factor through the cokernel")
    return Matrix.wrap(field, np.ascontiguousarray(solution.data.T))


def mapping_cone_coresolution(f: ModuleMap, res_x: Coresolution, res_y: Coresolution,
                              pieces: Optional[Sequence[Module]] = None) -> Coresolution:
    """
    add(T)-resolution of coker f from resolutions of its source and target.

    C_0 = Y_0 and C_k = X_{k-1} ⊕ Y_k, with (x, y) -> (-d x, f x + d y).
    """
    if rank(f.matrix) != f.source.dim:
        raise PreconditionError("the map is not injective")
    field = f.matrix.field
    n = max(len(res_x.terms), len(res_y.terms))
    lifts = [_lift(_term(res_x, 0), _term(res_y, 0), _diff(res_y, 0), f.matrix @ _diff(res_x, 0))]
    for k in range(1, n):
        rhs = lifts[k - 1] @ _diff(res_x, k)
        lifts.append(_lift(_term(res_x, k), _term(res_y, k), _diff(res_y, k), rhs))
    split = kernel_cokernel(f)
    cokernel = split.cokernel
    a = f.source.algebra
    terms = [_term(res_y, 0)]
    maps = [split.cokernel_projection @ _diff(res_y, 0)]
    for k in range(1, n + 1):
        xs, ys = _term(res_x, k - 1), _term(res_y, k)
        terms.append(direct_sum([xs, ys], a))
        if k == 1:
            maps.append(hstack(field, [lifts[0], _diff(res_y, 1)], rows=terms[0].dim))
            continue
        xt, yt = _term(res_x, k - 2), _term(res_y, k - 1)
        top = hstack(field, [-_diff(res_x, k - 1), Matrix.zeros(field, xt.dim, ys.dim)], rows=xt.dim)
        bottom = hstack(field, [lifts[k - 1], _diff(res_y, k)], rows=yt.dim)
        maps.append(vstack(field, [top, bottom], cols=xs.dim + ys.dim))
    while len(terms) > 1 and terms[-1].dim == 0:
        terms.pop()
        maps.pop()
    terms, maps = _prune(cokernel, terms, maps, pieces)
    return Coresolution(cokernel, tuple(terms), tuple(maps))


# -- cotilting transfer ---------------------------------------------------------------------------

def _tensor_resolution(m: Representation, res: Coresolution) -> Tuple[List[Representation], List[RepMap], Representation]:
    """M⊗T_j and the maps id⊗d_j, ending in M⊗(target)."""
    ident = RepMap(m, m, tuple(Matrix.identity(m.field, d) for d in m.dim_vector))
    target = tensor_rep(m, res.target)
    reps = [tensor_rep(m, term) for term in res.terms]
    maps = []
    for k, d in enumerate(res.maps):
        src = res.terms[k]
        tgt = res.target if k == 0 else res.terms[k - 1]
        maps.append(tensor_map(ident, ModuleMap(src, tgt, d), source=reps[k],
                               target=target if k == 0 else reps[k - 1]))
    return reps, maps, target


def _lambda_resolution(m: Representation, res: Coresolution) -> Tuple[Coresolution, Representation]:
    reps, maps, target = _tensor_resolution(m, res)
    return Coresolution(target.module, tuple(r.module for r in reps),
                        tuple(rep_map_to_module_map(g).matrix for g in maps)), target


def end_map_copies(q: Quiver) -> Dict[int, List[Tuple[int, Path]]]:
    """Copies of T in the branch of kQ⊗T at each vertex: (i, path from i to v)."""
    return {v: [(i, p) for i in q.vertices for p in paths_between(q, i, v)] for v in q.vertices}


def end_map_matrix(q: Quiver, t: Module, p: Path, phi: Matrix) -> Matrix:
    """Ψ(p⊗φ): the copy of T labelled by a path c starting at p's target goes to c·p, acting by φ."""
    field = t.field
    copies = end_map_copies(q)
    dt = t.dim
    offsets, position = {}, 0
    for v in q.vertices:
        offsets[v] = position
        position += len(copies[v]) * dt
    out = field.zeros(position, position)
    for v in q.vertices:
        where = {c: k for k, c in enumerate(copies[v])}
        for k, (i, c) in enumerate(copies[v]):
            if c.source != p.target:
                continue
            image = (p.source, Path(p.source, v, p.arrows + c.arrows))
            r0 = offsets[v] + where[image] * dt
            c0 = offsets[v] + k * dt
            out[r0:r0 + dt, c0:c0 + dt] = field.normalize(out[r0:r0 + dt, c0:c0 + dt] + phi.data)
    return Matrix.wrap(field, out)


def end_map_check(q: Quiver, t: Module) -> Verdict:
    """
    kQ⊗End_A(T) -> End_Λ(kQ⊗T) is bijective, and for u = p⊗φ, v = p'⊗φ'
    Ψ(u)Ψ(v) = Ψ((p then p')⊗(φ∘φ')).
    """
    check = "end_map"
    big = tensor_rep(kq_regular_rep(q, t.field), t).module
    end = endo_algebra(t)
    kq_paths = paths(q)
    psi = {(u, j): end_map_matrix(q, t, p, h) for u, p in enumerate(kq_paths) for j, h in enumerate(end.hom.matrices)}
    for key, mat in psi.items():
        try:
            ModuleMap(big, big, mat).validate()
        except ModuleError:
            return Verdict.fails(check, {"reason": "not a Λ-map", "path": kq_paths[key[0]].label(), "end_basis": key[1]})
    expected = hom_dim(big, big)
    stacked = hstack(t.field, [m.flatten() for m in psi.values()])
    found = rank(stacked)
    if found != len(psi) or found != expected:
        return Verdict.fails(check, {"reason": "not bijective", "rank": found, "domain": len(psi), "end_dim": expected})
    where = path_index(q)
    mult = end.algebra.mult
    for (u, j), left in psi.items():
        p = kq_paths[u]
        for (w, l), right in psi.items():
            pp = kq_paths[w]
            product = left @ right
            if p.target != pp.source:
                if not product.is_zero():
                    return Verdict.fails(check, {"reason": "product of non-composable paths is nonzero",
                                                 "pair": [p.label(), pp.label()]})
                continue
            # p then p'
            joined = where[Path(p.source, pp.target, p.arrows + pp.arrows)]
            expect = Matrix.zeros(t.field, big.dim, big.dim)
            for k in np.flatnonzero(mult[j, l] != 0):
                expect = expect + psi[(joined, int(k))].scale(mult[j, l, k])
            if not product == expect:
                return Verdict.fails(check, {"reason": "not anti-multiplicative", "pair": [p.label(), pp.label()],
                                             "end_pair": [j, l]})
    return Verdict.holds(check, witness={"end_dim": expected, "paths": len(kq_paths), "end_t": end.hom.dim})


def cotilt_transfer_check(q: Quiver, t: Module, cutoff: int = DEFAULT_CUTOFF, seed: int = DEFAULT_SEED) -> Verdict:
    """kQ⊗T is (r+1)-cotilting over Λ for T r-cotilting over A."""
    check = "cotilt_transfer"
    base = is_cotilting(t, cutoff, seed)
    if not base.verdict.ok:
        raise PreconditionError(f"T is not certified cotilting: {base.verdict.status.value}")
    r = base.r
    field = t.field
    kq = kq_regular_rep(q, field)
    big_rep = tensor_rep(kq, t)
    big = big_rep.module
    pieces = [m_functor(q, i, t).module for i in q.vertices]
    cutoffs = {"injdim": r + 1}

    injdim = homological_dimension(big, "injective", r + 1)
    if not injdim.within(r + 1):
        return Verdict.fails(check, {"part": "injdim", "found": str(injdim)}, cutoffs=cutoffs, seed=seed)
    dims = ext_dims(big, big, r + 1)
    for s in range(1, r + 2):
        if dims[s]:
            return Verdict.fails(check, {"part": "self-orthogonal", "degree": s, "dim": dims[s]}, cutoffs=cutoffs, seed=seed)

    # 0 -> P_1⊗D(A) -> P_0⊗D(A) -> D(kQ)⊗D(A) -> 0 with P_1 the first syzygy (kQ is hereditary),
    # then the cone over the add(T)-resolutions
    d_kq = kq_dual_rep(q, field).module
    pres = projective_resolution(d_kq, 0)
    free0 = pres.term(0)
    p0 = module_to_rep(free0)
    res_da = base.coresolution
    res_y, y_rep = _lambda_resolution(p0, res_da)
    omega = kernel_cokernel(ModuleMap(free0, d_kq, pres.augmentation))
    if omega.kernel.dim == 0:
        cone = res_y
    else:
        p1 = module_to_rep(omega.kernel)
        res_x, x_rep = _lambda_resolution(p1, res_da)
        d1 = module_map_to_rep_map(ModuleMap(omega.kernel, free0, omega.kernel_inclusion), p1, p0)
        ident = ModuleMap.identity(res_da.target)
        f = rep_map_to_module_map(tensor_map(d1, ident, source=x_rep, target=y_rep))
        cone = mapping_cone_coresolution(f, res_x, res_y, pieces=pieces)
    logger.info("coresolution of D(Λ) by add(kQ⊗T) has length %d", cone.length)
    lam = lambda_algebra(q, t.algebra)
    if cone.target.dim != lam.dim or not cone.verify(pieces):
        return Verdict.fails(check, {"part": "coresolution of D(Λ)", "length": cone.length}, cutoffs=cutoffs, seed=seed)

    end = end_map_check(q, t)
    if not end.ok:
        return Verdict.fails(check, {"part": "end_map", "detail": end.witness}, cutoffs=cutoffs, seed=seed)
    return Verdict.holds(check, witness={"r": r, "transferred_r": r + 1, "injdim": injdim.value,
                                          "coresolution_length": cone.length, "end_dim": end.witness["end_dim"]},
                         cutoffs=cutoffs, seed=seed)


# -- theorem checks over panels ---------------------------------------------------------------

def _agreement(check: str, left: Verdict, right: Verdict, names: Tuple[str, str]) -> Verdict:
    if Status.UNKNOWN in (left.status, right.status):
        return Verdict.unknown(check, {**left.cutoffs, **right.cutoffs} or {"cutoff": 0},
                               witness={names[0]: left.status.value, names[1]: right.status.value})
    if left.status != right.status:
        return Verdict.fails(check, {names[0]: left.status.value, names[1]: right.status.value,
                                     f"{names[0]}_detail": left.witness, f"{names[1]}_detail": right.witness})
    return Verdict.holds(check, cutoffs={**left.cutoffs, **right.cutoffs})


def _perp_predicate(t: Module, cutoff: int, injdim: DimensionResult) -> Callable[[Module], Verdict]:
    return lambda m: perp_membership(m, t, cutoff, injdim)


def reciprocity_check(q: Quiver, t: Module, testset: Sequence[Representation], cutoff: int = DEFAULT_CUTOFF,
                      runner: Optional[PanelRunner] = None) -> Verdict:
    """Mon(Q, ⊥T) and ⊥(kQ⊗T) agree on every representation of the test set."""
    check = "reciprocity"
    big = tensor_rep(kq_regular_rep(q, t.field), t).module
    inj_t = homological_dimension(t, "injective", cutoff)
    inj_big = homological_dimension(big, "injective", cutoff + 1)
    small = _perp_predicate(t, cutoff, inj_t)

    def one(x: Representation) -> Verdict:
        return _agreement(check, mon_membership(x, small), perp_membership(x.module, big, cutoff + 1, inj_big),
                          ("mon_perp", "perp_kq"))

    return (runner or PanelRunner()).run(check, one, list(testset))


def simple_reduction_check(q: Quiver, t: Module, testset: Sequence[Representation], cutoff: int = DEFAULT_CUTOFF,
                           runner: Optional[PanelRunner] = None) -> Verdict:
    """⊥(kQ⊗T) and ⊥(⊕ S(i)⊗T) agree on the test set."""
    check = "simple_reduction"
    big = tensor_rep(kq_regular_rep(q, t.field), t).module
    simples = rep_direct_sum([simple_lift(q, i, t) for i in q.vertices]).module
    inj_big = homological_dimension(big, "injective", cutoff)
    inj_simple = homological_dimension(simples, "injective", cutoff)

    def one(x: Representation) -> Verdict:
        return _agreement(check, perp_membership(x.module, big, cutoff, inj_big),
                          perp_membership(x.module, simples, cutoff, inj_simple), ("perp_kq", "perp_simples"))

    return (runner or PanelRunner()).run(check, one, list(testset))


def proposition_mon_perp_check(q: Quiver, testset: Sequence[Representation],
                               runner: Optional[PanelRunner] = None) -> Verdict:
    """Monic exactly when Ext^1(X, kQ⊗D(A)) = 0."""
    check = "mon_perp"
    if not testset:
        return Verdict.holds(check)
    a = testset[0].algebra
    big = tensor_rep(kq_regular_rep(q, a.field), injective_cogenerator(a)).module
    inj = DimensionResult(value=1)

    def one(x: Representation) -> Verdict:
        monic = is_monic(x)
        left = Verdict.holds("monic") if monic.monic else Verdict.fails("monic", {"vertex": monic.vertex})
        return _agreement(check, left, perp_membership(x.module, big, 1, inj), ("monic", "perp_kq_da"))

    return (runner or PanelRunner()).run(check, one, list(testset))


def mon_perp_refinement_check(q: Quiver, t: Module, testset: Sequence[Representation], cutoff: int = DEFAULT_CUTOFF,
                              runner: Optional[PanelRunner] = None) -> Verdict:
    """Mon(Q, ⊥T) = ⊥(kQ⊗T) ∩ Mon(Q, A) without assuming a coresolution of D(A)."""
    check = "mon_perp_refinement"
    big = tensor_rep(kq_regular_rep(q, t.field), t).module
    inj_t = homological_dimension(t, "injective", cutoff)
    inj_big = homological_dimension(big, "injective", cutoff + 1)
    small = _perp_predicate(t, cutoff, inj_t)

    def one(x: Representation) -> Verdict:
        monic = is_monic(x)
        if monic.monic:
            right = perp_membership(x.module, big, cutoff + 1, inj_big)
        else:
            right = Verdict.fails("monic", {"vertex": monic.vertex})
        return _agreement(check, mon_membership(x, small), right, ("mon_perp", "perp_and_monic"))

    return (runner or PanelRunner()).run(check, one, list(testset))


def multiplicity_invariance_check(q: Quiver, t: Module, seed: int = DEFAULT_SEED) -> Verdict:
    """kQ⊗T and its double have the same number of non-isomorphic indecomposable summands."""
    check = "multiplicity_invariance"
    big = tensor_rep(kq_regular_rep(q, t.field), t).module
    single = decompose(big, seed)
    double = decompose(direct_sum([big, big]), seed)
    counts = (len(single.basic), len(double.basic))
    if counts[0] != counts[1]:
        return Verdict.fails(check, {"single": counts[0], "double": counts[1]}, seed=seed)
    return Verdict.holds(check, witness={"summands": counts[0]}, seed=seed)


def ext_branch_check(q: Quiver, t: Module, x: Representation, s_max: int = 2) -> Verdict:
    """dim Ext^s_Λ(P(i)⊗T, X) = dim Ext^s_A(T, X_i) for every vertex and s ≤ s_max."""
    check = "ext_branch"
    table: Dict[str, List[int]] = {}
    for i in q.vertices:
        lhs = ext_dims(m_functor(q, i, t).module, x.module, s_max)
        rhs = ext_dims(t, x.branch(i), s_max) if x.branch(i).dim else [0] * (s_max + 1)
        for s, (u, v) in enumerate(zip(lhs, rhs)):
            if u != v:
                return Verdict.fails(check, {"vertex": i, "degree": s, "lambda": u, "branch": v},
                                     cutoffs={"s_max": s_max})
        table[str(i)] = lhs
    return Verdict.holds(check, witness={"dims": table}, cutoffs={"s_max": s_max})


def adjunction_transport(x: Representation, i: int, t: Module, g: Matrix) -> RepMap:
    """The map X -> S(i)⊗T given by g∘π_i at vertex i and zero elsewhere."""
    target = simple_lift(x.quiver, i, t)
    _, proj = cok(x, i)
    maps = []
    for v in x.quiver.vertices:
        if v == i:
            maps.append(g @ proj)
        else:
            maps.append(Matrix.zeros(t.field, target.branch(v).dim, x.branch(v).dim))
    return RepMap(x, target, tuple(maps))


def adjunction_check(x: Representation, t: Module, i: int) -> Verdict:
    """Hom_A(cok_i X, T) ≅ Hom_Λ(X, S(i)⊗T), with the transport checked to be a bijection."""
    check = "adjunction"
    cokernel, _ = cok(x, i)
    left = hom_basis(cokernel, t) if cokernel.dim else None
    target = simple_lift(x.quiver, i, t)
    right_dim = hom_dim(x.module, target.module)
    left_dim = left.dim if left is not None else 0
    if left_dim != right_dim:
        return Verdict.fails(check, {"vertex": i, "hom_cok": left_dim, "hom_lambda": right_dim})
    if left_dim:
        images = []
        for g in left.matrices:
            transported = adjunction_transport(x, i, t, g)
            transported.validate()
            images.append(rep_map_to_module_map(transported).matrix.flatten())
        if rank(hstack(t.field, images)) != left_dim:
            return Verdict.fails(check, {"vertex": i, "reason": "transport is not injective"})
    return Verdict.holds(check, witness={"vertex": i, "dim": left_dim})


# -- Gorenstein projectives -----------------------------------------------------------------------------

def is_gorenstein(a, cutoff: int = DEFAULT_CUTOFF) -> Verdict:
    check = "gorenstein"
    left = homological_dimension(regular_module(a, "left"), "injective", cutoff)
    right = homological_dimension(regular_module(a, "right"), "injective", cutoff)
    if left.finite and right.finite:
        return Verdict.holds(check, witness={"injdim_left": left.value, "injdim_right": right.value},
                             cutoffs={"cutoff": cutoff})
    return Verdict.unknown(check, {"cutoff": cutoff}, witness={"injdim_left": str(left), "injdim_right": str(right)})


def gp_membership(x: Module, cutoff: int = DEFAULT_CUTOFF, gorenstein: Optional[Verdict] = None) -> Verdict:
    """Gorenstein-projective as membership in ⊥A; refused unless A is certified Gorenstein."""
    check = "gp"
    gorenstein = gorenstein or is_gorenstein(x.algebra, cutoff)
    if not gorenstein.ok:
        return Verdict.unknown(check, gorenstein.cutoffs, witness={"reason": "algebra not certified Gorenstein"})
    r = gorenstein.witness["injdim_left"]
    return perp_membership(x, x.algebra.regular, cutoff, DimensionResult(value=r)).renamed(check)


def gp_corollary_check(q: Quiver, testset: Sequence[Representation], cutoff: int = DEFAULT_CUTOFF,
                       runner: Optional[PanelRunner] = None) -> Verdict:
    """Gorenstein-projective Λ-modules are the monic representations with branches and cokernels in 𝒢𝒫(A)."""
    check = "gp_corollary"
    if not testset:
        return Verdict.holds(check)
    a = testset[0].algebra
    over_a = is_gorenstein(a, cutoff)
    over_lam = is_gorenstein(lambda_algebra(q, a), cutoff + 1)
    if not (over_a.ok and over_lam.ok):
        return Verdict.unknown(check, {"cutoff": cutoff}, witness={"reason": "algebra not certified Gorenstein"})

    def one(x: Representation) -> Verdict:
        branchwise = mon_membership(x, lambda m: gp_membership(m, cutoff, over_a))
        return _agreement(check, gp_membership(x.module, cutoff + 1, over_lam), branchwise, ("gp_lambda", "mon_gp"))

    return (runner or PanelRunner()).run(check, one, list(testset))


def branch_approximation_check(q: Quiver, m: Module, sink: int, panel: Sequence[Module]) -> Verdict:
    """
    For Mon(Q, A) = add(m) and a sink vertex, the add(m)-approximation of P(sink)⊗N
    restricted to that branch is a right approximation of N by A-modules.
    """
    check = "branch_approximation"
    if not q.is_sink(sink):
        raise PreconditionError(f"vertex {sink} is not a sink")
    pieces = add_pieces(m)
    for idx, n in enumerate(panel):
        lifted = m_functor(q, sink, n)
        approx = right_add_approximation(m, lifted.module, pieces=pieces)
        rep_map = module_map_to_rep_map(approx, target=lifted)
        f = rep_map.maps[sink - 1]
        source_branch = rep_map.source.branch(sink)
        for z_idx, z in enumerate(panel):
            if z.dim == 0:
                continue
            target_dim = hom_dim(z, n)
            homs = hom_basis(z, source_branch).matrices
            images = [(f @ h).flatten() for h in homs]
            got = rank(hstack(n.field, images)) if images else 0
            if got != target_dim:
                return Verdict.fails(check, {"module": idx, "tested_with": z_idx, "rank": got, "hom_dim": target_dim})
    return Verdict.holds(check, witness={"panel": len(panel)})
