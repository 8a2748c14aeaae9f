"""
Representations of an acyclic quiver over an algebra A.

A representation is turned into a module over Λ = kQ⊗A by listing the branch
bases vertex by vertex; the basis element (path u: j -> i)⊗b_l acts as
X_u·ρ_{X_j}(b_l) from the j-block to the i-block.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import (Algebra, Module, ModuleMap, direct_sum, path_algebra, quotient_module,
                      tensor_algebra, zero_module)
from .errors import AlgebraMismatchError, FieldMismatchError, ModuleError
from .exactlin import (CoordinateSystem, Field, Matrix, block_diag, column_space, hstack,
                       kernel_basis)
from .homalg import hom_basis
from .quiver import Path, Quiver, kq_standard_module, path_index, paths, topological_order
from .schemas import Status, Verdict

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def lambda_algebra(q: Quiver, a: Algebra) -> Algebra:
    """Λ = kQ⊗A; for A = k its structure constants are those of kQ."""
    lam = tensor_algebra(path_algebra(q, a.field), a)
    logger.debug("built kQ⊗A with %d vertices, dim %d", q.vertex_count, lam.dim)
    return lam


@dataclass(frozen=True, eq=False)
class Representation:
    quiver: Quiver
    algebra: Algebra
    branches: Tuple[Module, ...]
    arrow_maps: Tuple[Matrix, ...]
    label: str = ""

    __hash__ = object.__hash__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.quiver == other.quiver and self.algebra == other.algebra
                and all(x.same_data(y) for x, y in zip(self.branches, other.branches))
                and all(m == n for m, n in zip(self.arrow_maps, other.arrow_maps)))

    def __repr__(self) -> str:
        return f"Representation({self.label or '?'}, dims={self.dim_vector})"

    @property
    def field(self) -> Field:
        return self.algebra.field

    def branch(self, i: int) -> Module:
        return self.branches[i - 1]

    @property
    def dim_vector(self) -> Tuple[int, ...]:
        return tuple(b.dim for b in self.branches)

    @property
    def total_dim(self) -> int:
        return sum(self.dim_vector)

    def validate(self) -> "Representation":
        q = self.quiver
        if len(self.branches) != q.vertex_count:
            raise ModuleError(f"expected {q.vertex_count} branches, got {len(self.branches)}", "/branches")
        if len(self.arrow_maps) != len(q.arrows):
            raise ModuleError(f"expected {len(q.arrows)} arrow matrices, got {len(self.arrow_maps)}", "/arrows")
        for v, b in enumerate(self.branches):
            if b.algebra != self.algebra:
                raise AlgebraMismatchError(f"branch {v + 1} is over a different algebra")
        for k, (s, e) in enumerate(q.arrows):
            m = self.arrow_maps[k]
            src, tgt = self.branch(s), self.branch(e)
            if m.shape != (tgt.dim, src.dim):
                raise ModuleError(f"arrow {s}->{e} has shape {m.rows}x{m.cols}, expected {tgt.dim}x{src.dim}",
                                  f"/arrows/{k}")
            try:
                ModuleMap(src, tgt, m).validate()
            except ModuleError:
                raise ModuleError(f"arrow {s}->{e} is not an A-module map", f"/arrows/{k}")
        return self

    def path_map(self, p: Path) -> Matrix:
        result = Matrix.identity(self.field, self.branch(p.source).dim)
        for a in p.arrows:
            result = self.arrow_maps[a] @ result
        return result

    @cached_property
    def offsets(self) -> List[int]:
        out = [0]
        for d in self.dim_vector:
            out.append(out[-1] + d)
        return out

    @cached_property
    def module(self) -> Module:
        return rep_to_module(self)


@dataclass(frozen=True, eq=False)
class RepMap:
    """maps[v-1]: X_v -> Y_v commuting with the arrows"""
    source: Representation
    target: Representation
    maps: Tuple[Matrix, ...]

    def validate(self) -> "RepMap":
        q = self.source.quiver
        for v in q.vertices:
            ModuleMap(self.source.branch(v), self.target.branch(v), self.maps[v - 1]).validate()
        for k, (s, e) in enumerate(q.arrows):
            if not (self.target.arrow_maps[k] @ self.maps[s - 1]) == (self.maps[e - 1] @ self.source.arrow_maps[k]):
                raise ModuleError(f"square at arrow {s}->{e} does not commute", f"/arrows/{k}")
        return self

    def compose(self, other: "RepMap") -> "RepMap":
        return RepMap(other.source, self.target, tuple(f @ g for f, g in zip(self.maps, other.maps)))


# -- the equivalence Rep(Q, A) = Λ-mod --------------------------------------------------------

def rep_to_module(x: Representation) -> Module:
    q, a = x.quiver, x.algebra
    lam = lambda_algebra(q, a)
    field = a.field
    d = x.total_dim
    off = x.offsets
    action = []
    for u in paths(q):
        xu = x.path_map(u)
        src = x.branch(u.source)
        for l in range(a.dim):
            block = field.zeros(d, d)
            if src.dim and x.branch(u.target).dim:
                block[off[u.target - 1]:off[u.target], off[u.source - 1]:off[u.source]] = (xu @ src.action[l]).data
            action.append(Matrix.wrap(field, block))
    return Module(lam, tuple(action), label=x.label)


def _split_lambda(lam: Algebra) -> Tuple[Quiver, Algebra]:
    if lam.kind != "tensor" or lam.factors[0].kind != "path_algebra":
        raise ModuleError("module is not over a tensor of a path algebra with A")
    return lam.factors[0].quiver, lam.factors[1]


def _element(q: Quiver, a: Algebra, path: Path, coeffs: np.ndarray) -> np.ndarray:
    vec = a.field.zeros(1, len(paths(q)) * a.dim)[0]
    u = path_index(q)[path]
    vec[u * a.dim:(u + 1) * a.dim] = coeffs
    return vec


def vertex_bases(m: Module) -> List[Matrix]:
    q, a = _split_lambda(m.algebra)
    bases = [column_space(m.act(_element(q, a, Path(v, v, ()), a.unit))) for v in q.vertices]
    if sum(b.cols for b in bases) != m.dim:
        raise ModuleError("trivial-path idempotents do not decompose the module")
    return bases


def module_to_rep(m: Module, label: str = "") -> Representation:
    q, a = _split_lambda(m.algebra)
    field = a.field
    bases = vertex_bases(m)
    systems = [CoordinateSystem(b) for b in bases]
    kq_unit = path_algebra(q, field).unit
    branches = []
    for v in q.vertices:
        basis, cs = bases[v - 1], systems[v - 1]
        if basis.cols == 0:
            branches.append(zero_module(a))
            continue
        action = []
        for l in range(a.dim):
            element = np.multiply.outer(kq_unit, a.basis_vector(l)).reshape(-1)
            action.append(cs.coords(m.act(element) @ basis))
        branches.append(Module(a, tuple(action)))
    maps = []
    for k, (s, e) in enumerate(q.arrows):
        element = _element(q, a, Path(s, e, (k,)), a.unit)
        maps.append(systems[e - 1].coords(m.act(element) @ bases[s - 1]))
    return Representation(q, a, tuple(branches), tuple(maps), label=label or m.label)


def rep_map_to_module_map(f: RepMap) -> ModuleMap:
    return ModuleMap(f.source.module, f.target.module, block_diag(f.source.field, list(f.maps)))


def module_map_to_rep_map(f: ModuleMap, source: Optional[Representation] = None,
                          target: Optional[Representation] = None) -> RepMap:
    source = source or module_to_rep(f.source)
    target = target or module_to_rep(f.target)
    src_bases, tgt_bases = vertex_bases(f.source), vertex_bases(f.target)
    maps = []
    for sb, tb in zip(src_bases, tgt_bases):
        maps.append(CoordinateSystem(tb).coords(f.matrix @ sb))
    return RepMap(source, target, tuple(maps))


# -- delta, cokernels, monic ---------------------------------------------------------------------

def branch(x: Representation, i: int) -> Module:
    """F_i(X) = X_i"""
    return x.branch(i)


def branch_sum_in(x: Representation, i: int) -> Module:
    """F_i^+(X): the direct sum of X_{s(α)} over arrows α ending at i."""
    return direct_sum([x.branch(x.quiver.arrows[k][0]) for k in x.quiver.arrows_into(i)], x.algebra)


def delta(x: Representation, i: int) -> ModuleMap:
    into = x.quiver.arrows_into(i)
    source = branch_sum_in(x, i)
    matrix = hstack(x.field, [x.arrow_maps[k] for k in into], rows=x.branch(i).dim)
    return ModuleMap(source, x.branch(i), matrix)


def cok(x: Representation, i: int) -> Tuple[Module, Matrix]:
    """cok_i(X) = X_i / Σ Im X_α and the projection π_i."""
    image = column_space(delta(x, i).matrix)
    return quotient_module(x.branch(i), image, label=f"cok{i}")


@dataclass(frozen=True)
class MonicResult:
    monic: bool
    vertex: Optional[int] = None
    kernel_vector: Optional[List] = None


def is_monic(x: Representation) -> MonicResult:
    """Checks every δ_i; the first failing vertex in topological order is reported."""
    for v in topological_order(x.quiver):
        d = delta(x, v).matrix
        if d.cols == 0:
            continue
        kernel = kernel_basis(d)
        if kernel.cols:
            return MonicResult(False, v, [row[0] for row in kernel.column(0).to_rows()])
    return MonicResult(True)


Predicate = Callable[[Module], Union[Verdict, bool]]


def _as_verdict(result: Union[Verdict, bool], check: str) -> Verdict:
    if isinstance(result, Verdict):
        return result
    return Verdict.holds(check) if result else Verdict.fails(check, {"predicate": False})


def mon_membership(x: Representation, predicate: Predicate, check: str = "mon_membership") -> Verdict:
    """Membership in Mon(Q, X): monic, and every branch and cok_i satisfies the predicate."""
    monic = is_monic(x)
    if not monic.monic:
        return Verdict.fails(check, {"clause": "monic", "vertex": monic.vertex,
                                     "kernel_vector": monic.kernel_vector})
    pending = None
    for v in topological_order(x.quiver):
        for clause, module in (("branch", x.branch(v)), ("cokernel", cok(x, v)[0])):
            verdict = _as_verdict(predicate(module), check)
            if verdict.status == Status.FAILS:
                return Verdict.fails(check, {"clause": clause, "vertex": v, "detail": verdict.witness})
            if verdict.status == Status.UNKNOWN and pending is None:
                pending = ({"clause": clause, "vertex": v}, verdict.cutoffs)
    if pending is not None:
        return Verdict.unknown(check, pending[1], witness=pending[0])
    return Verdict.holds(check)


# -- tensor lifts and standard representations -------------------------------------------------------

def tensor_rep(m: Representation, t: Module) -> Representation:
    """M⊗_k T with branches T^{dim M_i} and arrow maps M_α⊗Id_T."""
    if m.algebra.dim != 1:
        raise ModuleError("the first factor must be a representation over the ground field")
    if m.field != t.field:
        raise FieldMismatchError(f"tensor of {m.field} and {t.field} data")
    a = t.algebra
    branches = tuple(direct_sum([t] * d, a) for d in m.dim_vector)
    ident = Matrix.identity(t.field, t.dim)
    maps = tuple(Matrix.wrap(t.field, np.kron(mat.data, ident.data)) if 0 not in mat.shape
                 else Matrix.zeros(t.field, mat.rows * t.dim, mat.cols * t.dim) for mat in m.arrow_maps)
    label = f"{m.label}⊗{t.label}" if m.label and t.label else ""
    return Representation(m.quiver, a, branches, maps, label=label)


def tensor_map(g: RepMap, h: ModuleMap, source: Optional[Representation] = None,
               target: Optional[Representation] = None) -> RepMap:
    """g⊗h: M⊗T -> M'⊗T' for a map g of k-representations and an A-map h."""
    source = source or tensor_rep(g.source, h.source)
    target = target or tensor_rep(g.target, h.target)
    maps = tuple(Matrix.wrap(h.matrix.field, np.kron(gv.data, h.matrix.data)) if 0 not in gv.shape and 0 not in h.matrix.shape
                 else Matrix.zeros(h.matrix.field, gv.rows * h.matrix.rows, gv.cols * h.matrix.cols)
                 for gv in g.maps)
    return RepMap(source, target, maps)


def rep_direct_sum(reps: Sequence[Representation], label: str = "") -> Representation:
    first = reps[0]
    q, a = first.quiver, first.algebra
    branches = tuple(direct_sum([r.branch(v) for r in reps], a) for v in q.vertices)
    maps = tuple(block_diag(a.field, [r.arrow_maps[k] for r in reps]) for k in range(len(q.arrows)))
    return Representation(q, a, branches, maps, label=label or "⊕".join(r.label or "?" for r in reps))


def zero_rep(q: Quiver, a: Algebra) -> Representation:
    branches = tuple(zero_module(a) for _ in q.vertices)
    maps = tuple(Matrix.zeros(a.field, 0, 0) for _ in q.arrows)
    return Representation(q, a, branches, maps, label="0")


def kq_regular_rep(q: Quiver, field: Field) -> Representation:
    """kQ = ⊕ P(i) as a representation over k."""
    return rep_direct_sum([kq_standard_module(q, field, "projective", i) for i in q.vertices], label="kQ")


def kq_dual_rep(q: Quiver, field: Field) -> Representation:
    """D(kQ_kQ) = ⊕ I(i) as a representation over k."""
    return rep_direct_sum([kq_standard_module(q, field, "injective", i) for i in q.vertices], label="D(kQ)")


def m_functor(q: Quiver, i: int, t: Module) -> Representation:
    """m_i(T) = P(i)⊗T"""
    return tensor_rep(kq_standard_module(q, t.field, "projective", i), t)


def simple_lift(q: Quiver, i: int, t: Module) -> Representation:
    """S(i)⊗T"""
    return tensor_rep(kq_standard_module(q, t.field, "simple", i), t)


# -- morphism spaces and random data --------------------------------------------------------------------

def rep_hom_basis(x: Representation, y: Representation) -> List[RepMap]:
    """Hom in Rep(Q, A): vertexwise A-maps with commuting arrow squares."""
    q = x.quiver
    field = x.field
    local = [hom_basis(x.branch(v), y.branch(v)) for v in q.vertices]
    offsets = np.cumsum([0] + [h.dim for h in local])
    total = int(offsets[-1])
    if total == 0:
        return []
    rows = []
    for k, (s, e) in enumerate(q.arrows):
        size = y.branch(e).dim * x.branch(s).dim
        if size == 0:
            continue
        block = field.zeros(size, total)
        for c, h in enumerate(local[s - 1].matrices):
            block[:, offsets[s - 1] + c] = (y.arrow_maps[k] @ h).data.reshape(-1)
        for c, h in enumerate(local[e - 1].matrices):
            block[:, offsets[e - 1] + c] = field.normalize(block[:, offsets[e - 1] + c] - (h @ x.arrow_maps[k]).data.reshape(-1))
        rows.append(block)
    null = kernel_basis(Matrix.wrap(field, np.concatenate(rows, axis=0))) if rows else Matrix.identity(field, total)
    out = []
    for c in range(null.cols):
        coeffs = null.data[:, c]
        maps = tuple(local[v].combine(coeffs[offsets[v]:offsets[v + 1]]) for v in range(q.vertex_count))
        out.append(RepMap(x, y, maps))
    return out


def random_representation(q: Quiver, branches: Sequence[Module], rng: np.random.Generator,
                          label: str = "") -> Representation:
    """Random arrow maps drawn from Hom_A(X_s, X_e) for the given branches."""
    a = branches[0].algebra
    maps = tuple(hom_basis(branches[s - 1], branches[e - 1]).random_element(rng) for s, e in q.arrows)
    return Representation(q, a, tuple(branches), maps, label=label)
