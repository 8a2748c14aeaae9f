"""
Finite-dimensional unital algebras given by structure constants, and their modules.

An algebra of dimension n stores ``mult[i, j, k]`` with b_i·b_j = Σ_k mult[i, j, k] b_k.
A module of dimension d stores one d×d action matrix per basis element. Right
modules are left modules over the opposite algebra.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AlgebraError, AlgebraMismatchError, FieldMismatchError, ModuleError
from .exactlin import (CoordinateSystem, Field, Matrix, block_diag, column_space, complement_indices,
                       hstack, inverse, kernel_basis)
from .quiver import Quiver, path_index, paths

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Algebra:
    field: Field
    mult: np.ndarray
    unit: np.ndarray
    generators: Tuple[np.ndarray, ...] = ()
    labels: Tuple[str, ...] = ()
    kind: str = "structure_constants"
    quiver: Optional[Quiver] = None
    factors: Tuple["Algebra", ...] = ()
    degree: int = 0
    split_basic: bool = False

    def __post_init__(self):
        self.mult.setflags(write=False)
        self.unit.setflags(write=False)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"b{i}" for i in range(self.dim)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Algebra):
            return NotImplemented
        if self is other:
            return True
        return (self.field == other.field and self.mult.shape == other.mult.shape
                and self.quivers == other.quivers
                and bool(np.array_equal(self.mult, other.mult))
                and bool(np.array_equal(self.unit, other.unit)))

    def __hash__(self) -> int:
        return hash((self.field, self.dim, self.quivers))

    def __repr__(self) -> str:
        return f"Algebra({self.kind}, dim={self.dim}, field={self.field})"

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    @cached_property
    def quivers(self) -> Tuple[Quiver, ...]:
        """Quivers of the path algebras this one is built from, outermost first."""
        own = (self.quiver,) if self.quiver is not None else ()
        return own + tuple(q for f in self.factors for q in f.quivers)

    # -- arithmetic on coefficient vectors ----------------------------------

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim, 1)[:, 0]
        v[i] = self.field.one
        return v

    def multiply(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        left = np.tensordot(u, self.mult, axes=(0, 0))
        return self.field.normalize(np.tensordot(v, left, axes=(0, 0)))

    def multiply_sets(self, us: Matrix, vs: Matrix) -> Matrix:
        """All products u·v for u a column of ``us`` and v a column of ``vs`` (u-major)."""
        if us.cols == 0 or vs.cols == 0:
            return Matrix.zeros(self.field, self.dim, 0)
        part = np.tensordot(us.data, self.mult, axes=(0, 0))       # (r, b, k)
        full = np.tensordot(part, vs.data, axes=(1, 0))             # (r, k, s)
        full = np.transpose(full, (1, 0, 2)).reshape(self.dim, -1)
        return Matrix.wrap(self.field, np.ascontiguousarray(full))

    def power(self, u: np.ndarray, k: int) -> np.ndarray:
        result = self.unit.copy()
        base = u
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    @cached_property
    def left_matrices(self) -> Tuple[Matrix, ...]:
        return tuple(Matrix.wrap(self.field, np.ascontiguousarray(self.mult[i].T)) for i in range(self.dim))

    @cached_property
    def right_matrices(self) -> Tuple[Matrix, ...]:
        return tuple(Matrix.wrap(self.field, np.ascontiguousarray(self.mult[:, j, :].T)) for j in range(self.dim))

    def left_matrix(self, u: np.ndarray) -> Matrix:
        return Matrix.wrap(self.field, np.ascontiguousarray(np.tensordot(u, self.mult, axes=(0, 0)).T))

    @cached_property
    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mult, self.mult.transpose(1, 0, 2)))

    # -- derived objects ------------------------------------------------------

    @cached_property
    def opposite(self) -> "Algebra":
        opp = Algebra(self.field, np.ascontiguousarray(self.mult.transpose(1, 0, 2)), self.unit.copy(),
                      generators=self.generators, labels=self.labels, kind="opposite",
                      factors=(self,), split_basic=self.split_basic)
        opp.__dict__["opposite"] = self
        return opp

    @cached_property
    def radical(self) -> Matrix:
        return algebra_radical(self)

    @cached_property
    def regular(self) -> "Module":
        return regular_module(self, "left")

    @cached_property
    def top(self) -> "Module":
        """a/rad(a) as a left module."""
        quotient, _ = quotient_module(self.regular, self.radical)
        return quotient

    def free_module(self, rank: int) -> "Module":
        if rank == 0:
            return zero_module(self)
        return direct_sum([self.regular] * rank)


# -- validation and constructors -----------------------------------------------

def validate_algebra(a: Algebra) -> None:
    """Exhaustive associativity and unit check; names the first offending triple."""
    n = a.dim
    if n < 1:
        raise AlgebraError("algebra dimension must be at least 1", "/dim")
    if a.mult.shape != (n, n, n):
        raise AlgebraError(f"structure constants must have shape {n}x{n}x{n}", "/mult")
    if a.unit.shape != (n,):
        raise AlgebraError(f"unit must have {n} coefficients", "/unit")
    c = a.mult
    norm = a.field.normalize
    left = norm(np.tensordot(c, c, axes=([2], [0])))                          # (b_i b_j) b_k
    right = norm(np.tensordot(c, c, axes=([1], [2])).transpose(0, 2, 3, 1))   # b_i (b_j b_k)
    bad = np.argwhere(np.any(left != right, axis=3)) if n else []
    if len(bad):
        i, j, k = (int(v) for v in bad[0])
        names = a.labels
        raise AlgebraError(f"associativity fails on basis triple ({names[i]}, {names[j]}, {names[k]})", "/mult")
    eye = a.field.eye(n)
    if not np.array_equal(norm(np.tensordot(a.unit, c, axes=(0, 0))), eye):
        raise AlgebraError("unit·b != b for some basis element", "/unit")
    if not np.array_equal(norm(np.tensordot(c, a.unit, axes=(1, 0))), eye):
        raise AlgebraError("b·unit != b for some basis element", "/unit")


def from_structure_constants(field: Field, mult: Any, unit: Sequence[Any],
                             labels: Sequence[str] = (), strict: bool = True) -> Algebra:
    raw = np.asarray(mult, dtype=object)
    n = len(unit)
    if raw.shape != (n, n, n):
        raise AlgebraError(f"structure constants must have shape {n}x{n}x{n}, got {raw.shape}", "/mult")
    convert = field.parse_element if strict else field.element
    arr = field.array(np.vectorize(convert, otypes=[object])(raw) if raw.size else raw)
    unit_arr = field.array(np.asarray([convert(u) for u in unit], dtype=object))
    gens = tuple(field.eye(n)[i].copy() for i in range(n))
    a = Algebra(field, arr, unit_arr, generators=gens, labels=tuple(labels))
    validate_algebra(a)
    return a


@lru_cache(maxsize=None)
def ground_algebra(field: Field) -> Algebra:
    return Algebra(field, field.array([[[1]]]), field.array([1]), labels=("1",), kind="ground",
                   split_basic=True)


@lru_cache(maxsize=None)
def truncated_polynomial(field: Field, t: int) -> Algebra:
    """k[x]/<x^t> on the basis 1, x, ..., x^{t-1}."""
    if t < 1:
        raise AlgebraError(f"truncation degree must be at least 1, got {t}", "/t")
    mult = field.zeros(t * t, t).reshape(t, t, t)
    for i in range(t):
        for j in range(t - i):
            mult[i, j, i + j] = field.one
    unit = field.zeros(1, t)[0]
    unit[0] = field.one
    gens = ()
    if t > 1:
        x = field.zeros(1, t)[0]
        x[1] = field.one
        gens = (x,)
    labels = tuple("1" if i == 0 else ("x" if i == 1 else f"x^{i}") for i in range(t))
    return Algebra(field, mult, unit, generators=gens, labels=labels, kind="trunc_poly",
                   degree=t, split_basic=True)


@lru_cache(maxsize=None)
def path_algebra(q: Quiver, field: Field) -> Algebra:
    """kQ with paths composed right to left: p·q is 'q then p'."""
    basis = paths(q)
    where = path_index(q)
    n = len(basis)
    mult = field.zeros(n * n, n).reshape(n, n, n)
    for i, p in enumerate(basis):
        for j, r in enumerate(basis):
            if r.target == p.source:
                k = where[type(p)(r.source, p.target, r.arrows + p.arrows)]
                mult[i, j, k] = field.one
    unit = field.zeros(1, n)[0]
    gens = []
    for i, p in enumerate(basis):
        if p.is_trivial:
            unit[i] = field.one
        if p.length <= 1:
            g = field.zeros(1, n)[0]
            g[i] = field.one
            gens.append(g)
    return Algebra(field, mult, unit, generators=tuple(gens), labels=tuple(p.label() for p in basis),
                   kind="path_algebra", quiver=q, split_basic=True)


@lru_cache(maxsize=None)
def tensor_algebra(b: Algebra, a: Algebra) -> Algebra:
    """b⊗a on basis pairs (u, l) indexed u·dim(a) + l."""
    if b.field != a.field:
        raise FieldMismatchError(f"tensor of algebras over {b.field} and {a.field}")
    nb, na = b.dim, a.dim
    outer = np.multiply.outer(b.mult, a.mult)                       # (u, v, w, l, m, n)
    mult = np.ascontiguousarray(outer.transpose(0, 3, 1, 4, 2, 5)).reshape(nb * na, nb * na, nb * na)
    unit = np.multiply.outer(b.unit, a.unit).reshape(-1)
    gens = tuple(np.multiply.outer(g, a.unit).reshape(-1) for g in b.generators)
    gens += tuple(np.multiply.outer(b.unit, h).reshape(-1) for h in a.generators)
    labels = tuple(f"{lb}⊗{la}" for lb in b.labels for la in a.labels)
    return Algebra(b.field, b.field.normalize(mult), b.field.normalize(unit), generators=gens,
                   labels=labels, kind="tensor", factors=(b, a),
                   split_basic=b.split_basic and a.split_basic)


def opposite_algebra(a: Algebra) -> Algebra:
    return a.opposite


def quotient_algebra(a: Algebra, ideal: Matrix) -> Tuple[Algebra, Matrix, Matrix]:
    """a/I for a two-sided ideal I; returns (quotient, projection, lift of the quotient basis)."""
    field = a.field
    n = a.dim
    keep = complement_indices(ideal)
    lift = Matrix.identity(field, n).columns(keep)
    full = inverse(hstack(field, [ideal, lift]))
    proj = full.select_rows(range(ideal.cols, n))
    m = len(keep)
    sub = a.mult[np.ix_(keep, keep, list(range(n)))]
    mult = np.tensordot(sub, proj.data.T, axes=(2, 0)) if m else field.zeros(0, 0).reshape(0, 0, 0)
    unit = (proj @ Matrix.wrap(field, a.unit.reshape(-1, 1).copy())).data[:, 0]
    gens = tuple((proj @ Matrix.wrap(field, g.reshape(-1, 1).copy())).data[:, 0] for g in a.generators)
    quotient = Algebra(field, field.normalize(np.ascontiguousarray(mult)), unit, generators=gens,
                       labels=tuple(a.labels[k] for k in keep), kind="quotient")
    return quotient, proj, lift


# -- radical ----------------------------------------------------------------------

def _structural_radical(a: Algebra) -> Optional[Matrix]:
    field, n = a.field, a.dim
    if a.kind == "ground":
        return Matrix.zeros(field, 1, 0)
    if a.kind == "trunc_poly":
        return Matrix.identity(field, n).columns(range(1, n))
    if a.kind == "path_algebra":
        return Matrix.identity(field, n).columns([k for k, p in enumerate(paths(a.quiver)) if not p.is_trivial])
    if a.kind == "opposite" and a.factors:
        return algebra_radical(a.factors[0])
    if a.kind == "tensor" and any(f.split_basic for f in a.factors):
        b, c = a.factors
        rb, rc = algebra_radical(b), algebra_radical(c)
        vectors = [np.multiply.outer(rb.data[:, k], c.basis_vector(l)).reshape(-1)
                   for k in range(rb.cols) for l in range(c.dim)]
        vectors += [np.multiply.outer(b.basis_vector(u), rc.data[:, k]).reshape(-1)
                    for u in range(b.dim) for k in range(rc.cols)]
        if not vectors:
            return Matrix.zeros(field, n, 0)
        return column_space(Matrix.wrap(field, np.stack(vectors, axis=1)))
    return None


def _trace_form_radical(a: Algebra) -> Matrix:
    # characteristic zero: rad = {x : Tr(L_x L_y) = 0 for all y}
    form = np.tensordot(a.mult, a.mult, axes=([1, 2], [2, 1]))
    return kernel_basis(Matrix.wrap(a.field, form))


def _lifted_trace(lift: np.ndarray, exponent_steps: int, p: int, modulus: int) -> int:
    n = lift.shape[0]
    safe = n * modulus * modulus < 2 ** 62
    mat = lift.astype(np.int64) if safe else lift.astype(object)
    for _ in range(exponent_steps):
        acc = mat
        for _ in range(p - 1):
            acc = np.mod(acc @ mat, modulus)
        mat = acc
    return int(np.trace(mat)) % modulus


def _positive_characteristic_radical(a: Algebra) -> Matrix:
    field, n, p = a.field, a.dim, a.field.p
    levels = 0
    while p ** (levels + 1) <= n:
        levels += 1
    ideal = Matrix.identity(field, n)
    for i in range(levels + 1):
        if ideal.cols == 0:
            break
        modulus = p ** (i + 1)
        rows = []
        for right in a.right_matrices:
            products = (right @ ideal).data
            row = []
            for k in range(ideal.cols):
                lifted = np.asarray(a.left_matrix(products[:, k]).data, dtype=np.int64)
                trace = _lifted_trace(lifted, i, p, modulus)
                if trace % (p ** i):
                    raise AlgebraError(f"lifted trace {trace} not divisible by {p}^{i}")
                row.append((trace // p ** i) % p)
            rows.append(row)
        ideal = ideal @ kernel_basis(Matrix.from_rows(field, rows, shape=(n, ideal.cols)))
    return column_space(ideal) if ideal.cols else ideal


def _check_nilpotent(a: Algebra, ideal: Matrix) -> None:
    current = ideal
    while current.cols:
        nxt = a.multiply_sets(current, ideal)
        nxt = column_space(nxt) if nxt.cols else nxt
        if nxt.cols >= current.cols:
            raise AlgebraError("computed radical is not nilpotent")
        current = nxt


def algebra_radical(a: Algebra, method: str = "auto") -> Matrix:
    """
    Basis (columns) of the Jacobson radical.

    ``auto`` uses the known radical of the built-in constructors and falls back to
    the trace computation; ``trace`` forces the trace computation: the trace form
    kernel over Q, the iterated lifted-trace ideals over F_p.
    """
    if method == "auto":
        known = _structural_radical(a)
        if known is not None:
            return known
    if a.field.is_finite:
        ideal = _positive_characteristic_radical(a)
    else:
        ideal = _trace_form_radical(a)
    _check_nilpotent(a, ideal)
    logger.debug("radical of %r has dimension %d", a, ideal.cols)
    return ideal


# -- modules ------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Module:
    """Left module: ``action[i]`` is the matrix of basis element b_i."""
    algebra: Algebra
    action: Tuple[Matrix, ...]
    parts: Tuple["Module", ...] = ()
    label: str = ""

    @property
    def dim(self) -> int:
        return self.action[0].rows

    @property
    def field(self) -> Field:
        return self.algebra.field

    def __repr__(self) -> str:
        return f"Module({self.label or '?'}, dim={self.dim}, over {self.algebra!r})"

    @cached_property
    def stack(self) -> np.ndarray:
        return np.stack([m.data for m in self.action]) if self.dim else self.field.zeros(0, 0).reshape(self.algebra.dim, 0, 0)

    def act(self, coeffs: np.ndarray) -> Matrix:
        if self.dim == 0:
            return Matrix.zeros(self.field, 0, 0)
        return Matrix.wrap(self.field, np.tensordot(coeffs, self.stack, axes=(0, 0)))

    @cached_property
    def generator_action(self) -> Tuple[Matrix, ...]:
        return tuple(self.act(g) for g in self.algebra.generators)

    def summands(self) -> Tuple["Module", ...]:
        return self.parts or (self,)

    def same_data(self, other: "Module") -> bool:
        return (self.algebra == other.algebra and self.dim == other.dim
                and all(x == y for x, y in zip(self.action, other.action)))

    def validate(self) -> "Module":
        a = self.algebra
        n, d = a.dim, self.dim
        if len(self.action) != n:
            raise ModuleError(f"expected {n} action matrices, got {len(self.action)}", "/action")
        for i, m in enumerate(self.action):
            if m.shape != (d, d):
                raise ModuleError(f"action matrix has shape {m.shape}, expected {d}x{d}", f"/action/{i}")
            if m.field != a.field:
                raise FieldMismatchError(f"action matrix over {m.field}, algebra over {a.field}")
        if d == 0:
            return self
        if not self.act(a.unit).is_identity():
            raise ModuleError("the unit does not act as the identity", "/action")
        norm = a.field.normalize
        stack = self.stack
        for i in range(n):
            lhs = norm(np.matmul(stack[i][None, :, :], stack))          # ρ(b_i)ρ(b_j)
            rhs = norm(np.tensordot(a.mult[i], stack, axes=(1, 0)))    # Σ_k c_ijk ρ(b_k)
            bad = np.flatnonzero(np.any((lhs != rhs).reshape(n, -1), axis=1))
            if bad.size:
                j = int(bad[0])
                raise ModuleError(f"relation {a.labels[i]}·{a.labels[j]} fails: "
                                  f"ρ({a.labels[i]})ρ({a.labels[j]}) != ρ({a.labels[i]}·{a.labels[j]})", "/action")
        return self


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """matrix is target.dim × source.dim and intertwines the actions"""
    source: Module
    target: Module
    matrix: Matrix

    def validate(self) -> "ModuleMap":
        if self.source.algebra != self.target.algebra:
            raise AlgebraMismatchError("map between modules over different algebras")
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ModuleError(f"map has shape {self.matrix.shape}, expected {self.target.dim}x{self.source.dim}")
        checks = self.source.generator_action or self.source.action
        targets = self.target.generator_action or self.target.action
        for g, (rs, rt) in enumerate(zip(checks, targets)):
            if not (self.matrix @ rs) == (rt @ self.matrix):
                raise ModuleError(f"map does not intertwine generator {g}")
        return self

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """self ∘ other"""
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    @classmethod
    def identity(cls, x: Module) -> "ModuleMap":
        return cls(x, x, Matrix.identity(x.field, x.dim))

    @classmethod
    def zero(cls, source: Module, target: Module) -> "ModuleMap":
        return cls(source, target, Matrix.zeros(source.field, target.dim, source.dim))


def make_module(algebra: Algebra, action: Sequence[Matrix], label: str = "", check: bool = True) -> Module:
    module = Module(algebra, tuple(action), label=label)
    return module.validate() if check else module


def zero_module(a: Algebra) -> Module:
    empty = Matrix.zeros(a.field, 0, 0)
    return Module(a, tuple(empty for _ in range(a.dim)), label="0")


def regular_module(a: Algebra, side: str = "left") -> Module:
    if side == "left":
        return Module(a, a.left_matrices, label="A")
    if side == "right":
        return Module(a.opposite, a.right_matrices, label="A_A")
    raise ModuleError(f"unknown side {side!r}")


def dual_module(x: Module) -> Module:
    """D(X) = Hom_k(X, k) as a module over the opposite algebra."""
    parts = tuple(dual_module(p) for p in x.parts)
    return Module(x.algebra.opposite, tuple(m.T for m in x.action), parts=parts,
                  label=f"D({x.label})" if x.label else "")


def injective_cogenerator(a: Algebra) -> Module:
    """D(A_A) as a left a-module."""
    return dual_module(regular_module(a, "right"))


def direct_sum(modules: Sequence[Module], algebra: Optional[Algebra] = None) -> Module:
    if not modules:
        if algebra is None:
            raise ModuleError("empty direct sum needs an algebra")
        return zero_module(algebra)
    a = modules[0].algebra
    for m in modules[1:]:
        if m.algebra != a:
            raise AlgebraMismatchError("direct sum of modules over different algebras")
    parts = tuple(p for m in modules for p in m.summands() if p.dim > 0)
    if len(parts) == 0:
        return zero_module(a)
    if len(parts) == 1:
        return parts[0]
    action = tuple(block_diag(a.field, [p.action[i] for p in parts]) for i in range(a.dim))
    label = "⊕".join(p.label or "?" for p in parts)
    return Module(a, action, parts=parts, label=label)


def part_offsets(x: Module) -> List[int]:
    offsets = [0]
    for p in x.summands():
        offsets.append(offsets[-1] + p.dim)
    return offsets


def submodule(x: Module, basis: Matrix, label: str = "") -> Tuple[Module, Matrix]:
    """Submodule spanned by the independent columns of ``basis``; returns it and its inclusion."""
    a = x.algebra
    if basis.cols == 0:
        return zero_module(a), Matrix.zeros(x.field, x.dim, 0)
    coords = CoordinateSystem(basis)
    images = hstack(x.field, [m @ basis for m in x.action])
    if not coords.contains(images):
        raise ModuleError("subspace is not invariant under the action")
    local = coords.coords(images)
    s = basis.cols
    action = tuple(local.block(0, s, i * s, (i + 1) * s) for i in range(a.dim))
    return Module(a, action, label=label), basis


def quotient_module(x: Module, sub_basis: Matrix, label: str = "") -> Tuple[Module, Matrix]:
    """X / U for an invariant subspace U; returns the quotient and the projection matrix."""
    field = x.field
    d = x.dim
    if sub_basis.cols == 0:
        return x, Matrix.identity(field, d)
    keep = complement_indices(sub_basis)
    if not keep:
        return zero_module(x.algebra), Matrix.zeros(field, 0, d)
    full = inverse(hstack(field, [sub_basis, Matrix.identity(field, d).columns(keep)]))
    proj = full.select_rows(range(sub_basis.cols, d))
    action = tuple(proj @ m.columns(keep) for m in x.action)
    return Module(x.algebra, action, label=label), proj


def generated_submodule(x: Module, vectors: Matrix) -> Matrix:
    """Basis of the smallest submodule containing the given vectors."""
    if vectors.cols == 0 or x.dim == 0:
        return Matrix.zeros(x.field, x.dim, 0)
    span = column_space(vectors)
    movers = x.generator_action or x.action
    while True:
        grown = column_space(hstack(x.field, [span] + [g @ span for g in movers]))
        if grown.cols == span.cols:
            return span
        span = grown


def radical_submodule(x: Module) -> Matrix:
    """Basis of rad(A)·X."""
    rad = x.algebra.radical
    if rad.cols == 0 or x.dim == 0:
        return Matrix.zeros(x.field, x.dim, 0)
    images = hstack(x.field, [x.act(rad.data[:, k]) for k in range(rad.cols)])
    return column_space(images)


def module_top(x: Module) -> Tuple[Module, Matrix]:
    return quotient_module(x, radical_submodule(x))
