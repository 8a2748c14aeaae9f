"""
Hom spaces, projective resolutions, Ext, homological dimensions, endomorphism
algebras, Krull-Schmidt decomposition and isomorphism testing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, symbols

from .algebra import (Algebra, Module, ModuleMap, algebra_radical, direct_sum, dual_module, part_offsets,
                      quotient_algebra, quotient_module, radical_submodule, submodule, zero_module)
from .config import DECOMPOSITION_TRIALS, DEFAULT_SEED
from .errors import AlgebraMismatchError, DecompositionError, ModuleError, UnsupportedFieldError
from .exactlin import (CoordinateSystem, Matrix, block_diag, column_space, complement_indices, hstack,
                       inverse, is_invertible, kernel_basis, rank, solve_linear)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DimensionResult:
    """A homological dimension: an exact ``value`` or a lower bound ``at_least``"""
    value: Optional[int] = None
    at_least: Optional[int] = None

    @property
    def finite(self) -> bool:
        return self.value is not None

    def within(self, bound: int) -> bool:
        return self.value is not None and self.value <= bound

    def to_dict(self) -> Dict[str, int]:
        return {"value": self.value} if self.finite else {"at_least": self.at_least}

    def __str__(self) -> str:
        return str(self.value) if self.finite else f">={self.at_least}"


# -- Hom ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HomBasis:
    source: Module
    target: Module
    matrices: Tuple[Matrix, ...]

    @property
    def dim(self) -> int:
        return len(self.matrices)

    @property
    def field(self):
        return self.source.field

    def maps(self) -> List[ModuleMap]:
        return [ModuleMap(self.source, self.target, m) for m in self.matrices]

    @cached_property
    def vectors(self) -> Matrix:
        size = self.target.dim * self.source.dim
        if not self.matrices:
            return Matrix.zeros(self.field, size, 0)
        return Matrix.wrap(self.field, np.stack([m.data.reshape(-1) for m in self.matrices], axis=1))

    @cached_property
    def coordinates(self) -> CoordinateSystem:
        return CoordinateSystem(self.vectors, check=False)

    def coords(self, f: Matrix) -> Matrix:
        return self.coordinates.coords(f.flatten())

    def combine(self, coeffs: np.ndarray) -> Matrix:
        if not self.matrices:
            return Matrix.zeros(self.field, self.target.dim, self.source.dim)
        flat = self.vectors.data @ coeffs
        return Matrix.wrap(self.field, flat.reshape(self.target.dim, self.source.dim))

    def random_element(self, rng: np.random.Generator) -> Matrix:
        coeffs = self.field.random_array(rng, self.dim, 1)[:, 0]
        return self.combine(coeffs)


def _diagonal_projection(m: Matrix) -> Optional[np.ndarray]:
    data = m.data
    diag = np.diagonal(data).copy()
    off = data.copy()
    np.fill_diagonal(off, 0)
    if np.any(off) or not all(v in (0, 1) for v in diag):
        return None
    return diag.astype(np.int64)


def _hom_block(x: Module, y: Module) -> Tuple[Matrix, ...]:
    field = x.field
    dx, dy = x.dim, y.dim
    if dx == 0 or dy == 0:
        return ()
    gx = x.generator_action or x.action
    gy = y.generator_action or y.action
    mask = np.ones((dy, dx), dtype=bool)
    rest = []
    for a, b in zip(gx, gy):
        da, db = _diagonal_projection(a), _diagonal_projection(b)
        if da is not None and db is not None:
            mask &= db[:, None] == da[None, :]
        else:
            rest.append((a, b))
    free = np.flatnonzero(mask.reshape(-1))
    if free.size == 0:
        return ()
    if rest:
        eye_x, eye_y = field.eye(dx), field.eye(dy)
        blocks = [(np.kron(eye_y, a.data.T) - np.kron(b.data, eye_x))[:, free] for a, b in rest]
        system = field.normalize(np.concatenate(blocks, axis=0))
        system = system[np.any(system != 0, axis=1)]
        null = kernel_basis(Matrix.wrap(field, system)) if system.shape[0] else Matrix.identity(field, free.size)
    else:
        null = Matrix.identity(field, free.size)
    out = []
    for k in range(null.cols):
        flat = field.zeros(1, dy * dx)[0]
        flat[free] = null.data[:, k]
        out.append(Matrix.wrap(field, flat.reshape(dy, dx)))
    return tuple(out)


def hom_basis(x: Module, y: Module) -> HomBasis:
    """Basis of Hom_A(x, y), computed blockwise over recorded direct-sum parts."""
    if x.algebra != y.algebra:
        raise AlgebraMismatchError("Hom between modules over different algebras")
    xs, ys = x.summands(), y.summands()
    if len(xs) == 1 and len(ys) == 1:
        return HomBasis(x, y, _hom_block(x, y))
    ox, oy = part_offsets(x), part_offsets(y)
    cache: Dict[Tuple[int, int], Tuple[Matrix, ...]] = {}
    out = []
    for j, xp in enumerate(xs):
        for i, yp in enumerate(ys):
            key = (id(xp), id(yp))
            if key not in cache:
                cache[key] = _hom_block(xp, yp)
            for block in cache[key]:
                full = x.field.zeros(y.dim, x.dim)
                full[oy[i]:oy[i + 1], ox[j]:ox[j + 1]] = block.data
                out.append(Matrix.wrap(x.field, full))
    return HomBasis(x, y, tuple(out))


def hom_dim(x: Module, y: Module) -> int:
    return hom_basis(x, y).dim


# -- kernels and cokernels ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KernelCokernel:
    kernel: Module
    kernel_inclusion: Matrix
    image: Module
    image_inclusion: Matrix
    cokernel: Module
    cokernel_projection: Matrix


def kernel_cokernel(f: ModuleMap) -> KernelCokernel:
    kernel, k_incl = submodule(f.source, kernel_basis(f.matrix))
    img_basis = column_space(f.matrix)
    image, i_incl = submodule(f.target, img_basis)
    cokernel, c_proj = quotient_module(f.target, img_basis)
    return KernelCokernel(kernel, k_incl, image, i_incl, cokernel, c_proj)


# -- projective resolutions ------------------------------------------------------------------

def free_cover(x: Module) -> Tuple[Module, Matrix]:
    """Free module on lifts of a basis of x/rad(x) and the surjection onto x."""
    a = x.algebra
    keep = complement_indices(radical_submodule(x)) if x.dim else []
    cover = a.free_module(len(keep))
    if not keep:
        return cover, Matrix.zeros(x.field, x.dim, 0)
    blocks = [Matrix.wrap(x.field, np.ascontiguousarray(x.stack[:, :, c].T)) for c in keep]
    return cover, hstack(x.field, blocks)


@dataclass(frozen=True, eq=False)
class Resolution:
    """P_k = A^{ranks[k]}; differentials[k-1] is d_k: P_k -> P_{k-1}"""
    target: Module
    ranks: Tuple[int, ...]
    augmentation: Matrix
    differentials: Tuple[Matrix, ...]
    syzygies: Tuple[Module, ...]
    complete: bool

    @property
    def algebra(self) -> Algebra:
        return self.target.algebra

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def term(self, k: int) -> Module:
        return self.algebra.free_module(self.ranks[k] if k < len(self.ranks) else 0)

    def verify(self) -> bool:
        n = self.algebra.dim
        if rank(self.augmentation) != self.target.dim:
            return False
        maps = [self.augmentation] + list(self.differentials)
        for k in range(len(maps) - 1):
            kernel_dim = self.ranks[k] * n - rank(maps[k])
            if kernel_dim != rank(maps[k + 1]):
                return False
            if not (maps[k] @ maps[k + 1]).is_zero():
                return False
        if self.complete:
            last = maps[-1]
            return rank(last) == last.cols
        return True


def projective_resolution(x: Module, length: int) -> Resolution:
    """Free resolution on minimal generating sets, terms P_0..P_length."""
    syzygies = [x]
    ranks: List[int] = []
    differentials: List[Matrix] = []
    augmentation = None
    inclusion: Optional[Matrix] = None
    current = x
    complete = False
    for k in range(length + 1):
        cover, pi = free_cover(current)
        ranks.append(cover.dim // x.algebra.dim)
        if k == 0:
            augmentation = pi
        else:
            differentials.append(inclusion @ pi)
        kernel = kernel_basis(pi)
        if kernel.cols == 0:
            complete = True
            break
        if k == length:
            break
        current, inclusion = submodule(cover, kernel)
        syzygies.append(current)
    logger.debug("resolution ranks %s (complete=%s)", ranks, complete)
    return Resolution(x, tuple(ranks), augmentation, tuple(differentials), tuple(syzygies), complete)


def syzygy(x: Module) -> Module:
    res = projective_resolution(x, 1)
    return res.syzygies[1] if len(res.syzygies) > 1 else zero_module(x.algebra)


def pad_resolution(res: Resolution, position: int) -> Resolution:
    """Add the split complex A --id--> A in degrees position+1, position."""
    a = res.algebra
    field = a.field
    n = a.dim
    ranks = list(res.ranks) + [0] * max(0, position + 2 - len(res.ranks))
    diffs = list(res.differentials)
    while len(diffs) < len(ranks) - 1:
        k = len(diffs) + 1
        diffs.append(Matrix.zeros(field, ranks[k - 1] * n, ranks[k] * n))
    ident = Matrix.identity(field, n)
    augmentation = res.augmentation
    if position == 0:
        augmentation = hstack(field, [augmentation, Matrix.zeros(field, res.target.dim, n)])
    else:
        d = diffs[position - 1]
        diffs[position - 1] = hstack(field, [d, Matrix.zeros(field, d.rows, n)])
    diffs[position] = block_diag(field, [diffs[position], ident])
    if position + 1 < len(diffs):
        d = diffs[position + 1]
        diffs[position + 1] = Matrix.wrap(field, np.concatenate([d.data, field.zeros(n, d.cols)], axis=0))
    ranks[position] += 1
    ranks[position + 1] += 1
    return Resolution(res.target, tuple(ranks), augmentation, tuple(diffs), res.syzygies, res.complete)


# -- Ext ------------------------------------------------------------------------------------------

def _cochain_matrix(res: Resolution, k: int, y: Module) -> Matrix:
    """D_k: Hom(P_{k-1}, Y) -> Hom(P_k, Y) in the coordinates Hom(A^g, Y) = Y^g."""
    a = res.algebra
    field = a.field
    n, dy = a.dim, y.dim
    g_prev = res.ranks[k - 1] if k - 1 < len(res.ranks) else 0
    g_cur = res.ranks[k] if k < len(res.ranks) else 0
    if g_prev == 0 or g_cur == 0 or dy == 0 or k - 1 >= len(res.differentials):
        return Matrix.zeros(field, g_cur * dy, g_prev * dy)
    d = res.differentials[k - 1].data.reshape(g_prev, n, g_cur, n)
    coeffs = np.tensordot(d, a.unit, axes=(3, 0))                  # (j, l, i): component j of d(e_i)
    blocks = np.tensordot(coeffs, y.stack, axes=(1, 0))            # (j, i, r, c)
    full = np.transpose(blocks, (1, 2, 0, 3)).reshape(g_cur * dy, g_prev * dy)
    return Matrix.wrap(field, np.ascontiguousarray(full))


def ext_dims(x: Module, y: Module, s_max: int, resolution: Optional[Resolution] = None) -> List[int]:
    """dim Ext^s(x, y) for s = 0..s_max from one resolution."""
    if x.algebra != y.algebra:
        raise AlgebraMismatchError("Ext between modules over different algebras")
    res = resolution
    if res is None or (not res.complete and res.length < s_max + 1):
        res = projective_resolution(x, s_max + 1)
    ranks_d = [rank(_cochain_matrix(res, k, y)) for k in range(1, s_max + 2)]
    out = []
    for s in range(s_max + 1):
        g = res.ranks[s] if s < len(res.ranks) else 0
        before = ranks_d[s - 1] if s > 0 else 0
        out.append(g * y.dim - ranks_d[s] - before)
    return out


def ext_dim(s: int, x: Module, y: Module) -> int:
    return ext_dims(x, y, s)[s]


# -- projectivity and dimensions ------------------------------------------------------------------

def split_section(x: Module) -> Optional[Matrix]:
    """A section of the free cover of x, when it splits."""
    cover, pi = free_cover(x)
    if x.dim == 0:
        return Matrix.zeros(x.field, cover.dim, 0)
    homs = hom_basis(x, cover)
    if homs.dim == 0:
        return None
    system = hstack(x.field, [(pi @ h).flatten() for h in homs.matrices])
    coeffs = solve_linear(system, Matrix.identity(x.field, x.dim).flatten())
    if coeffs is None:
        return None
    return homs.combine(coeffs.data[:, 0])


def is_projective(x: Module) -> bool:
    return split_section(x) is not None


def is_injective(x: Module) -> bool:
    return is_projective(dual_module(x))


def homological_dimension(x: Module, side: str = "projective", cutoff: int = 4) -> DimensionResult:
    """
    Projective (or injective, through duality) dimension up to ``cutoff``.

    The least d with Ω^d(x) projective, tested as Ext^1(Ω^d(x), a/rad a) = 0.
    """
    if side == "injective":
        return homological_dimension(dual_module(x), "projective", cutoff)
    top = x.algebra.top
    current = x
    for d in range(cutoff + 1):
        if current.dim == 0:
            return DimensionResult(value=d)
        res = projective_resolution(current, 2)
        if ext_dims(current, top, 1, res)[1] == 0:
            return DimensionResult(value=d)
        current = res.syzygies[1]
    return DimensionResult(at_least=cutoff + 1)


def global_dimension(a: Algebra, cutoff: int = 4) -> DimensionResult:
    return homological_dimension(a.top, "projective", cutoff)


# -- endomorphism algebras -------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EndomorphismAlgebra:
    """End(x) with b_i·b_j = b_i∘b_j on the Hom basis."""
    module: Module
    hom: HomBasis
    algebra: Algebra

    def element(self, coeffs: np.ndarray) -> Matrix:
        return self.hom.combine(coeffs)

    def coords(self, f: Matrix) -> np.ndarray:
        return self.hom.coords(f).data[:, 0]


def endo_algebra(x: Module) -> EndomorphismAlgebra:
    if x.dim == 0:
        raise ModuleError("the zero module has no endomorphism algebra")
    field = x.field
    hom = hom_basis(x, x)
    m = hom.dim
    products = np.stack([(hi @ hj).data.reshape(-1) for hi in hom.matrices for hj in hom.matrices], axis=1)
    coords = hom.coordinates.coords(Matrix.wrap(field, products)).data      # (m, m*m)
    mult = np.ascontiguousarray(coords.T.reshape(m, m, m))
    unit = hom.coords(Matrix.identity(field, x.dim)).data[:, 0]
    gens = tuple(field.eye(m)[i].copy() for i in range(m))
    algebra = Algebra(field, mult, unit, generators=gens, labels=tuple(f"f{i}" for i in range(m)),
                      kind="endomorphism")
    return EndomorphismAlgebra(x, hom, algebra)


# -- decomposition ------------------------------------------------------------------------------------

_X = symbols("x")


def _minimal_polynomial(phi: Matrix) -> List[int]:
    """Coefficients, highest degree first, of the minimal polynomial over F_p."""
    field = phi.field
    d = phi.rows
    powers = [Matrix.identity(field, d).flatten()]
    current = Matrix.identity(field, d)
    while True:
        current = current @ phi
        vec = current.flatten()
        coeffs = solve_linear(hstack(field, powers), vec)
        if coeffs is not None:
            low = [int(c) for c in coeffs.data[:, 0]]
            return [1] + [(-c) % field.p for c in reversed(low)]
        powers.append(vec)


def _evaluate(coeffs: Sequence[int], phi: Matrix) -> Matrix:
    field = phi.field
    result = Matrix.zeros(field, phi.rows, phi.cols)
    ident = Matrix.identity(field, phi.rows)
    for c in coeffs:
        result = result @ phi + ident.scale(c)
    return result


def _coprime_split(phi: Matrix) -> Optional[Tuple[Matrix, Matrix]]:
    p = phi.field.p
    mu = _minimal_polynomial(phi)
    poly = Poly(mu, _X, modulus=p)
    _, factors = poly.factor_list()
    if len(factors) < 2:
        return None
    first, power = factors[0]
    g = first ** power
    h = poly.quo(g)
    g_coeffs = [int(c) % p for c in g.all_coeffs()]
    h_coeffs = [int(c) % p for c in h.all_coeffs()]
    return kernel_basis(_evaluate(g_coeffs, phi)), kernel_basis(_evaluate(h_coeffs, phi))


def _frobenius_fixed_space(s: Algebra) -> Matrix:
    field = s.field
    images = np.stack([s.power(s.basis_vector(i), field.p) for i in range(s.dim)], axis=1)
    return kernel_basis(Matrix.wrap(field, images) - Matrix.identity(field, s.dim))


def _splitting_endomorphism(x: Module, rng: np.random.Generator, trials: int) -> Optional[Matrix]:
    """An endomorphism whose minimal polynomial has coprime factors, or None when End(x) is local."""
    end = endo_algebra(x)
    if end.hom.dim == 1:
        return None
    for h in end.hom.matrices:
        if _coprime_split(h) is not None:
            return h
    e = end.algebra
    quotient, _, lift = quotient_algebra(e, algebra_radical(e, method="trace"))
    if quotient.dim == 1:
        return None
    if quotient.is_commutative:
        fixed = _frobenius_fixed_space(quotient)
        if fixed.cols == 1:
            return None
        unit = Matrix.wrap(quotient.field, quotient.unit.reshape(-1, 1).copy())
        for k in range(fixed.cols):
            s = fixed.column(k)
            if rank(hstack(quotient.field, [unit, s])) == 2:
                return end.element((lift @ s).data[:, 0])
    for _ in range(trials):
        phi = end.hom.random_element(rng)
        if _coprime_split(phi) is not None:
            return phi
    raise DecompositionError(f"no splitting endomorphism after {trials} trials (dim End = {end.hom.dim})")


def _split(x: Module, rng: np.random.Generator, trials: int) -> List[Tuple[Module, Matrix]]:
    field = x.field
    if x.dim == 0:
        return []
    if len(x.parts) > 1:
        offsets = part_offsets(x)
        out = []
        for k, part in enumerate(x.parts):
            embed = Matrix.identity(field, x.dim).columns(range(offsets[k], offsets[k + 1]))
            out.extend((m, embed @ b) for m, b in _split(part, rng, trials))
        return out
    phi = _splitting_endomorphism(x, rng, trials)
    if phi is None:
        return [(x, Matrix.identity(field, x.dim))]
    u, w = _coprime_split(phi)
    out = []
    for basis in (u, w):
        sub, incl = submodule(x, basis)
        out.extend((m, incl @ b) for m, b in _split(sub, rng, trials))
    return out


def indecomposables_isomorphism(u: Module, v: Module) -> Optional[Matrix]:
    """An isomorphism u -> v for u indecomposable, found among Hom basis products."""
    if u.dim != v.dim:
        return None
    forward = hom_basis(u, v)
    if forward.dim == 0:
        return None
    backward = hom_basis(v, u)
    for f in forward.matrices:
        for g in backward.matrices:
            if is_invertible(g @ f):
                return f
    return None


@dataclass(frozen=True, eq=False)
class Decomposition:
    module: Module
    pieces: Tuple[Module, ...]
    classes: Tuple[int, ...]
    witness: Matrix
    seed: int

    @property
    def summands(self) -> List[Tuple[Module, int]]:
        """(representative, multiplicity) per isomorphism class, in order of first appearance."""
        out: Dict[int, List] = {}
        for piece, cls in zip(self.pieces, self.classes):
            if cls not in out:
                out[cls] = [piece, 0]
            out[cls][1] += 1
        return [(m, c) for m, c in out.values()]

    @property
    def basic(self) -> List[Module]:
        return [m for m, _ in self.summands]

    def verify(self) -> bool:
        total = direct_sum(self.pieces, self.module.algebra)
        if not is_invertible(self.witness):
            return False
        return all((rx @ self.witness) == (self.witness @ rs)
                   for rx, rs in zip(self.module.action, total.action))


def decompose(x: Module, seed: int = DEFAULT_SEED, trials: int = DECOMPOSITION_TRIALS) -> Decomposition:
    """Krull-Schmidt decomposition over F_p with a verified witness isomorphism."""
    if not x.field.is_finite:
        raise UnsupportedFieldError("decomposition is only available over prime fields")
    rng = np.random.default_rng(seed)
    found = _split(x, rng, trials)
    pieces = tuple(m for m, _ in found)
    witness = hstack(x.field, [b for _, b in found], rows=x.dim)
    reps: List[Module] = []
    classes = []
    for piece in pieces:
        for k, rep in enumerate(reps):
            if indecomposables_isomorphism(rep, piece) is not None:
                classes.append(k)
                break
        else:
            reps.append(piece)
            classes.append(len(reps) - 1)
    logger.debug("decomposed dim %d into %d pieces, %d classes", x.dim, len(pieces), len(reps))
    return Decomposition(x, pieces, tuple(classes), witness, seed)


def is_indecomposable(x: Module, seed: int = DEFAULT_SEED, trials: int = DECOMPOSITION_TRIALS) -> bool:
    if x.dim == 0:
        return False
    if len(x.parts) > 1:
        return False
    if not x.field.is_finite:
        raise UnsupportedFieldError("indecomposability is only decided over prime fields")
    return _splitting_endomorphism(x, np.random.default_rng(seed), trials) is None


# -- isomorphism -------------------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IsoResult:
    status: str                       # yes | no | unknown
    witness: Optional[Matrix] = None
    reason: str = ""


def are_isomorphic(x: Module, y: Module, seed: int = DEFAULT_SEED, attempts: int = 8) -> IsoResult:
    if x.algebra != y.algebra:
        raise AlgebraMismatchError("isomorphism test across different algebras")
    field = x.field
    if x.dim != y.dim:
        return IsoResult("no", reason=f"dimensions {x.dim} and {y.dim} differ")
    if x.same_data(y):
        return IsoResult("yes", Matrix.identity(field, x.dim), "identical data")
    xy = hom_basis(x, y)
    fingerprint = (hom_dim(x, x), xy.dim, hom_dim(y, x), hom_dim(y, y))
    if len(set(fingerprint)) > 1:
        return IsoResult("no", reason=f"hom dimensions {fingerprint} differ")
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        f = xy.random_element(rng)
        if is_invertible(f):
            return IsoResult("yes", f, "random search")
    if not field.is_finite:
        return IsoResult("unknown", reason=f"random search failed after {attempts} attempts over Q")
    dx, dy = decompose(x, seed), decompose(y, seed)
    if len(dx.pieces) != len(dy.pieces):
        return IsoResult("no", reason="different numbers of indecomposable summands")
    offsets_x = np.cumsum([0] + [p.dim for p in dx.pieces])
    offsets_y = np.cumsum([0] + [p.dim for p in dy.pieces])
    perm = field.zeros(x.dim, x.dim)
    used = set()
    for i, piece in enumerate(dx.pieces):
        for j, other in enumerate(dy.pieces):
            if j in used:
                continue
            iso = indecomposables_isomorphism(piece, other)
            if iso is not None:
                used.add(j)
                perm[offsets_y[j]:offsets_y[j + 1], offsets_x[i]:offsets_x[i + 1]] = iso.data
                break
        else:
            return IsoResult("no", reason=f"summand {i} of the first module has no partner")
    witness = dy.witness @ Matrix.wrap(field, perm) @ inverse(dx.witness)
    ModuleMap(x, y, witness).validate()
    return IsoResult("yes", witness, "matched indecomposable summands")
