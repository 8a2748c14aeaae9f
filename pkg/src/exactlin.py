"""
Exact dense linear algebra over prime fields F_p and the rationals.

Matrices wrap numpy arrays: ``int64`` entries reduced into [0, p) for F_p,
``object`` arrays of ``fractions.Fraction`` for Q. Every reduction uses the
same deterministic pivoting (first nonzero entry, columns left to right), so
kernels, solutions and column bases are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime

from .config import MAX_PRIME
from .errors import FieldMismatchError, InputError

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class Field:
    """A prime field F_p (``p`` set) or the rationals (``p`` is None)"""
    p: Optional[int] = None

    def __post_init__(self):
        if self.p is None:
            return
        if not isinstance(self.p, int) or self.p < 2 or not isprime(self.p):
            raise InputError(f"field characteristic {self.p!r} is not a prime")
        if self.p >= MAX_PRIME:
            raise InputError(f"prime {self.p} exceeds the supported bound {MAX_PRIME}")

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def rational(cls) -> "Field":
        return cls(None)

    @classmethod
    def parse(cls, name: str) -> "Field":
        """Parse the command-line form ``fp:P`` or ``q``."""
        text = name.strip().lower()
        if text in ("q", "qq", "rational"):
            return cls.rational()
        if text.startswith("fp:"):
            try:
                return cls.prime(int(text[3:]))
            except ValueError:
                raise InputError(f"bad field {name!r}")
        raise InputError(f"bad field {name!r} (expected fp:P or q)")

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def dtype(self):
        return np.int64 if self.is_finite else object

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_finite else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_finite else Fraction(1)

    def __str__(self) -> str:
        return f"fp:{self.p}" if self.is_finite else "q"

    # -- elements -----------------------------------------------------------

    def element(self, value: Any) -> Scalar:
        """Coerce an int, Fraction or numeric string into the field (reducing mod p)."""
        if self.is_finite:
            if isinstance(value, Fraction):
                return int(value.numerator * pow(value.denominator, -1, self.p)) % self.p
            if isinstance(value, str):
                value = Fraction(value)
                return self.element(value)
            return int(value) % self.p
        return Fraction(value)

    def parse_element(self, value: Any) -> Scalar:
        """Strict text decoding: F_p entries in [0, p), rationals in lowest terms."""
        if self.is_finite:
            if isinstance(value, bool) or not isinstance(value, (int, str)):
                raise InputError(f"{value!r} is not an F_{self.p} element")
            try:
                number = int(value)
            except ValueError:
                raise InputError(f"{value!r} is not an F_{self.p} element")
            if not 0 <= number < self.p:
                raise InputError(f"{number} is outside [0, {self.p})")
            return number
        if isinstance(value, bool):
            raise InputError(f"{value!r} is not a rational")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                parsed = Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise InputError(f"{value!r} is not a rational")
            if str(parsed) != value.strip():
                raise InputError(f"{value!r} is not in lowest terms with positive denominator")
            return parsed
        raise InputError(f"{value!r} is not a rational")

    def encode(self, value: Scalar) -> Union[int, str]:
        if self.is_finite:
            return int(value) % self.p
        return str(Fraction(value))

    def inv(self, value: Scalar) -> Scalar:
        if self.is_finite:
            return pow(int(value), -1, self.p)
        return 1 / Fraction(value)

    def elements(self) -> range:
        if not self.is_finite:
            raise InputError("the rationals cannot be enumerated")
        return range(self.p)

    # -- arrays -------------------------------------------------------------

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        if self.is_finite:
            return np.mod(arr, self.p)
        return arr

    def array(self, data: Any, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
        if self.is_finite:
            if isinstance(data, np.ndarray) and data.dtype == object:
                arr = np.vectorize(self.element, otypes=[np.int64])(data) if data.size else data.astype(np.int64)
            else:
                arr = np.asarray(data, dtype=np.int64)
            arr = np.mod(arr, self.p)
        else:
            raw = np.asarray(data, dtype=object)
            arr = np.vectorize(Fraction, otypes=[object])(raw) if raw.size else raw
        if shape is not None:
            arr = arr.reshape(shape)
        return arr

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.is_finite:
            return np.zeros((rows, cols), dtype=np.int64)
        return np.full((rows, cols), Fraction(0), dtype=object)

    def eye(self, n: int) -> np.ndarray:
        arr = self.zeros(n, n)
        for i in range(n):
            arr[i, i] = self.one
        return arr

    def random_array(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        if self.is_finite:
            return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)
        ints = rng.integers(-3, 4, size=(rows, cols))
        return self.array(ints.astype(object))


class Matrix:
    """Immutable dense matrix over a Field"""

    __slots__ = ("field", "data")

    def __init__(self, field: Field, data: Any, shape: Optional[Tuple[int, int]] = None):
        arr = field.array(data, shape)
        if arr.ndim == 1 and shape is None:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        if arr.ndim != 2:
            raise InputError(f"matrix data must be two-dimensional, got {arr.ndim} axes")
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @classmethod
    def wrap(cls, field: Field, arr: np.ndarray) -> "Matrix":
        """Wrap an already normalised array without copying or re-coercing."""
        obj = cls.__new__(cls)
        arr = field.normalize(arr)
        arr.setflags(write=False)
        obj.field = field
        obj.data = arr
        return obj

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls.wrap(field, field.zeros(rows, cols))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls.wrap(field, field.eye(n))

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[Any]],
                  shape: Optional[Tuple[int, int]] = None, strict: bool = False) -> "Matrix":
        """Build from an array of rows; ``shape`` is needed when a side is empty."""
        rows = [list(r) for r in rows]
        if shape is None:
            width = len(rows[0]) if rows else 0
            shape = (len(rows), width)
        if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
            raise InputError(f"matrix rows do not match shape {shape[0]}x{shape[1]}")
        convert = field.parse_element if strict else field.element
        arr = field.zeros(*shape)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                arr[i, j] = convert(value)
        return cls.wrap(field, arr)

    @classmethod
    def column_vector(cls, field: Field, values: Sequence[Any]) -> "Matrix":
        return cls.from_rows(field, [[v] for v in values], shape=(len(values), 1))

    @classmethod
    def random(cls, field: Field, rows: int, cols: int, rng: np.random.Generator) -> "Matrix":
        return cls.wrap(field, field.random_array(rng, rows, cols))

    # -- shape ----------------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    def entry(self, i: int, j: int) -> Scalar:
        return self.data[i, j]

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"matrices over {self.field} and {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix.wrap(self.field, self.data @ other.data)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise InputError(f"cannot add {self.shape} and {other.shape}")
        return Matrix.wrap(self.field, self.data + other.data)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise InputError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix.wrap(self.field, self.data - other.data)

    def __neg__(self) -> "Matrix":
        return Matrix.wrap(self.field, -self.data)

    def scale(self, c: Any) -> "Matrix":
        return Matrix.wrap(self.field, self.data * self.field.element(c))

    @property
    def T(self) -> "Matrix":
        return Matrix.wrap(self.field, self.data.T.copy())

    def power(self, k: int) -> "Matrix":
        result = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    # -- slicing --------------------------------------------------------------

    def columns(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix.wrap(self.field, self.data[:, idx].reshape(self.rows, len(idx)))

    def column(self, j: int) -> "Matrix":
        return self.columns([j])

    def select_rows(self, idx: Iterable[int]) -> "Matrix":
        idx = list(idx)
        return Matrix.wrap(self.field, self.data[idx, :].reshape(len(idx), self.cols))

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix.wrap(self.field, self.data[r0:r1, c0:c1].copy())

    def flatten(self) -> "Matrix":
        """Row-major vectorisation as a column vector."""
        return Matrix.wrap(self.field, self.data.reshape(-1, 1).copy())

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.field, self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.array_equal(self.data, other.data)))

    __hash__ = None

    def key(self) -> Tuple:
        """Hashable canonical content, used for deterministic ordering."""
        return (self.shape, tuple(self.field.encode(e) if self.field.is_finite else (Fraction(e).numerator, Fraction(e).denominator)
                                  for e in self.data.ravel()))

    def to_rows(self) -> List[List[Union[int, str]]]:
        return [[self.field.encode(e) for e in row] for row in self.data]

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.rows}x{self.cols}, {self.to_rows()})"


# -- constructors ---------------------------------------------------------------

def hstack(field: Field, mats: Sequence[Matrix], rows: Optional[int] = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, rows or 0, 0)
    return Matrix.wrap(field, np.concatenate([m.data for m in mats], axis=1))


def vstack(field: Field, mats: Sequence[Matrix], cols: Optional[int] = None) -> Matrix:
    if not mats:
        return Matrix.zeros(field, 0, cols or 0)
    return Matrix.wrap(field, np.concatenate([m.data for m in mats], axis=0))


def block_diag(field: Field, mats: Sequence[Matrix]) -> Matrix:
    total_r = sum(m.rows for m in mats)
    total_c = sum(m.cols for m in mats)
    arr = field.zeros(total_r, total_c)
    r = c = 0
    for m in mats:
        arr[r:r + m.rows, c:c + m.cols] = m.data
        r += m.rows
        c += m.cols
    return Matrix.wrap(field, arr)


def kron(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    if 0 in a.shape or 0 in b.shape:
        return Matrix.zeros(a.field, a.rows * b.rows, a.cols * b.cols)
    return Matrix.wrap(a.field, np.kron(a.data, b.data))


# -- kernels ----------------------------------------------------------------------

def _rref_array(field: Field, arr: np.ndarray, stop_col: Optional[int] = None) -> Tuple[np.ndarray, List[int]]:
    a = arr.copy()
    nrows, ncols = a.shape
    limit = ncols if stop_col is None else stop_col
    pivots: List[int] = []
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = field.normalize(a[r] * field.inv(a[r, c]))
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = field.normalize(a[hit] - np.outer(col[hit], a[r]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    arr, pivots = _rref_array(m.field, m.data)
    return Matrix.wrap(m.field, arr), tuple(pivots)


def rank(m: Matrix) -> int:
    if 0 in m.shape:
        return 0
    return len(_rref_array(m.field, m.data)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns form the reduced basis of the right null space of ``m``."""
    field = m.field
    n = m.cols
    if m.rows == 0:
        return Matrix.identity(field, n)
    arr, pivots = _rref_array(field, m.data)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = field.zeros(n, len(free))
    if free:
        basis[free, list(range(len(free)))] = field.one
        if pivots:
            basis[pivots, :] = field.normalize(-arr[:len(pivots)][:, free])
    return Matrix.wrap(field, basis)


def solve_linear(m: Matrix, b: Matrix) -> Optional[Matrix]:
    """One solution X of m·X = b (free variables zero), or None when inconsistent."""
    m._check(b)
    if m.rows != b.rows:
        raise InputError(f"solve_linear: {m.rows} equations but right-hand side has {b.rows} rows")
    field = m.field
    if m.rows == 0:
        return Matrix.zeros(field, m.cols, b.cols)
    aug = np.concatenate([m.data, b.data], axis=1)
    arr, pivots = _rref_array(field, aug)
    if any(p >= m.cols for p in pivots):
        return None
    x = field.zeros(m.cols, b.cols)
    if pivots:
        x[list(pivots), :] = arr[:len(pivots), m.cols:]
    return Matrix.wrap(field, x)


def column_space(m: Matrix) -> Matrix:
    """The pivot columns of ``m``: a basis of its column space made of original columns."""
    if 0 in m.shape:
        return Matrix.zeros(m.field, m.rows, 0)
    _, pivots = _rref_array(m.field, m.data)
    return m.columns(pivots)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise InputError(f"cannot invert a {m.rows}x{m.cols} matrix")
    n = m.rows
    field = m.field
    if n == 0:
        return m
    aug = np.concatenate([m.data, field.eye(n)], axis=1)
    arr, pivots = _rref_array(field, aug, stop_col=n)
    if pivots != list(range(n)):
        raise InputError("matrix is singular")
    return Matrix.wrap(field, arr[:, n:].copy())


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def complement_indices(sub: Matrix) -> List[int]:
    """Standard basis vectors that extend the column span of ``sub`` to the whole space."""
    n = sub.rows
    field = sub.field
    aug = np.concatenate([sub.data, field.eye(n)], axis=1)
    _, pivots = _rref_array(field, aug)
    return [p - sub.cols for p in pivots if p >= sub.cols]


class CoordinateSystem:
    """
    Coordinates with respect to a basis given by independent columns.

    A set of pivot rows makes the basis square-invertible; coordinates of a vector
    in the span are read from those rows only.
    """

    def __init__(self, basis: Matrix, check: bool = True):
        self.basis = basis
        self.field = basis.field
        if basis.cols == 0:
            self.rows_used: Tuple[int, ...] = ()
            self.inv = Matrix.zeros(self.field, 0, 0)
            return
        _, pivots = rref(basis.T)
        if check and len(pivots) != basis.cols:
            raise InputError("basis columns are linearly dependent")
        self.rows_used = pivots
        self.inv = inverse(basis.select_rows(pivots))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def coords(self, vectors: Matrix, verify: bool = False) -> Matrix:
        if self.dim == 0:
            out = Matrix.zeros(self.field, 0, vectors.cols)
        else:
            out = self.inv @ vectors.select_rows(self.rows_used)
        if verify and not (self.basis @ out) == vectors:
            raise InputError("vector lies outside the span of the basis")
        return out

    def contains(self, vectors: Matrix) -> bool:
        if self.dim == 0:
            return vectors.is_zero()
        return (self.basis @ (self.inv @ vectors.select_rows(self.rows_used))) == vectors
