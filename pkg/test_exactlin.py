"""
Exact linear algebra over F_p and Q.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.config import MAX_PRIME
from src.errors import InputError
from src.exactlin import (CoordinateSystem, Field, Matrix, block_diag, column_space, complement_indices, hstack,
                          inverse, is_invertible, kernel_basis, kron, rank, rref, solve_linear, vstack)


def small_matrices(p, max_side=5):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)))


class TestField:
    def test_parse(self):
        assert Field.parse("fp:5").p == 5
        assert not Field.parse("q").is_finite

    @pytest.mark.parametrize("name", ["fp:4", "fp:1", "fp:x", "z", ""])
    def test_parse_rejects(self, name):
        with pytest.raises(InputError):
            Field.parse(name)

    def test_prime_bound(self):
        with pytest.raises(InputError):
            Field.prime(1048583)
        assert MAX_PRIME == 2 ** 20

    def test_strict_elements(self, f3, qq):
        assert f3.parse_element(2) == 2
        with pytest.raises(InputError):
            f3.parse_element(3)
        with pytest.raises(InputError):
            f3.parse_element(True)
        assert qq.parse_element("-3/4") == Fraction(-3, 4)
        with pytest.raises(InputError):
            qq.parse_element("2/4")

    def test_fraction_into_prime_field(self, f3):
        assert f3.element(Fraction(1, 2)) == 2


class TestKernels:
    def test_rank_and_kernel_f2(self, f2):
        m = Matrix.from_rows(f2, [[1, 1, 0], [0, 1, 1], [1, 0, 1]])
        assert rank(m) == 2
        k = kernel_basis(m)
        assert k.cols == 1
        assert (m @ k).is_zero()

    def test_rank_over_q(self, qq):
        m = Matrix.from_rows(qq, [[1, 2], [2, 4]])
        assert rank(m) == 1
        k = kernel_basis(m)
        assert k.to_rows() == [["-2"], ["1"]]

    def test_rref_pivots(self, f3):
        reduced, pivots = rref(Matrix.from_rows(f3, [[0, 2, 1], [0, 1, 2]]))
        assert pivots == (1,)
        assert reduced.to_rows()[0] == [0, 1, 2]

    def test_solve_and_inconsistent(self, f3):
        m = Matrix.from_rows(f3, [[1, 1], [1, 2]])
        b = Matrix.column_vector(f3, [2, 0])
        x = solve_linear(m, b)
        assert (m @ x) == b
        singular = Matrix.from_rows(f3, [[1, 1], [1, 1]])
        assert solve_linear(singular, Matrix.column_vector(f3, [0, 1])) is None

    def test_inverse_over_q(self, qq):
        m = Matrix.from_rows(qq, [[2, 1], [1, 1]])
        assert (m @ inverse(m)).is_identity()
        with pytest.raises(InputError):
            inverse(Matrix.from_rows(qq, [[1, 1], [1, 1]]))

    def test_empty_shapes(self, f2):
        z = Matrix.zeros(f2, 3, 0)
        assert rank(z) == 0
        assert kernel_basis(Matrix.zeros(f2, 0, 2)).is_identity()
        assert column_space(z).cols == 0

    def test_complement(self, f2):
        sub = Matrix.column_vector(f2, [1, 1, 0])
        keep = complement_indices(sub)
        assert len(keep) == 2
        full = hstack(f2, [sub, Matrix.identity(f2, 3).columns(keep)])
        assert is_invertible(full)

    def test_coordinates(self, f3):
        basis = Matrix.from_rows(f3, [[1, 0], [1, 1], [0, 2]])
        cs = CoordinateSystem(basis)
        v = basis @ Matrix.column_vector(f3, [2, 1])
        assert cs.coords(v, verify=True).to_rows() == [[2], [1]]
        assert not cs.contains(Matrix.column_vector(f3, [1, 0, 0]))

    def test_block_constructors(self, f2):
        a = Matrix.identity(f2, 2)
        b = Matrix.from_rows(f2, [[1]])
        assert block_diag(f2, [a, b]).is_identity()
        assert vstack(f2, [a, a]).shape == (4, 2)
        assert kron(a, Matrix.from_rows(f2, [[1, 1]])).shape == (2, 4)


@given(small_matrices(3))
def test_rank_nullity_f3(rows):
    f = Field.prime(3)
    m = Matrix.from_rows(f, rows)
    k = kernel_basis(m)
    assert rank(m) + k.cols == m.cols
    assert (m @ k).is_zero()


@given(small_matrices(5, 4), st.integers(0, 2 ** 31 - 1))
def test_solve_recovers_a_solution(rows, seed):
    f = Field.prime(5)
    m = Matrix.from_rows(f, rows)
    x = Matrix.random(f, m.cols, 1, np.random.default_rng(seed))
    b = m @ x
    found = solve_linear(m, b)
    assert found is not None and (m @ found) == b


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
def test_rational_kernel_is_exact(rows):
    f = Field.rational()
    m = Matrix.from_rows(f, rows)
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert rank(m) + k.cols == 3
