"""
Hom, Ext, resolutions, decomposition and isomorphism.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.algebra import (Module, ModuleMap, direct_sum, ground_algebra, path_algebra, regular_module,
                         truncated_polynomial, zero_module)
from src.errors import AlgebraMismatchError, UnsupportedFieldError
from src.exactlin import Field, Matrix, inverse, is_invertible
from src.homalg import (are_isomorphic, decompose, endo_algebra, ext_dim, ext_dims, global_dimension, hom_basis,
                        hom_dim, homological_dimension, is_indecomposable, is_injective, is_projective,
                        kernel_cokernel, pad_resolution, projective_resolution, syzygy)
from src.monrep import random_representation, tensor_rep
from src.quiver import Quiver, kq_standard_module


def std(q, field, kind, i):
    return kq_standard_module(q, field, kind, i).module


class TestHom:
    def test_hom_from_projectives(self, a2, f2):
        p1, p2 = std(a2, f2, "projective", 1), std(a2, f2, "projective", 2)
        assert hom_dim(p1, p2) == 1
        assert hom_dim(p2, p1) == 0
        assert hom_dim(p2, p2) == 1

    def test_basis_elements_are_module_maps(self, a3, f3):
        x = kq_standard_module(a3, f3, "injective", 1).module
        y = kq_standard_module(a3, f3, "projective", 3).module
        basis = hom_basis(x, y)
        for f in basis.maps():
            f.validate()
        assert basis.coords(basis.matrices[0]).to_rows()[0] == [1]

    def test_blockwise_over_parts(self, dual2):
        a = regular_module(dual2)
        assert hom_dim(direct_sum([a, a]), a) == 2 * hom_dim(a, a) == 4

    def test_algebra_mismatch(self, dual2, kq_a2):
        with pytest.raises(AlgebraMismatchError):
            hom_basis(regular_module(dual2), regular_module(kq_a2))

    def test_kernel_cokernel(self, a2, f2):
        p1, p2 = std(a2, f2, "projective", 1), std(a2, f2, "projective", 2)
        (incl,) = hom_basis(p1, p2).maps()
        split = kernel_cokernel(incl)
        assert split.kernel.dim == 0
        assert split.image.dim == 1
        assert split.cokernel.dim == 1


class TestExt:
    def test_hereditary_ext(self, a2, f2):
        s1, s2 = std(a2, f2, "simple", 1), std(a2, f2, "simple", 2)
        assert ext_dims(s2, s1, 2) == [0, 1, 0]
        assert ext_dims(s1, s2, 2) == [0, 0, 0]

    def test_same_over_rationals(self, a2, qq):
        s1, s2 = std(a2, qq, "simple", 1), std(a2, qq, "simple", 2)
        assert ext_dims(s2, s1, 2) == [0, 1, 0]

    def test_self_injective_periodicity(self, dual2):
        k = dual2.top
        assert ext_dims(k, k, 3) == [1, 1, 1, 1]
        assert ext_dim(1, k, k) == 1
        assert ext_dim(1, regular_module(dual2), k) == 0

    def test_resolution_independence(self, a3, f3):
        x = std(a3, f3, "simple", 3)
        y = std(a3, f3, "simple", 2)
        res = projective_resolution(x, 3)
        assert res.verify()
        minimal = ext_dims(x, y, 2, res)
        for position in range(2):
            padded = pad_resolution(res, position)
            assert padded.verify()
            assert ext_dims(x, y, 2, padded) == minimal
        assert minimal == [0, 1, 0]

    def test_syzygy_of_simple(self, a2, f2):
        s2 = std(a2, f2, "simple", 2)
        assert syzygy(s2).dim == 2


class TestDimensions:
    def test_projective_dimension(self, a2, f2):
        assert homological_dimension(std(a2, f2, "simple", 2)).value == 1
        assert homological_dimension(std(a2, f2, "simple", 1)).value == 0
        assert homological_dimension(std(a2, f2, "projective", 1), "injective").value == 1
        assert is_projective(std(a2, f2, "projective", 2))
        assert is_injective(std(a2, f2, "projective", 2))

    def test_global_dimension(self, kq_a2, dual2):
        assert global_dimension(kq_a2).value == 1
        found = global_dimension(dual2, 2)
        assert not found.finite and found.at_least == 3
        assert str(found) == ">=3"

    def test_zero_module(self, dual2):
        assert homological_dimension(zero_module(dual2)).value == 0

    def test_value_equal_to_cutoff(self, a2, a3, f2):
        p1 = std(a2, f2, "projective", 1)
        assert homological_dimension(p1, "projective", 0).value == 0
        assert homological_dimension(std(a2, f2, "simple", 2), "projective", 1).value == 1
        assert homological_dimension(std(a2, f2, "simple", 2), "projective", 0).at_least == 1
        assert global_dimension(path_algebra(a3, f2), 1).value == 1

    def test_auslander_algebra_of_dual_numbers(self, dual2):
        gamma = endo_algebra(direct_sum([regular_module(dual2), dual2.top])).algebra.opposite
        assert global_dimension(gamma, 2).value == 2
        assert global_dimension(gamma, 1).at_least == 2


class TestDecomposition:
    def test_path_algebra_regular(self, kq_a2):
        found = decompose(regular_module(kq_a2))
        assert found.verify()
        assert sorted(m.dim for m in found.basic) == [1, 2]

    def test_multiplicities(self, dual2):
        a = regular_module(dual2)
        found = decompose(direct_sum([a, dual2.top, a]))
        assert found.verify()
        assert sorted((m.dim, c) for m, c in found.summands) == [(1, 1), (2, 2)]

    def test_indecomposable(self, dual2, kq_a2):
        assert is_indecomposable(regular_module(dual2))
        assert not is_indecomposable(regular_module(kq_a2))
        assert not is_indecomposable(zero_module(dual2))

    def test_rationals_refused(self, qq):
        with pytest.raises(UnsupportedFieldError):
            decompose(regular_module(ground_algebra(qq)))

    def test_endomorphism_algebra(self, dual2):
        end = endo_algebra(regular_module(dual2))
        assert end.algebra.dim == 2
        assert end.algebra.is_commutative


class TestIsomorphism:
    def test_conjugate_module(self, dual3, f2):
        a = regular_module(dual3)
        g = Matrix.from_rows(f2, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        g_inv = inverse(g)
        b = Module(dual3, tuple(g @ m @ g_inv for m in a.action))
        found = are_isomorphic(a, b)
        assert found.status == "yes"
        f = found.witness
        assert is_invertible(f)
        ModuleMap(a, b, f).validate()

    def test_different_simples(self, a2, f2):
        found = are_isomorphic(std(a2, f2, "simple", 1), std(a2, f2, "simple", 2))
        assert found.status == "no"


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 10 ** 6))
def test_random_a2_representations_are_hereditary(d1, d2, seed):
    field = Field.prime(3)
    k = ground_algebra(field)
    q = Quiver.linear(2)
    branches = [k.free_module(d1), k.free_module(d2)]
    x = random_representation(q, branches, np.random.default_rng(seed))
    if x.total_dim == 0:
        return
    assert homological_dimension(x.module).within(1)
    assert ext_dims(x.module, x.module, 2)[2] == 0


def linear_dimension(kind, i, n, side):
    """pd (or id) of P(i), I(i), S(i) over A_n oriented n -> ... -> 1."""
    if side == "projective":
        return 0 if kind == "projective" or i == 1 else 1
    return 0 if kind == "injective" or i == n else 1


@settings(max_examples=30)
@given(st.data(), st.sampled_from(["projective", "injective", "simple"]), st.sampled_from(["projective", "injective"]),
       st.booleans(), st.integers(0, 2))
def test_standard_module_dimensions(data, kind, side, truncated, extra):
    field = Field.prime(2)
    n = data.draw(st.integers(2, 3 if truncated else 4))
    i = data.draw(st.integers(1, n))
    rep = kq_standard_module(Quiver.linear(n), field, kind, i)
    x = tensor_rep(rep, regular_module(truncated_polynomial(field, 2))).module if truncated else rep.module
    value = linear_dimension(kind, i, n, side)
    found = homological_dimension(x, side, value + extra)
    assert found.finite and found.value == value
    if value:
        assert homological_dimension(x, side, value - 1).at_least == value
    holds = is_projective(x) if side == "projective" else is_injective(x)
    assert holds == (value == 0)
