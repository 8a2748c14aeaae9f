"""
Representations over an algebra, the Λ-module equivalence and monic representations.
"""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import rep_over
from src.algebra import ModuleMap, regular_module, truncated_polynomial
from src.errors import ModuleError
from src.exactlin import Field, Matrix
from src.homalg import hom_basis, is_projective
from src.monrep import (Representation, RepMap, cok, delta, is_monic, kq_dual_rep, kq_regular_rep, lambda_algebra,
                        m_functor, module_map_to_rep_map, module_to_rep, mon_membership, rep_direct_sum,
                        rep_hom_basis, rep_map_to_module_map, random_representation, simple_lift, tensor_map,
                        tensor_rep, zero_rep)
from src.quiver import Quiver, kq_standard_module
from src.schemas import Status


class TestMonic:
    def test_simple_lift_is_not_monic(self, a2, dual2):
        x = simple_lift(a2, 2, regular_module(dual2))
        found = is_monic(x)
        assert not found.monic
        assert found.vertex == 1
        assert len(found.kernel_vector) == 2

    def test_projective_lift_is_monic(self, a2, dual2):
        a = regular_module(dual2)
        x = m_functor(a2, 2, a)
        assert is_monic(x).monic
        assert cok(x, 1)[0].dim == 0
        assert cok(x, 2)[0].dim == 2

    def test_membership_reports_clause(self, a2, dual2):
        a = regular_module(dual2)
        not_monic = mon_membership(simple_lift(a2, 2, a), is_projective)
        assert not_monic.status == Status.FAILS
        assert not_monic.witness["clause"] == "monic" and not_monic.witness["vertex"] == 1
        assert mon_membership(m_functor(a2, 2, a), is_projective).ok

    def test_membership_branch_clause(self, a2, dual2):
        # k -> A onto the socle: monic, but the branch k is not projective
        k = dual2.top
        a = regular_module(dual2)
        x = rep_over(a2, dual2, [a, k], [[[0], [1]]])
        assert is_monic(x).monic
        verdict = mon_membership(x, is_projective)
        assert verdict.witness["clause"] in ("branch", "cokernel")

    def test_delta_shape(self, a3, f2):
        x = kq_standard_module(a3, f2, "injective", 1)
        d = delta(x, 1)
        assert d.matrix.shape == (1, 1)
        assert delta(x, 3).matrix.shape == (1, 0)


class TestEquivalence:
    def test_quiver_is_part_of_the_algebra(self, a2, f2, k_f2):
        flipped = Quiver(2, ((1, 2),))
        lambda_algebra(a2, k_f2)
        lam = lambda_algebra(flipped, k_f2)
        assert lam.factors[0].quiver == flipped
        assert lam != lambda_algebra(a2, k_f2)
        back = module_to_rep(kq_standard_module(flipped, f2, "projective", 1).module)
        assert back.quiver == flipped
        assert back.dim_vector == (1, 1)

    def test_round_trip(self, a2, dual2):
        x = tensor_rep(kq_regular_rep(a2, dual2.field), regular_module(dual2))
        assert x.module.algebra == lambda_algebra(a2, dual2)
        assert module_to_rep(x.module) == x

    def test_maps_round_trip(self, a2, f2):
        x = kq_standard_module(a2, f2, "projective", 1)
        y = kq_standard_module(a2, f2, "projective", 2)
        for f in hom_basis(x.module, y.module).maps():
            g = module_map_to_rep_map(f, x, y).validate()
            assert rep_map_to_module_map(g).matrix == f.matrix

    def test_rep_hom_matches_module_hom(self, a3, f3):
        x = kq_standard_module(a3, f3, "injective", 1)
        y = kq_standard_module(a3, f3, "injective", 2)
        maps = rep_hom_basis(x, y)
        assert len(maps) == hom_basis(x.module, y.module).dim == 1
        maps[0].validate()

    def test_non_intertwining_arrow(self, a2, dual2):
        k = dual2.top
        a = regular_module(dual2)
        with pytest.raises(ModuleError) as info:
            rep_over(a2, dual2, [k, a], [[[0, 1]]])
        assert info.value.location == "/arrows/0"
        assert "2->1" in info.value.message


class TestTensor:
    def test_dimension_vectors(self, a2, dual2):
        a = regular_module(dual2)
        kq = kq_regular_rep(a2, dual2.field)
        assert kq.dim_vector == (2, 1)
        assert kq_dual_rep(a2, dual2.field).dim_vector == (1, 2)
        big = tensor_rep(kq, a)
        assert big.dim_vector == (4, 2)
        assert cok(big, 1)[0].dim == 2

    def test_tensor_map_of_identities(self, a2, dual2):
        a = regular_module(dual2)
        p = kq_standard_module(a2, dual2.field, "projective", 2)
        ident = RepMap(p, p, tuple(Matrix.identity(dual2.field, d) for d in p.dim_vector))
        g = tensor_map(ident, ModuleMap.identity(a)).validate()
        assert all(m.is_identity() for m in g.maps)

    def test_direct_sum_and_zero(self, a2, dual2):
        a = regular_module(dual2)
        x = rep_direct_sum([m_functor(a2, 1, a), m_functor(a2, 2, a)])
        assert x.dim_vector == (4, 2)
        assert zero_rep(a2, dual2).total_dim == 0
        assert is_monic(zero_rep(a2, dual2)).monic


@given(st.lists(st.sampled_from([0, 1, 2]), min_size=2, max_size=2), st.integers(0, 10 ** 6))
def test_random_representations_round_trip(kinds, seed):
    field = Field.prime(2)
    a = truncated_polynomial(field, 2)
    pool = {0: a.free_module(0), 1: a.top, 2: a.regular}
    q = Quiver.linear(2)
    x = random_representation(q, [pool[k] for k in kinds], np.random.default_rng(seed)).validate()
    back = module_to_rep(x.module)
    assert back == x
    assert isinstance(back, Representation)
