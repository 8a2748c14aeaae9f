"""
Perpendicular categories, add(T)-resolutions, cotilting transfer and the
checks comparing monic representations with perpendicular categories.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import QUIVERS, algebra_grid, base_algebra
from src.algebra import direct_sum, ground_algebra, injective_cogenerator, regular_module, truncated_polynomial
from src.errors import PreconditionError
from src.exactlin import Field
from src.fintype import enumerate_indecomposables
from src.monrep import lambda_algebra, m_functor, random_representation, simple_lift
from src.panel import PanelRunner, merge_verdicts
from src.quiver import Quiver, kq_standard_module
from src.schemas import Status, Verdict
from src.tiltperp import (add_membership, adjunction_check, branch_approximation_check, cotilt_transfer_check,
                          end_map_check, ext_branch_check, gp_corollary_check, gp_membership, hat_membership,
                          is_cotilting, is_gorenstein, mon_perp_refinement_check, multiplicity_invariance_check,
                          perp_membership, proposition_mon_perp_check, reciprocity_check, right_add_approximation,
                          simple_reduction_check)


@pytest.fixture(scope="module")
def dual_panel(a2, dual2):
    """Indecomposables of A_2 over k[x]/x^2 with branches of dimension at most 2."""
    return enumerate_indecomposables(a2, dual2, 2, runner=PanelRunner(workers=1)).representations


class TestPerp:
    def test_self_extension_of_top(self, dual2):
        found = perp_membership(dual2.top, dual2.top, cutoff=2)
        assert found.status == Status.FAILS
        assert found.witness == {"degree": 1, "dim": 1}

    def test_projective_is_unknown_against_infinite_injdim(self, dual2):
        found = perp_membership(regular_module(dual2), dual2.top, cutoff=2)
        assert found.status == Status.UNKNOWN
        assert found.cutoffs == {"cutoff": 2}

    def test_injective_target(self, dual2):
        found = perp_membership(dual2.top, regular_module(dual2))
        assert found.ok and found.cutoffs == {"injdim": 0}

    def test_hereditary(self, a2, f2):
        p1 = kq_standard_module(a2, f2, "projective", 1).module
        s2 = kq_standard_module(a2, f2, "simple", 2).module
        assert perp_membership(s2, p1).status == Status.FAILS
        assert perp_membership(p1, p1).ok


class TestAdd:
    def test_membership(self, dual2):
        a = regular_module(dual2)
        assert add_membership(direct_sum([a, a]), a).ok
        assert add_membership(dual2.top, direct_sum([a, dual2.top])).ok
        assert add_membership(a, dual2.top).status == Status.FAILS

    def test_approximation_is_surjective(self, dual2):
        a = regular_module(dual2)
        approx = right_add_approximation(a, dual2.top)
        approx.validate()
        assert approx.target.dim == 1
        assert approx.source.dim >= 2


class TestHat:
    def test_injective_cogenerator_of_self_injective(self, dual2):
        verdict, res = hat_membership(injective_cogenerator(dual2), regular_module(dual2))
        assert verdict.ok
        assert res.length == 0 and res.verify()

    def test_stall_is_unknown(self, dual2):
        verdict, res = hat_membership(dual2.top, regular_module(dual2), cutoff=2)
        assert verdict.status == Status.UNKNOWN
        assert res is None
        assert verdict.witness["kernel_dim"] == 1

    def test_refuses_non_self_orthogonal(self, dual2):
        with pytest.raises(PreconditionError, match="self-orthogonal"):
            hat_membership(regular_module(dual2), dual2.top, cutoff=1)


class TestCotilting:
    def test_self_injective_regular(self, dual2):
        found = is_cotilting(regular_module(dual2))
        assert found.verdict.ok and found.r == 0

    def test_hereditary_regular(self, kq_a2):
        found = is_cotilting(regular_module(kq_a2))
        assert found.verdict.ok and found.r == 1
        assert found.coresolution.verify()

    def test_hereditary_dual(self, kq_a2):
        found = is_cotilting(injective_cogenerator(kq_a2))
        assert found.verdict.ok and found.r == 0

    def test_top_of_self_injective(self, dual2):
        found = is_cotilting(dual2.top, cutoff=2)
        assert found.verdict.status == Status.UNKNOWN
        assert found.r is None


class TestTransfer:
    def test_self_injective(self, a2, dual2):
        found = cotilt_transfer_check(a2, regular_module(dual2))
        assert found.ok
        assert found.witness["r"] == 0 and found.witness["transferred_r"] == 1
        assert found.witness["end_dim"] == 6

    def test_needs_cotilting_module(self, a2, dual2):
        with pytest.raises(PreconditionError):
            cotilt_transfer_check(a2, dual2.top, cutoff=2)

    def test_ground_field_gives_path_algebra(self, a3, k_f2):
        found = cotilt_transfer_check(a3, regular_module(k_f2))
        assert found.ok, found.witness
        assert found.witness["transferred_r"] == 1 and found.witness["injdim"] == 1
        assert found.witness["end_dim"] == 6

    @pytest.mark.slow
    def test_hereditary_base(self, a2, kq_a2):
        found = cotilt_transfer_check(a2, regular_module(kq_a2))
        assert found.ok
        assert found.witness["transferred_r"] == 2
        assert found.witness["end_dim"] == 9


class TestEndMap:
    def test_ground_field(self, a3, k_f2):
        found = end_map_check(a3, regular_module(k_f2))
        assert found.ok
        assert found.witness["end_dim"] == 6 and found.witness["paths"] == 6

    def test_truncated_polynomial(self, a2, dual2):
        found = end_map_check(a2, regular_module(dual2))
        assert found.ok
        assert found.witness["end_dim"] == 6 and found.witness["end_t"] == 2


class TestPanels:
    def test_reciprocity(self, a2, dual2, dual_panel):
        assert dual_panel
        assert reciprocity_check(a2, regular_module(dual2), dual_panel).status == Status.HOLDS

    def test_simple_reduction(self, a2, dual2, dual_panel):
        assert simple_reduction_check(a2, regular_module(dual2), dual_panel).status == Status.HOLDS

    def test_mon_perp(self, a2, dual_panel):
        assert proposition_mon_perp_check(a2, dual_panel).status == Status.HOLDS

    def test_refinement(self, a2, dual2, dual_panel):
        assert mon_perp_refinement_check(a2, regular_module(dual2), dual_panel).status == Status.HOLDS

    def test_gp_corollary(self, a2, dual_panel):
        assert gp_corollary_check(a2, dual_panel).status == Status.HOLDS

    def test_threaded_runner_matches_serial(self, a2, dual_panel):
        serial = proposition_mon_perp_check(a2, dual_panel, runner=PanelRunner(workers=1))
        threaded = proposition_mon_perp_check(a2, dual_panel, runner=PanelRunner(workers=4))
        assert serial == threaded

    def test_empty_panel(self, a2):
        assert proposition_mon_perp_check(a2, []).ok

    @pytest.mark.slow
    @pytest.mark.parametrize("which", ["regular", "dual"])
    def test_reciprocity_hereditary_base(self, a2, kq_a2, which):
        t = regular_module(kq_a2) if which == "regular" else injective_cogenerator(kq_a2)
        panel = enumerate_indecomposables(a2, kq_a2, 2).representations
        assert reciprocity_check(a2, t, panel).status == Status.HOLDS
        assert simple_reduction_check(a2, t, panel).status == Status.HOLDS


class TestMergeVerdicts:
    def test_failure_wins(self):
        merged = merge_verdicts("panel", [Verdict.holds("x"), Verdict.unknown("x", {"cutoff": 2}),
                                          Verdict.fails("x", {"degree": 1})], ["a", "b", "c"])
        assert merged.status == Status.FAILS
        assert merged.witness["item"] == "c" and merged.witness["index"] == 2

    def test_unknown_before_holds(self):
        merged = merge_verdicts("panel", [Verdict.holds("x"), Verdict.unknown("x", {"cutoff": 2})])
        assert merged.status == Status.UNKNOWN
        assert merged.cutoffs == {"cutoff": 2}


class TestGorenstein:
    def test_self_injective(self, dual2):
        found = is_gorenstein(dual2)
        assert found.ok and found.witness["injdim_left"] == 0
        assert gp_membership(dual2.top).ok

    def test_hereditary_gp_is_projective(self, a2, f2):
        s2 = kq_standard_module(a2, f2, "simple", 2).module
        p2 = kq_standard_module(a2, f2, "projective", 2).module
        assert is_gorenstein(s2.algebra).witness["injdim_left"] == 1
        assert gp_membership(s2).status == Status.FAILS
        assert gp_membership(p2).ok

    def test_ground_field(self, f2):
        k = ground_algebra(f2)
        assert is_gorenstein(k).ok


class TestLiftedFunctors:
    def test_multiplicity_invariance(self, a2, dual2):
        found = multiplicity_invariance_check(a2, regular_module(dual2))
        assert found.ok and found.witness["summands"] == 2

    def test_ext_branch(self, a2, dual2):
        x = simple_lift(a2, 2, regular_module(dual2))
        assert ext_branch_check(a2, dual2.top, x).ok
        y = m_functor(a2, 2, dual2.top)
        found = ext_branch_check(a2, regular_module(dual2), y)
        assert found.ok
        assert found.witness["dims"]["1"] == [1, 0, 0]

    def test_branch_approximation(self, a2, k_f2):
        m = lambda_algebra(a2, k_f2).regular
        panel = [k_f2.regular, k_f2.free_module(2)]
        assert branch_approximation_check(a2, m, 1, panel).ok
        with pytest.raises(PreconditionError, match="not a sink"):
            branch_approximation_check(a2, m, 2, panel)


@settings(max_examples=100)
@given(st.lists(st.integers(0, 2), min_size=2, max_size=2), st.sampled_from(["top", "regular"]),
       st.sampled_from([1, 2]), st.integers(0, 10 ** 6))
def test_adjunction_on_random_triples(kinds, which, vertex, seed):
    field = Field.prime(2)
    a = truncated_polynomial(field, 2)
    pool = {0: a.free_module(0), 1: a.top, 2: a.regular}
    x = random_representation(Quiver.linear(2), [pool[k] for k in kinds], np.random.default_rng(seed))
    t = a.top if which == "top" else a.regular
    assert adjunction_check(x, t, vertex).ok


@pytest.mark.parametrize("quiver, base", algebra_grid(("hereditary", "self_injective", "truncated")))
def test_adjunction_across_algebras(quiver, base):
    q, a = QUIVERS[quiver], base_algebra(base, Field.prime(2))
    pool = [a.regular, a.top, injective_cogenerator(a)]
    x = random_representation(q, [pool[k % 3] for k in q.vertices], np.random.default_rng(7))
    for t in pool:
        for i in q.vertices:
            found = adjunction_check(x, t, i)
            assert found.ok, found.witness
