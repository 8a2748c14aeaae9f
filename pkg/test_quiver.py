"""
Quivers, paths and the standard kQ-modules.
"""

import pytest

from src.errors import QuiverError
from src.quiver import Path, Quiver, kq_standard_module, path_count_matrix, paths, paths_between, topological_order


class TestQuiver:
    def test_linear_orientation(self, a3):
        assert a3.arrows == ((2, 1), (3, 2))
        assert a3.is_sink(1) and a3.is_source(3)

    def test_cycle_rejected(self):
        with pytest.raises(QuiverError, match="oriented cycle"):
            Quiver(2, ((1, 2), (2, 1)))

    def test_loop_rejected(self):
        with pytest.raises(QuiverError) as info:
            Quiver(1, ((1, 1),))
        assert info.value.location == "/arrows/0"

    def test_vertex_out_of_range(self):
        with pytest.raises(QuiverError) as info:
            Quiver(2, ((1, 3),))
        assert info.value.location == "/arrows/0/to"

    def test_topological_order_puts_targets_first(self, a3):
        order = topological_order(a3)
        assert order == (1, 2, 3)
        position = {v: k for k, v in enumerate(order)}
        for s, e in a3.arrows:
            assert position[e] < position[s]


class TestPaths:
    def test_path_counts(self, a3):
        assert len(paths(a3)) == 6
        assert len(paths(Quiver.kronecker())) == 4
        assert path_count_matrix(a3).total == 6
        assert path_count_matrix(a3).count(3, 1) == 1
        assert path_count_matrix(a3).count(1, 3) == 0

    def test_paths_between(self, a3):
        (long,) = paths_between(a3, 3, 1)
        assert long == Path(3, 1, (1, 0))
        assert long.length == 2 and long.label() == "a1.0"

    def test_trivial_paths(self, a2):
        trivial = [p for p in paths(a2) if p.is_trivial]
        assert [p.source for p in trivial] == [1, 2]


class TestStandardModules:
    @pytest.mark.parametrize("kind, vertex, dims", [
        ("projective", 3, (1, 1, 1)),
        ("projective", 1, (1, 0, 0)),
        ("injective", 1, (1, 1, 1)),
        ("injective", 3, (0, 0, 1)),
        ("simple", 2, (0, 1, 0)),
    ])
    def test_dimension_vectors(self, a3, f2, kind, vertex, dims):
        assert kq_standard_module(a3, f2, kind, vertex).dim_vector == dims

    def test_kronecker_projective(self, f3):
        p2 = kq_standard_module(Quiver.kronecker(), f3, "projective", 2)
        assert p2.dim_vector == (2, 1)
        assert p2.validate() is p2

    def test_unknown_kind(self, a2, f2):
        with pytest.raises(QuiverError):
            kq_standard_module(a2, f2, "tilting", 1)
