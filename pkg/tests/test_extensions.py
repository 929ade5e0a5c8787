import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3acm import (ext1_dim, family_plan, hilbert_poly, hom_vanishing, plan_from_blocks,
                   reduced_hilbert_equal, semistable_certificate)
from k3acm.extensions import HilbertPoly, bundle_hilbert_poly
from helpers import E, H, X

NAMES = [f"D{i}" for i in range(1, 5)]


@pytest.fixture(scope="module")
def blocks(dp9):
    return [dp9.cls(n) for n in NAMES]


class TestHom:
    def test_blocks(self, dp9, blocks):
        assert hom_vanishing(dp9, blocks[0], blocks[1]).is_yes

    def test_identity(self, dp9, blocks):
        assert hom_vanishing(dp9, blocks[0], blocks[0]).is_no

    def test_degree_zero_difference(self, dp9):
        assert hom_vanishing(dp9, E[1], X).is_yes
        assert hom_vanishing(dp9, X, E[1]).is_yes


class TestExt:
    def test_pair(self, dp9, blocks):
        assert ext1_dim(dp9, blocks[0], blocks[1]) == 2

    def test_against_rank_two(self, dp9, blocks):
        assert ext1_dim(dp9, blocks[2], blocks[0]) + ext1_dim(dp9, blocks[2], blocks[1]) == 4

    @pytest.mark.parametrize("m", range(1, 11))
    def test_against_g(self, dp9, blocks, m):
        d = ext1_dim(dp9, blocks[3], blocks[2]) + m * (
            ext1_dim(dp9, blocks[3], blocks[1]) + ext1_dim(dp9, blocks[3], blocks[0]))
        assert d == 4 * m + 2

    def test_all_pairs(self, dp9, blocks):
        for i in range(4):
            for j in range(4):
                if i != j:
                    assert hom_vanishing(dp9, blocks[i], blocks[j]).is_yes
                    assert ext1_dim(dp9, blocks[i], blocks[j]) == 2

    def test_hom_nonvanishing_rejected(self, dp9, blocks):
        with pytest.raises(ValueError):
            ext1_dim(dp9, blocks[0], blocks[0])

    def test_symmetric(self, dp9):
        from oracles import dp9_slice
        pool = dp9_slice(2, -2, -2)[:40]
        for a in pool[:20]:
            for b in pool[20:]:
                try:
                    x = ext1_dim(dp9, a, b)
                except ValueError:
                    continue
                assert x == ext1_dim(dp9, b, a)


class TestHilbert:
    def test_block(self, dp9, blocks):
        assert hilbert_poly(dp9, H, blocks[0]).as_tuple() == (9, 6, 1)

    def test_equal(self, dp9, blocks):
        assert reduced_hilbert_equal(dp9, H, blocks)

    def test_unequal(self, dp9, blocks):
        assert hilbert_poly(dp9, H, X).as_tuple() == (9, 6, 3)
        assert not reduced_hilbert_equal(dp9, H, [blocks[0], X])

    def test_additive(self, dp9, blocks):
        total = bundle_hilbert_poly(dp9, H, blocks[:3])
        assert total == hilbert_poly(dp9, H, blocks[0]) + hilbert_poly(dp9, H, blocks[1]) + \
            hilbert_poly(dp9, H, blocks[2])
        assert total.reduced(3) == HilbertPoly(9, 6, 1).reduced(1)


class TestPlans:
    def test_rank_two(self):
        p = family_plan(2)
        assert p.parameter_space_dim == 1

    def test_rank_seven(self):
        p = family_plan(7)
        assert p.parameter_space_dim == 9 and p.parameter_space() == "(P^3)^3"

    def test_rank_four(self):
        p = family_plan(4)
        assert p.parameter_space_dim == 5 and p.final_factors == (6,)

    def test_rank_one_rejected(self):
        with pytest.raises(ValueError):
            family_plan(1)

    @pytest.mark.parametrize("n", range(3, 51))
    def test_dimension_at_least_rank(self, n):
        assert family_plan(n).parameter_space_dim >= n

    def test_rank_two_below_rank(self):
        assert family_plan(2).parameter_space_dim == 1 < 2

    def test_certificate(self, dp9):
        for n in range(2, 12):
            assert semistable_certificate(dp9, H, family_plan(n, dp9))

    def test_mixed_blocks_fail(self, dp9, blocks):
        plan = plan_from_blocks(dp9, [("D1", blocks[0]), ("X", X)], 2)
        assert not semistable_certificate(dp9, H, plan)

    def test_single_line_bundle(self, dp9):
        plan = plan_from_blocks(dp9, [("X", X)], 1)
        assert semistable_certificate(dp9, H, plan)

    def test_custom_blocks_checked(self, dp9, blocks):
        with pytest.raises(ValueError):
            plan_from_blocks(dp9, [("D1", blocks[0]), ("D1bis", blocks[0])], 2)

    def test_json(self, dp9):
        j = family_plan(5, dp9).to_json(True)
        assert j["rank"] == 5 and j["semistable_certificate"] is True


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 50))
def test_dimension_formula(n):
    m = (n - 1) // 2
    expected = 1 if n == 2 else 3 * m if n % 2 else 4 * m + 1
    assert family_plan(n).parameter_space_dim == expected
