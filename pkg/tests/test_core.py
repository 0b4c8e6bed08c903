"""Truncation models, subset worlds, and the FA axiom checks."""
import math

import pytest

from finarith.core import (
    SubsetWorld, Truncation, check_fa_axioms, largest_square_base,
    make_subset_world, make_truncation, partial_plus, partial_times, successor,
)
from finarith.corpus import load_packaged_formulas
from finarith.errors import DomainError


@pytest.fixture(scope="module")
def induction_corpus():
    return load_packaged_formulas("induction20.fml")


class TestTruncation:
    def test_basic_shape(self):
        m = make_truncation(10)
        assert m.size() == 11
        assert list(m) == list(range(11))
        assert m.largest == 10
        assert 10 in m and 11 not in m and -1 not in m

    def test_partial_operations(self):
        m = make_truncation(10)
        assert partial_plus(m, 4, 5) == 9
        assert partial_plus(m, 6, 7) is None
        assert partial_times(m, 2, 5) == 10
        assert partial_times(m, 4, 4) is None

    def test_truncation_at_one(self):
        m = make_truncation(1)
        assert list(m) == [0, 1]
        assert successor(m, 0) == 1
        assert successor(m, 1) is None

    def test_hundred(self):
        m = make_truncation(100)
        assert m.largest == 100
        assert partial_times(m, 10, 10) == 100
        assert partial_times(m, 10, 11) is None

    def test_zero_height_rejected(self):
        with pytest.raises(ValueError):
            make_truncation(0)

    def test_out_of_domain_is_an_error_not_undefined(self):
        m = make_truncation(10)
        with pytest.raises(DomainError):
            m.plus(5, 11)
        with pytest.raises(DomainError):
            m.times(-1, 2)

    def test_bool_is_not_an_element(self):
        assert True not in make_truncation(10)


class TestSubsetWorld:
    def test_sparse_world_has_empty_plus_graph(self):
        w = make_subset_world({3, 5})
        assert not w.plus_graph
        assert w.less(3, 5)
        assert w.plus(3, 5) is None

    def test_even_world_graph(self):
        w = make_subset_world({0, 2, 4})
        assert (2, 2, 4) in w.plus_graph
        assert (0, 4, 4) in w.plus_graph
        assert (2, 4, 6) not in w.plus_graph
        assert w.times(2, 2) == 4

    def test_empty_world(self):
        w = make_subset_world(set())
        assert w.size() == 0
        assert w.zero is None and w.one is None

    def test_constants_partial(self):
        w = make_subset_world({1, 2, 3})
        assert w.zero is None
        assert w.one == 1
        assert successor(w, 2) == 3

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            make_subset_world({-1, 2})


class TestLargestSquareBase:
    @pytest.mark.parametrize("n,b", [(100, 10), (99, 9), (12, 3), (1, 1), (10**6, 1000)])
    def test_matches_integer_square_root(self, n, b):
        assert largest_square_base(make_truncation(n)) == b

    def test_oracle_property(self):
        for n in range(1, 300):
            assert largest_square_base(make_truncation(n)) == math.isqrt(n)


class TestAxiomChecks:
    @pytest.mark.parametrize("n", [1, 2, 5, 12, 100])
    def test_truncations_pass(self, n, induction_corpus):
        report = check_fa_axioms(make_truncation(n), induction_corpus)
        assert report.passed, report.failures()
        assert all(g.mode == "exhaustive" for g in report.groups.values())

    def test_large_model_sampled(self, induction_corpus):
        report = check_fa_axioms(make_truncation(10**6), induction_corpus)
        assert report.passed, report.failures()
        assert report.groups["order"].mode == "sampled"

    def test_gap_world_fails_successor(self):
        # {0, 2} has no 1, so the successor of 0 is undefined below the top.
        report = check_fa_axioms(make_subset_world({0, 2}))
        assert not report.passed
        assert not report.groups["successor"].passed

    def test_non_downward_closed_world_fails(self):
        report = check_fa_axioms(make_subset_world({0, 1, 2, 5}))
        assert not report.passed

    def test_reports_carry_failures(self):
        report = check_fa_axioms(make_subset_world({2, 3}))
        assert report.failures()
