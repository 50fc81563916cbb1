"""Approximation backends: exact shortcuts, bounded search, the cache."""

import math

import numpy as np
import pytest

from latsurg.angles import ExactAngle
from latsurg.approx import (
    ApproximationCache,
    Approximator,
    CacheBackend,
    MissingCacheEntry,
    NoApproximationFound,
    SearchBackend,
    approximate_rotation,
    build_cache,
    exact_rotation_letters,
    sequence_error,
)

from oracles import letters_unitary, rotation, operator_distance_up_to_phase


class TestExactShortcuts:
    def test_pi_eighth_is_t(self):
        # Exactly representable: the guard short-circuits any epsilon.
        assert approximate_rotation(ExactAngle(1, 3), 10.0) == "T"

    def test_quarter_is_s(self):
        assert exact_rotation_letters(ExactAngle(1, 2)) == "S"

    @pytest.mark.parametrize("eighths", range(-7, 9, 2))
    def test_all_octants_exact(self, eighths):
        angle = ExactAngle(eighths, 3)
        letters = exact_rotation_letters(angle)
        assert letters is not None
        got = letters_unitary(letters)
        want = rotation({0: "Z"}, angle.to_float(), 1)
        assert operator_distance_up_to_phase(got, want) < 1e-9

    def test_non_octant_returns_none(self):
        assert exact_rotation_letters(ExactAngle(1, 5)) is None


class TestSearch:
    def test_tiny_angle_is_identity(self):
        letters, error = SearchBackend().approximate(ExactAngle(1, 40), 1e-3)
        assert letters == ""
        assert error < 1e-3

    def test_desk_scale_search(self):
        # pi/16 rotation at eps 0.05: the bounded search must find a word.
        angle = ExactAngle(1, 4)
        letters = approximate_rotation(angle, 0.05)
        assert letters
        got = letters_unitary(letters)
        want = rotation({0: "Z"}, angle.to_float(), 1)
        assert operator_distance_up_to_phase(got, want) <= 0.05 + 1e-9

    @pytest.mark.parametrize("power", [4, 9])
    def test_millieps_search(self, power):
        angle = ExactAngle(1, power)
        letters, error = SearchBackend().approximate(angle, 1e-3)
        assert error <= 1e-3
        assert sequence_error(letters, angle.to_float()) <= 1e-3 * (1 + 1e-9)

    def test_budget_exhaustion(self):
        with pytest.raises(NoApproximationFound):
            SearchBackend(max_half=3).approximate(ExactAngle(1, 4), 1e-9)

    def test_deterministic(self):
        a = approximate_rotation(ExactAngle(1, 4), 1e-3, SearchBackend())
        b = approximate_rotation(ExactAngle(1, 4), 1e-3, SearchBackend())
        assert a == b


class TestCache:
    def test_round_trip_and_lookup(self, tmp_path):
        cache = build_cache([ExactAngle(1, 4), ExactAngle(1, 5)], 0.02)
        path = tmp_path / "seqs.cache"
        cache.save(path)
        loaded = ApproximationCache.load(path)
        loaded.verify()
        backend = CacheBackend(loaded)
        letters, error = backend.approximate(ExactAngle(1, 4), 0.05)
        assert error <= 0.05

    def test_missing_entry(self):
        backend = CacheBackend(ApproximationCache())
        # A miss only matters when the identity is not good enough.
        with pytest.raises(MissingCacheEntry):
            backend.approximate(ExactAngle(1, 4), 1e-3)

    def test_cache_prefers_coarsest_adequate(self):
        cache = ApproximationCache()
        cache.add(ExactAngle(1, 4), 1e-6, "LONG" * 10)
        cache.add(ExactAngle(1, 4), 1e-2, "T")
        assert cache.lookup(ExactAngle(1, 4), 1e-1) == "T"
        assert cache.lookup(ExactAngle(1, 4), 1e-5) == "LONG" * 10

    def test_verify_rejects_dishonest_entry(self):
        cache = ApproximationCache()
        cache.add(ExactAngle(1, 4), 1e-12, "T")
        with pytest.raises(ValueError, match="claims"):
            cache.verify()

    def test_cache_file_format(self, tmp_path):
        path = tmp_path / "f.cache"
        path.write_text("# comment\n1/2^4 2.0e-02 HTHTSH\n-1/2^4 5.0e-02 -\n")
        cache = ApproximationCache.load(path)
        assert cache.lookup(ExactAngle(1, 4), 0.05) == "HTHTSH"
        assert cache.lookup(ExactAngle(-1, 4), 0.1) == ""


def test_invalid_epsilon():
    with pytest.raises(ValueError):
        Approximator(SearchBackend()).letters_for(ExactAngle(1, 4), 0.0)
