import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from resolution.beliefs import (
    DiscreteBelief, Region, SemanticPartition, ambiguity, binary_divergence, kl_divergence,
    most_likely_region, region_mass, region_masses, total_variation,
)
from resolution.exceptions import DimensionMismatch, DomainError


@pytest.fixture
def belief():
    return DiscreteBelief([0.1, 0.2, 0.3, 0.4])


@pytest.fixture
def halves():
    return SemanticPartition.from_lists([[0, 1], [2, 3]])


def _random_belief(rng, n):
    return DiscreteBelief(rng.dirichlet(np.ones(n)))


def test_belief_rejects_off_simplex_input():
    with pytest.raises(DomainError):
        DiscreteBelief([0.5, 0.6])
    with pytest.raises(DomainError):
        DiscreteBelief([1.2, -0.2])
    with pytest.raises(DomainError):
        DiscreteBelief([])
    with pytest.raises(DomainError):
        DiscreteBelief([float('nan'), 1.0])


def test_belief_accepts_rounding_within_tolerance():
    assert DiscreteBelief([1 / 3, 1 / 3, 1 / 3]).size == 3


def test_belief_is_read_only(belief):
    with pytest.raises(ValueError):
        belief.probs[0] = 0.5


def test_uniform_and_point_mass():
    assert np.allclose(DiscreteBelief.uniform(4).probs, 0.25)
    assert DiscreteBelief.point_mass(3, 2).probs.tolist() == [0.0, 0.0, 1.0]


def test_partition_must_cover_alphabet():
    with pytest.raises(DomainError):
        SemanticPartition.from_lists([[0], [2]], alphabet_size=3)


def test_partition_rejects_overlap_and_empty_regions():
    with pytest.raises(DomainError):
        SemanticPartition.from_lists([[0, 1], [1, 2]])
    with pytest.raises(DomainError):
        SemanticPartition.from_lists([[0, 1], []], alphabet_size=2)


def test_partition_rejects_out_of_range_state():
    with pytest.raises(DimensionMismatch):
        SemanticPartition.from_lists([[0], [1, 5]], alphabet_size=3)


def test_partition_infers_alphabet_and_serializes():
    partition = SemanticPartition.from_lists([[2, 0], [1]])
    assert partition.alphabet_size == 3
    assert partition.to_dict() == {'regions': [[0, 2], [1]]}


def test_region_masses_and_ambiguity(belief, halves):
    assert region_masses(belief, halves).tolist() == pytest.approx([0.3, 0.7], abs=1e-15)
    assert ambiguity(belief, halves) == pytest.approx(0.3, abs=1e-15)
    assert region_mass(belief, Region.of(3)) == pytest.approx(0.4)


def test_partition_size_must_match_belief(belief):
    with pytest.raises(DimensionMismatch):
        ambiguity(belief, SemanticPartition.from_lists([[0], [1, 2]]))


def test_most_likely_region_breaks_ties_low():
    p = DiscreteBelief([0.25, 0.25, 0.25, 0.25])
    index, mass = most_likely_region(p, SemanticPartition.from_lists([[0], [1, 2], [3]]))
    assert (index, mass) == (1, pytest.approx(0.5))
    index, _ = most_likely_region(p, SemanticPartition.from_lists([[0, 1], [2, 3]]))
    assert index == 0


def test_single_region_has_zero_ambiguity(belief):
    assert ambiguity(belief, SemanticPartition.from_lists([[0, 1, 2, 3]])) == 0.0


def test_kl_known_value():
    p = DiscreteBelief([0.5, 0.5])
    q = DiscreteBelief([0.25, 0.75])
    assert kl_divergence(p, q) == pytest.approx(0.5 * math.log(2.0) + 0.5 * math.log(2.0 / 3.0), rel=1e-14)


def test_kl_identity_and_support(belief):
    assert kl_divergence(belief, belief) == 0.0
    assert kl_divergence(DiscreteBelief([0.5, 0.5]), DiscreteBelief([1.0, 0.0])) == math.inf
    # zero entries of p contribute nothing
    assert math.isfinite(kl_divergence(DiscreteBelief([1.0, 0.0]), DiscreteBelief([0.5, 0.5])))


def test_kl_dimension_mismatch(belief):
    with pytest.raises(DimensionMismatch):
        kl_divergence(belief, DiscreteBelief([0.5, 0.5]))


@pytest.mark.parametrize('u, r, expected', [
    (0.9, 0.1, 1.757780),
    (0.99, 0.1, 2.224612),
    (0.95, 0.2, 1.341608),
    (0.9, 0.5, 0.368064),
    (0.9, 0.7, 0.116322),
])
def test_binary_divergence_values(u, r, expected):
    assert binary_divergence(u, r) == pytest.approx(expected, abs=1e-6)


def test_binary_divergence_endpoints():
    assert binary_divergence(0.0, 0.3) == pytest.approx(-math.log(0.7), rel=1e-15)
    assert binary_divergence(1.0, 0.5) == pytest.approx(math.log(2.0), rel=1e-15)
    assert binary_divergence(0.3, 0.3) == 0.0


@pytest.mark.parametrize('u, r', [(1.5, 0.5), (-0.1, 0.5), (0.5, 0.0), (0.5, 1.0)])
def test_binary_divergence_domain(u, r):
    with pytest.raises(DomainError):
        binary_divergence(u, r)


def test_total_variation():
    assert total_variation(DiscreteBelief([1.0, 0.0]), DiscreteBelief([0.0, 1.0])) == 1.0
    assert total_variation(DiscreteBelief([0.5, 0.5]), DiscreteBelief([0.25, 0.75])) == pytest.approx(0.25)


def test_pinsker_on_random_pairs():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        p, q = _random_belief(rng, n), _random_belief(rng, n)
        assert kl_divergence(p, q) >= 2.0 * total_variation(p, q) ** 2 - 1e-12


def test_coarsening_never_increases_divergence():
    rng = np.random.default_rng(11)
    for _ in range(500):
        n = int(rng.integers(2, 9))
        p, q = _random_belief(rng, n), _random_belief(rng, n)
        cut = int(rng.integers(1, n))
        region = Region(frozenset(rng.permutation(n)[:cut].tolist()))
        coarse = binary_divergence(region_mass(p, region), region_mass(q, region))
        assert coarse <= kl_divergence(p, q) + 1e-12


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=2, max_size=8), st.data())
def test_ambiguity_is_bounded_by_partition_size(weights, data):
    probs = np.array(weights) / np.sum(weights)
    n = probs.size
    labels = data.draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    groups = {}
    for state, label in enumerate(labels):
        groups.setdefault(label, []).append(state)
    partition = SemanticPartition.from_lists(list(groups.values()), alphabet_size=n)
    gamma = ambiguity(DiscreteBelief(probs), partition)
    assert 0.0 <= gamma <= 1.0 - 1.0 / len(partition) + 1e-12
