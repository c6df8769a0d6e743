import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from resolution.beliefs import (
    DiscreteBelief, Region, SemanticPartition, ambiguity, binary_divergence, kl_divergence, region_mass,
    total_variation,
)
from resolution.exceptions import DomainError
from resolution.resolution_core import (
    AmbiguityTarget, ProjectionSolverConfig, brute_force_projection, optimal_posterior,
    resolution_info_partition, resolution_info_region, resolution_info_table,
)


@pytest.fixture
def prior():
    return DiscreteBelief([0.1, 0.2, 0.3, 0.4])


def _random_instance(rng):
    n = int(rng.integers(2, 7))
    p0 = DiscreteBelief(rng.dirichlet(np.full(n, 2.0)))
    size = int(rng.integers(1, n))
    region = Region(frozenset(rng.permutation(n)[:size].tolist()))
    epsilon = float(rng.uniform(0.01, 0.5))
    return p0, region, epsilon


def test_target_domain():
    assert AmbiguityTarget(0.0).q == 1.0
    with pytest.raises(DomainError):
        AmbiguityTarget(1.0)
    with pytest.raises(DomainError):
        AmbiguityTarget(-0.01)


@pytest.mark.parametrize('prior_mass, epsilon, expected', [
    (0.1, 0.1, 1.757780),
    (0.1, 0.01, 2.224612),
    (0.2, 0.05, 1.341608),
    (0.5, 0.1, 0.368064),
])
def test_region_info_reference_values(prior_mass, epsilon, expected):
    assert resolution_info_region(prior_mass, epsilon) == pytest.approx(expected, abs=1e-6)


def test_region_info_is_zero_when_prior_already_meets_target():
    assert resolution_info_region(0.95, 0.1) == 0.0
    assert resolution_info_region(0.5, 0.5) == 0.0


def test_zero_epsilon_asks_for_full_certainty():
    assert resolution_info_region(0.5, 0.0) == pytest.approx(math.log(2.0), rel=1e-15)


@pytest.mark.parametrize('prior_mass', [0.0, 1.0, -0.2])
def test_region_info_rejects_degenerate_prior_mass(prior_mass):
    with pytest.raises(DomainError):
        resolution_info_region(prior_mass, 0.1)


def test_table_matches_scalar_evaluation():
    priors = [0.01, 0.1, 0.5, 0.95]
    epsilons = [0.0, 0.01, 0.1, 0.3]
    table = resolution_info_table(priors, epsilons)
    assert table.shape == (4, 4)
    for i, prior_mass in enumerate(priors):
        for j, epsilon in enumerate(epsilons):
            assert table[i, j] == pytest.approx(resolution_info_region(prior_mass, epsilon), abs=1e-15)


def test_optimal_posterior_reweights_by_region(prior):
    region = Region.of(0)
    posterior = optimal_posterior(prior, region, 0.2)
    assert region_mass(posterior, region) == pytest.approx(0.8, abs=1e-12)
    # shape outside the region is the prior's, rescaled
    outside = posterior.probs[1:] / prior.probs[1:]
    assert np.allclose(outside, outside[0], rtol=0, atol=1e-14)
    assert kl_divergence(posterior, prior) == pytest.approx(binary_divergence(0.8, 0.1), abs=1e-12)


def test_optimal_posterior_returns_prior_when_feasible(prior):
    assert optimal_posterior(prior, Region.of(2, 3), 0.5) is prior


def test_achievability_on_random_instances():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        p0, region, epsilon = _random_instance(rng)
        info = resolution_info_region(region_mass(p0, region), epsilon)
        posterior = optimal_posterior(p0, region, epsilon)
        assert kl_divergence(posterior, p0) == pytest.approx(info, abs=1e-12)
        assert region_mass(posterior, region) >= 1.0 - epsilon - 1e-12


def test_brute_force_agrees_with_closed_form():
    rng = np.random.default_rng(5)
    for _ in range(100):
        p0, region, epsilon = _random_instance(rng)
        expected = resolution_info_region(region_mass(p0, region), epsilon)
        assert brute_force_projection(p0, region, epsilon) == pytest.approx(expected, abs=1e-6)


def test_brute_force_reference_cases(prior):
    uniform = DiscreteBelief.uniform(4)
    assert brute_force_projection(uniform, Region.of(0, 1), 0.1) == pytest.approx(0.368064, abs=1e-6)
    assert brute_force_projection(prior, Region.of(0), 0.2) == pytest.approx(binary_divergence(0.8, 0.1), abs=1e-6)


def test_brute_force_lattice_fallback_on_tiny_alphabet():
    # zero restarts forces the lattice search
    config = ProjectionSolverConfig(restarts=0)
    p0 = DiscreteBelief([0.2, 0.3, 0.5])
    value = brute_force_projection(p0, Region.of(0), 0.1, config=config)
    assert value == pytest.approx(binary_divergence(0.9, 0.2), abs=1e-4)
    assert value >= binary_divergence(0.9, 0.2) - 1e-10


def test_brute_force_limits():
    with pytest.raises(DomainError):
        brute_force_projection(DiscreteBelief.uniform(9), Region.of(0), 0.1)
    assert brute_force_projection(DiscreteBelief([0.05, 0.95]), Region.of(1), 0.1) == 0.0
    assert brute_force_projection(DiscreteBelief([0.0, 1.0]), Region.of(0), 0.1) == math.inf


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=0.999), st.floats(min_value=0.0, max_value=0.99),
       st.floats(min_value=0.0, max_value=0.99))
def test_info_decreases_as_target_loosens(prior_mass, eps_a, eps_b):
    tight, loose = sorted((eps_a, eps_b))
    assert resolution_info_region(prior_mass, tight) >= resolution_info_region(prior_mass, loose) - 1e-15


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-3, max_value=0.999), st.floats(min_value=1e-3, max_value=0.999),
       st.floats(min_value=0.0, max_value=0.99))
def test_info_decreases_as_prior_mass_grows(mass_a, mass_b, epsilon):
    small, large = sorted((mass_a, mass_b))
    assert resolution_info_region(small, epsilon) >= resolution_info_region(large, epsilon) - 1e-15


def test_region_shape_inside_and_outside_is_invisible():
    region = Region.of(0, 1)
    a = DiscreteBelief([0.05, 0.15, 0.6, 0.2])
    b = DiscreteBelief([0.1, 0.1, 0.1, 0.7])
    assert resolution_info_region(region_mass(a, region), 0.1) == \
        pytest.approx(resolution_info_region(region_mass(b, region), 0.1), abs=1e-12)


def test_partition_picks_cheapest_region(prior):
    partition = SemanticPartition.from_lists([[0, 1], [2, 3]])
    result = resolution_info_partition(prior, partition, 0.1)
    assert result.binding_region_index == 1
    assert result.info_nats == pytest.approx(0.116322, abs=1e-6)
    assert result.region_costs[0] == pytest.approx(binary_divergence(0.9, 0.3), abs=1e-12)
    assert not result.feasible_at_prior
    assert region_mass(result.achieving_posterior, Region.of(2, 3)) == pytest.approx(0.9, abs=1e-12)


def test_partition_minimum_matches_brute_force(prior):
    partition = SemanticPartition.from_lists([[0], [1, 2], [3]])
    result = resolution_info_partition(prior, partition, 0.15)
    oracle = min(brute_force_projection(prior, region, 0.15) for region in partition.regions)
    assert result.info_nats == pytest.approx(oracle, abs=1e-6)


def test_partition_feasible_at_prior(prior):
    partition = SemanticPartition.from_lists([[0], [1, 2, 3]])
    result = resolution_info_partition(prior, partition, 0.2)
    assert result.feasible_at_prior
    assert result.info_nats == 0.0
    assert result.binding_region_index == 1
    assert result.achieving_posterior is prior


def test_partition_ties_go_to_lowest_index():
    p0 = DiscreteBelief([0.25, 0.25, 0.25, 0.25])
    result = resolution_info_partition(p0, SemanticPartition.from_lists([[0, 1], [2, 3]]), 0.1)
    assert result.binding_region_index == 0


def test_partition_with_zero_mass_region_is_rejected():
    p0 = DiscreteBelief([0.5, 0.5, 0.0])
    with pytest.raises(DomainError):
        resolution_info_partition(p0, SemanticPartition.from_lists([[0], [1], [2]]), 0.1)


def test_result_serializes(prior):
    partition = SemanticPartition.from_lists([[0, 1], [2, 3]])
    payload = resolution_info_partition(prior, partition, 0.1).to_dict()
    assert payload['binding_region_index'] == 1
    assert len(payload['achieving_posterior']) == 4
    assert len(payload['region_costs']) == 2


def test_partition_feasible_with_empty_region():
    point_mass = DiscreteBelief([1.0, 0.0])
    result = resolution_info_partition(point_mass, SemanticPartition.from_lists([[0], [1]]), 0.1)
    assert result.feasible_at_prior
    assert result.info_nats == 0.0
    assert result.binding_region_index == 0
    assert result.region_costs == (0.0, math.inf)
    assert result.to_dict()['region_costs'] == [0.0, None]


def _random_partition(rng, n):
    order = rng.permutation(n).tolist()
    cuts = sorted(rng.choice(np.arange(1, n), size=int(rng.integers(1, n)), replace=False).tolist())
    return SemanticPartition.from_lists(
        [order[lo:hi] for lo, hi in zip([0, *cuts], [*cuts, n])], alphabet_size=n)


def test_partition_info_dominates_pinsker_bound():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 100:
        n = int(rng.integers(2, 7))
        p0 = DiscreteBelief(rng.dirichlet(np.full(n, 2.0)))
        partition = _random_partition(rng, n)
        epsilon = float(rng.uniform(0.01, 0.5))
        if epsilon >= ambiguity(p0, partition):
            continue
        result = resolution_info_partition(p0, partition, epsilon)
        separation = total_variation(result.achieving_posterior, p0)
        assert result.info_nats > 0.0
        assert result.info_nats >= 2.0 * separation ** 2 - 1e-12
        checked += 1


def test_partition_info_is_nonincreasing_in_epsilon():
    rng = np.random.default_rng(17)
    epsilons = np.round(np.arange(0.01, 0.501, 0.01), 2)
    for _ in range(50):
        n = int(rng.integers(2, 7))
        p0 = DiscreteBelief(rng.dirichlet(np.full(n, 2.0)))
        partition = _random_partition(rng, n)
        infos = [resolution_info_partition(p0, partition, eps).info_nats for eps in epsilons]
        assert all(later <= earlier + 1e-15 for earlier, later in zip(infos, infos[1:]))
        assert infos[-1] == 0.0 or ambiguity(p0, partition) > 0.5
