"""
Unconstrained resolution information over a finite alphabet.

The projection of a prior onto {p : p(A) >= 1 - eps} depends only on the
prior mass of A, and is attained by reweighting the prior inside and outside
A by constants. The partition case takes the cheapest region.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from .beliefs import (
    DiscreteBelief, Region, SemanticPartition,
    binary_divergence, region_mass, region_masses,
)
from .exceptions import ConvergenceError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AmbiguityTarget:
    epsilon: float

    def __post_init__(self):
        eps = float(self.epsilon)
        if not 0.0 <= eps < 1.0:
            raise DomainError(f'target ambiguity must satisfy 0 <= epsilon < 1, got {eps!r}')
        object.__setattr__(self, 'epsilon', eps)

    @classmethod
    def coerce(cls, value) -> 'AmbiguityTarget':
        return value if isinstance(value, cls) else cls(value)

    @property
    def q(self) -> float:
        """Required mass on the target region."""
        return 1.0 - self.epsilon


@dataclass(frozen=True)
class ResolutionResult:
    info_nats: float
    achieving_posterior: DiscreteBelief | None = None
    binding_region_index: int | None = None
    feasible_at_prior: bool = False
    region_costs: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            'info_nats': self.info_nats,
            'binding_region_index': self.binding_region_index,
            'feasible_at_prior': self.feasible_at_prior,
            'achieving_posterior': None if self.achieving_posterior is None
            else self.achieving_posterior.probs.tolist(),
            'region_costs': [cost if math.isfinite(cost) else None for cost in self.region_costs],
        }


def _check_prior_mass(prior_mass: float) -> float:
    prior_mass = float(prior_mass)
    if not 0.0 < prior_mass < 1.0:
        raise DomainError(f'prior region mass must lie strictly between 0 and 1, got {prior_mass!r}')
    return prior_mass


def resolution_info_region(prior_mass: float, target) -> float:
    """d_bin(1 - eps || p0(A)) when 1 - eps exceeds the prior mass, else 0."""
    prior_mass = _check_prior_mass(prior_mass)
    q = AmbiguityTarget.coerce(target).q
    if q <= prior_mass:
        return 0.0
    return binary_divergence(q, prior_mass)


def resolution_info_table(prior_masses, epsilons) -> np.ndarray:
    """Vectorised resolution_info_region; rows follow prior_masses, columns epsilons."""
    prior = np.asarray(prior_masses, dtype=float)[:, None]
    eps = np.asarray(epsilons, dtype=float)[None, :]
    if np.any((prior <= 0) | (prior >= 1)):
        raise DomainError('prior masses must lie strictly between 0 and 1')
    if np.any((eps < 0) | (eps >= 1)):
        raise DomainError('epsilons must satisfy 0 <= epsilon < 1')
    q = 1.0 - eps
    cost = special.rel_entr(q, prior) + special.rel_entr(1.0 - q, 1.0 - prior)
    return np.where(q > prior, np.maximum(cost, 0.0), 0.0)


def optimal_posterior(p0: DiscreteBelief, region: Region, target) -> DiscreteBelief:
    """Prior reweighted by q/p0(A) on A and (1-q)/(1-p0(A)) off A."""
    target = AmbiguityTarget.coerce(target)
    prior_mass = _check_prior_mass(region_mass(p0, region))
    q = max(target.q, prior_mass)
    if q == prior_mass:
        return p0
    inside = np.zeros(p0.size, dtype=bool)
    inside[region.indices()] = True
    probs = np.where(inside, p0.probs * (q / prior_mass), p0.probs * ((1.0 - q) / (1.0 - prior_mass)))
    return DiscreteBelief(probs)


def _feasible_region_cost(mass: float, target: AmbiguityTarget) -> float:
    # no projection is needed here, so an empty region just costs +inf
    if mass >= target.q:
        return 0.0
    if mass <= 0.0:
        return math.inf
    return resolution_info_region(mass, target)


def resolution_info_partition(p0: DiscreteBelief, partition: SemanticPartition, target) -> ResolutionResult:
    """Cheapest fixed-region projection over the partition; ties go to the lowest index."""
    target = AmbiguityTarget.coerce(target)
    masses = region_masses(p0, partition)
    best = int(np.argmax(masses))
    if masses[best] >= target.q:
        return ResolutionResult(
            info_nats=0.0,
            achieving_posterior=p0,
            binding_region_index=best,
            feasible_at_prior=True,
            region_costs=tuple(_feasible_region_cost(m, target) for m in masses),
        )
    for index, mass in enumerate(masses):
        if mass <= 0.0:
            raise DomainError(f'region {index} has zero prior mass; projection onto it is undefined')
    costs = [resolution_info_region(mass, target) for mass in masses]
    binding = int(np.argmin(costs))
    posterior = optimal_posterior(p0, partition.regions[binding], target)
    logger.debug('partition projection: costs=%s binding=%d', costs, binding)
    return ResolutionResult(
        info_nats=costs[binding],
        achieving_posterior=posterior,
        binding_region_index=binding,
        feasible_at_prior=False,
        region_costs=tuple(costs),
    )


@dataclass(frozen=True)
class ProjectionSolverConfig:
    restarts: int = 10
    tol: float = 1e-10
    max_iter: int = 1000
    seed: int = 0
    grid_step: float = 1e-3
    grid_max_alphabet: int = 4
    max_alphabet: int = 8


def _simplex_lattice(n: int, steps: int) -> np.ndarray:
    """All points of the simplex with coordinates in multiples of 1/steps."""
    free = np.array(list(itertools.product(range(steps + 1), repeat=n - 1)), dtype=float).reshape(-1, n - 1)
    free = free[free.sum(axis=1) <= steps]
    last = steps - free.sum(axis=1, keepdims=True)
    return np.hstack([free, last]) / steps


class BruteForceProjector:
    """Numerical KL projection onto {p : p(A) >= q}, independent of the closed form.

    SLSQP from ``restarts`` random starting points on the simplex; for very
    small alphabets a coarse-to-fine lattice search is the fallback when
    every restart fails.
    """

    def __init__(self, config: ProjectionSolverConfig | None = None):
        self.config = config or ProjectionSolverConfig()

    def _objective(self, p, p0):
        return float(special.rel_entr(np.clip(p, 0.0, 1.0), p0).sum())

    def _gradient(self, p, p0):
        p = np.clip(p, 1e-300, 1.0)
        return np.log(p / p0) + 1.0

    def _solve(self, p0, inside, q, start):
        constraints = [
            {'type': 'eq', 'fun': lambda p: p.sum() - 1.0, 'jac': lambda p: np.ones_like(p)},
            {'type': 'ineq', 'fun': lambda p: p[inside].sum() - q, 'jac': lambda p: inside.astype(float)},
        ]
        return optimize.minimize(
            self._objective, start, args=(p0,), jac=self._gradient, method='SLSQP',
            bounds=[(0.0, 1.0)] * p0.size, constraints=constraints,
            options={'ftol': self.config.tol, 'maxiter': self.config.max_iter},
        )

    def _grid_search(self, p0, inside, q):
        steps = 100 if p0.size > 2 else int(round(1.0 / self.config.grid_step))
        points = _simplex_lattice(p0.size, steps)
        best_point, best_value = None, math.inf
        step = 1.0 / steps
        while True:
            feasible = points[points[:, inside].sum(axis=1) >= q - 1e-12]
            if feasible.size:
                values = special.rel_entr(feasible, p0).sum(axis=1)
                index = int(np.argmin(values))
                if values[index] < best_value:
                    best_value, best_point = float(values[index]), feasible[index]
            if best_point is None or step <= self.config.grid_step:
                return best_value
            # refine around the incumbent on a ten times finer lattice
            step /= 10.0
            offsets = np.array(list(itertools.product(range(-10, 11), repeat=p0.size - 1)), dtype=float) * step
            free = best_point[:-1] + offsets
            last = 1.0 - free.sum(axis=1, keepdims=True)
            points = np.hstack([free, last])
            points = points[np.all(points >= 0.0, axis=1)]

    def project(self, p0: DiscreteBelief, region: Region, target) -> float:
        target = AmbiguityTarget.coerce(target)
        if p0.size > self.config.max_alphabet:
            raise DomainError(f'brute-force projection supports alphabets up to {self.config.max_alphabet} states')
        region.check(p0.size)
        q = target.q
        if region_mass(p0, region) >= q:
            return 0.0
        inside = np.zeros(p0.size, dtype=bool)
        inside[region.indices()] = True
        # posteriors must vanish off the prior's support
        support = p0.probs > 0
        inside = inside[support]
        prior = p0.probs[support]
        if not np.any(inside):
            return math.inf

        rng = np.random.default_rng(self.config.seed)
        best = best_unconverged = math.inf
        for restart in range(self.config.restarts):
            start = prior.copy() if restart == 0 else rng.dirichlet(np.ones(prior.size))
            result = self._solve(prior, inside, q, start)
            p = np.clip(result.x, 0.0, 1.0)
            feasible = abs(p.sum() - 1.0) <= 1e-9 and p[inside].sum() >= q - 1e-9
            value = self._objective(p, prior)
            logger.debug('restart %d: status=%d value=%.12g', restart, result.status, value)
            if not feasible:
                continue
            # status 8 is SLSQP stalling at the optimum below ftol
            if result.status in (0, 8):
                best = min(best, value)
            else:
                best_unconverged = min(best_unconverged, value)

        if math.isfinite(best):
            return best
        if prior.size <= self.config.grid_max_alphabet:
            logger.warning('SLSQP failed on every restart; falling back to lattice search')
            return self._grid_search(prior, inside, q)
        raise ConvergenceError('brute-force projection did not converge', best_value=best_unconverged)


def brute_force_projection(p0: DiscreteBelief, region: Region, target,
                           config: ProjectionSolverConfig | None = None) -> float:
    return BruteForceProjector(config).project(p0, region, target)
