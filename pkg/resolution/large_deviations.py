"""
Large-deviation checks of the ambiguity exponent and the decay model
behind generative resolvability.

Sampling k states i.i.d. from p0, the empirical mass of a region A reaches
q with probability exp(-k d_bin(q || p0(A)) + o(k)); that exponent is the
resolution information of A. The o(k) and o(1) corrections are dropped
everywhere here, so every bound below is asymptotic.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import special

from .beliefs import DiscreteBelief, SemanticPartition, binary_divergence
from .exceptions import DimensionMismatch, DomainError
from .resolution_core import AmbiguityTarget

logger = logging.getLogger(__name__)

MAX_TAIL_SAMPLES = 10 ** 6

# floors at or below the smallest normal double count as zero
FLOOR_ZERO_TOL = float(np.finfo(float).tiny)


@dataclass(frozen=True)
class RateEstimate:
    k_values: tuple
    log_probs: tuple
    fitted_rate: float
    theoretical_rate: float

    @property
    def relative_gap(self) -> float:
        if self.theoretical_rate == 0.0:
            return math.inf if self.fitted_rate != 0.0 else 0.0
        return abs(self.fitted_rate - self.theoretical_rate) / self.theoretical_rate

    def to_dict(self) -> dict:
        return {
            'k_values': list(self.k_values),
            'log_probs': list(self.log_probs),
            'fitted_rate': self.fitted_rate,
            'theoretical_rate': self.theoretical_rate,
            'relative_gap': self.relative_gap,
            'asymptotic': True,
        }


@dataclass(frozen=True)
class MonteCarloEstimate:
    frequency: float
    stderr: float
    complement_frequency: float
    hits: int
    trials: int
    k: int

    def agrees_with(self, exact: float, sigmas: float = 3.0) -> bool:
        """True when the frequency lies within `sigmas` binomial standard errors of `exact`.

        The standard error comes from the exact probability, so a run with no
        hits on a very rare event still counts as agreement.
        """
        spread = math.sqrt(exact * (1.0 - exact) / self.trials)
        return abs(self.frequency - exact) <= sigmas * spread

    def to_dict(self) -> dict:
        return {
            'k': self.k,
            'trials': self.trials,
            'frequency': self.frequency,
            'stderr': self.stderr,
            'complement_frequency': self.complement_frequency,
        }


@dataclass(frozen=True)
class DecayModel:
    """Gamma(p_k) <= max(floor, gamma0 exp(-c k I_sample))."""
    gamma0: float
    c: float
    info_per_sample: float
    floor: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.gamma0 <= 1.0:
            raise DomainError(f'gamma0 must lie in (0, 1], got {self.gamma0!r}')
        if not self.c > 0:
            raise DomainError(f'c must be positive, got {self.c!r}')
        if not self.info_per_sample >= 0:
            raise DomainError(f'info_per_sample must be nonnegative, got {self.info_per_sample!r}')
        if not 0.0 <= self.floor <= 1.0:
            raise DomainError(f'floor must lie in [0, 1], got {self.floor!r}')

    @property
    def degenerate(self) -> bool:
        return self.floor >= self.gamma0


@dataclass(frozen=True)
class ResolvabilityBound:
    value: float
    unbounded: bool = False
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            'value': None if self.unbounded else self.value,
            'unbounded': self.unbounded,
            'degenerate': self.degenerate,
            'asymptotic': True,
        }


def _check_unit_open(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 < value < 1.0:
        raise DomainError(f'{name} must lie strictly between 0 and 1, got {value!r}')
    return value


def lattice_threshold(q: float, k: int) -> int:
    """Smallest count j with j / k >= q; absorbs rounding in q * k."""
    return max(0, math.ceil(q * k - 1e-9))


def binomial_tail_exact(k: int, r: float, q: float) -> float:
    """log P(X >= ceil(q k)) for X ~ Binomial(k, r), summed in log space."""
    r = _check_unit_open('r', r)
    q = float(q)
    if not 0.0 < q <= 1.0:
        raise DomainError(f'q must lie in (0, 1], got {q!r}')
    if int(k) != k or not 1 <= k <= MAX_TAIL_SAMPLES:
        raise DomainError(f'k must be an integer in [1, {MAX_TAIL_SAMPLES}], got {k!r}')
    k = int(k)
    start = lattice_threshold(q, k)
    if start == 0:
        return 0.0
    j = np.arange(start, k + 1, dtype=float)
    log_terms = (special.gammaln(k + 1.0) - special.gammaln(j + 1.0) - special.gammaln(k - j + 1.0)
                 + j * math.log(r) + (k - j) * math.log1p(-r))
    return min(0.0, float(special.logsumexp(log_terms)))


def binary_reduction_log_prob(k: int, r: float, q: float) -> float:
    """log P(Gamma(p_k) <= 1 - q) for the two-region partition with masses (r, 1 - r).

    The empirical ambiguity is low when either region holds at least
    ceil(q k) of the k draws; this is the exact probability of that union.
    """
    r = _check_unit_open('r', r)
    if not 0.0 < q <= 1.0:
        raise DomainError(f'q must lie in (0, 1], got {q!r}')
    if int(k) != k or not 1 <= k <= MAX_TAIL_SAMPLES:
        raise DomainError(f'k must be an integer in [1, {MAX_TAIL_SAMPLES}], got {k!r}')
    k = int(k)
    threshold = lattice_threshold(q, k)
    j = np.arange(0, k + 1, dtype=float)
    hit = (j >= threshold) | (k - j >= threshold)
    log_terms = (special.gammaln(k + 1.0) - special.gammaln(j + 1.0) - special.gammaln(k - j + 1.0)
                 + j * math.log(r) + (k - j) * math.log1p(-r))
    return min(0.0, float(special.logsumexp(log_terms[hit])))


def sanov_rate_check(r: float, q: float, k_grid) -> RateEstimate:
    """Fit the decay rate of the exact binomial tail against d_bin(q || r)."""
    r = _check_unit_open('r', r)
    if not r < q <= 1.0:
        raise DomainError(f'need r < q <= 1 for a rare event, got r={r!r} q={q!r}')
    ks = [int(k) for k in k_grid]
    if len(ks) < 3:
        raise DomainError('k_grid needs at least three points')
    if any(b <= a for a, b in zip(ks, ks[1:])):
        raise DomainError('k_grid must be strictly ascending')
    log_probs = [binomial_tail_exact(k, r, q) for k in ks]
    slope, _ = np.polyfit(np.array(ks, dtype=float), -np.array(log_probs), 1)
    estimate = RateEstimate(tuple(ks), tuple(log_probs), float(slope), binary_divergence(q, r))
    logger.debug('rate fit r=%g q=%g: fitted=%.6g theory=%.6g', r, q, estimate.fitted_rate,
                 estimate.theoretical_rate)
    return estimate


def _chunk_hits(seed_seq, size, k, probs, membership, threshold):
    generator = np.random.Generator(np.random.Philox(seed_seq))
    counts = generator.multinomial(k, probs, size=size)
    region_counts = counts @ membership
    return int(np.count_nonzero(region_counts.max(axis=1) >= threshold))


def monte_carlo_ambiguity(p0: DiscreteBelief, partition: SemanticPartition, target, k: int,
                          trials: int, seed: int, chunk: int = 1024, workers: int = 1) -> MonteCarloEstimate:
    """Frequency of Gamma(p_k) <= eps over `trials` empirical beliefs of k draws.

    Trials are split into fixed chunks, each on its own Philox stream spawned
    from ``seed``; the result does not depend on ``workers``.
    """
    target = AmbiguityTarget.coerce(target)
    if partition.alphabet_size != p0.size:
        raise DimensionMismatch('partition and belief cover different alphabets')
    if int(k) != k or k < 1:
        raise DomainError(f'k must be a positive integer, got {k!r}')
    if int(trials) != trials or trials < 1:
        raise DomainError(f'trials must be a positive integer, got {trials!r}')
    if chunk < 1:
        raise DomainError('chunk must be positive')
    k, trials = int(k), int(trials)

    membership = np.zeros((p0.size, len(partition)), dtype=np.int64)
    for index, region in enumerate(partition.regions):
        membership[region.indices(), index] = 1
    threshold = lattice_threshold(target.q, k)

    sizes = [min(chunk, trials - start) for start in range(0, trials, chunk)]
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    probs = np.array(p0.probs)
    run = lambda job: _chunk_hits(job[0], job[1], k, probs, membership, threshold)
    jobs = list(zip(streams, sizes))
    if workers <= 1:
        per_chunk = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_chunk = list(pool.map(run, jobs))

    hits = sum(per_chunk)
    frequency = hits / trials
    stderr = math.sqrt(frequency * (1.0 - frequency) / trials)
    return MonteCarloEstimate(frequency, stderr, 1.0 - frequency, hits, trials, k)


def sample_complexity_lower_bound(info_nats: float, target) -> float:
    """ln(1/eps) / I, the leading term of the sample requirement."""
    target = AmbiguityTarget.coerce(target)
    if not info_nats > 0:
        raise DomainError(f'info_nats must be positive, got {info_nats!r}')
    if not 0.0 < target.epsilon < 1.0:
        raise DomainError(f'epsilon must lie strictly between 0 and 1, got {target.epsilon!r}')
    return -math.log(target.epsilon) / info_nats


def decay_model_ambiguity(model: DecayModel, k: int) -> float:
    if int(k) != k or k < 0:
        raise DomainError(f'k must be a nonnegative integer, got {k!r}')
    return max(model.floor, model.gamma0 * math.exp(-model.c * k * model.info_per_sample))


def resolvability_bound(model: DecayModel) -> ResolvabilityBound:
    """(1/c) ln(gamma0 / floor); unbounded with no floor, 0 when the floor is not below gamma0."""
    if model.degenerate:
        return ResolvabilityBound(0.0, degenerate=True)
    if model.floor <= FLOOR_ZERO_TOL:
        return ResolvabilityBound(math.inf, unbounded=True)
    return ResolvabilityBound(math.log(model.gamma0 / model.floor) / model.c)
