"""
Discrete beliefs, semantic partitions and the ambiguity functionals on them.
"""
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import special

from .exceptions import DimensionMismatch, DomainError

NORMALIZATION_TOL = 1e-12


def _clip_unit(value: float) -> float:
    return min(1.0, max(0.0, float(value)))


@dataclass(frozen=True, eq=False)
class DiscreteBelief:
    """Probability vector over the alphabet {0, ..., n-1}.

    Inputs off the simplex by more than NORMALIZATION_TOL are rejected,
    never renormalised.
    """
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float).reshape(-1)
        if probs.size < 1:
            raise DomainError('belief needs at least one state')
        if not np.all(np.isfinite(probs)):
            raise DomainError('belief entries must be finite')
        if np.any(probs < 0):
            raise DomainError('belief entries must be nonnegative')
        total = float(probs.sum())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f'belief entries sum to {total!r}, expected 1')
        probs.flags.writeable = False
        object.__setattr__(self, 'probs', probs)

    @classmethod
    def uniform(cls, n: int) -> 'DiscreteBelief':
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, n: int, state: int) -> 'DiscreteBelief':
        probs = np.zeros(n)
        probs[state] = 1.0
        return cls(probs)

    @property
    def size(self) -> int:
        return int(self.probs.size)

    def __len__(self):
        return self.size

    def to_dict(self) -> dict:
        return {'probs': self.probs.tolist()}


@dataclass(frozen=True)
class Region:
    members: frozenset

    def __post_init__(self):
        members = frozenset(int(i) for i in self.members)
        object.__setattr__(self, 'members', members)

    @classmethod
    def of(cls, *indices: int) -> 'Region':
        return cls(frozenset(indices))

    def indices(self) -> np.ndarray:
        return np.array(sorted(self.members), dtype=int)

    def check(self, alphabet_size: int) -> None:
        for i in self.members:
            if not 0 <= i < alphabet_size:
                raise DimensionMismatch(f'state index {i} out of range for alphabet of size {alphabet_size}')


@dataclass(frozen=True)
class SemanticPartition:
    regions: tuple
    alphabet_size: int

    def __post_init__(self):
        regions = tuple(r if isinstance(r, Region) else Region(frozenset(r)) for r in self.regions)
        object.__setattr__(self, 'regions', regions)
        if self.alphabet_size < 1:
            raise DomainError('alphabet_size must be positive')
        if not regions:
            raise DomainError('partition needs at least one region')
        seen = set()
        for index, region in enumerate(regions):
            if not region.members:
                raise DomainError(f'region {index} is empty')
            region.check(self.alphabet_size)
            overlap = seen & region.members
            if overlap:
                raise DomainError(f'region {index} overlaps earlier regions at states {sorted(overlap)}')
            seen |= region.members
        missing = set(range(self.alphabet_size)) - seen
        if missing:
            raise DomainError(f'partition does not cover states {sorted(missing)}')

    @classmethod
    def from_lists(cls, regions: Iterable[Iterable[int]], alphabet_size: int | None = None) -> 'SemanticPartition':
        regions = [Region(frozenset(r)) for r in regions]
        if alphabet_size is None:
            alphabet_size = 1 + max((max(r.members) for r in regions if r.members), default=-1)
        return cls(tuple(regions), alphabet_size)

    def __len__(self):
        return len(self.regions)

    def to_dict(self) -> dict:
        return {'regions': [sorted(r.members) for r in self.regions]}


def _check_same_alphabet(p: DiscreteBelief, q: DiscreteBelief) -> None:
    if p.size != q.size:
        raise DimensionMismatch(f'beliefs have different alphabet sizes ({p.size} vs {q.size})')


def _check_partition(p: DiscreteBelief, partition: SemanticPartition) -> None:
    if partition.alphabet_size != p.size:
        raise DimensionMismatch(
            f'partition covers {partition.alphabet_size} states but belief has {p.size}'
        )


def region_mass(p: DiscreteBelief, region: Region) -> float:
    region.check(p.size)
    if not region.members:
        return 0.0
    return _clip_unit(p.probs[region.indices()].sum())


def region_masses(p: DiscreteBelief, partition: SemanticPartition) -> np.ndarray:
    _check_partition(p, partition)
    return np.array([region_mass(p, r) for r in partition.regions])


def region_ambiguity(p: DiscreteBelief, region: Region) -> float:
    return 1.0 - region_mass(p, region)


def ambiguity(p: DiscreteBelief, partition: SemanticPartition) -> float:
    """Mass outside the most likely region: 1 - max_a p(A_a)."""
    return _clip_unit(1.0 - region_masses(p, partition).max())


def most_likely_region(p: DiscreteBelief, partition: SemanticPartition) -> tuple[int, float]:
    """Index and mass of the heaviest region; ties go to the lowest index."""
    masses = region_masses(p, partition)
    index = int(np.argmax(masses))
    return index, float(masses[index])


def kl_divergence(p: DiscreteBelief, q: DiscreteBelief) -> float:
    """D(p || q) in nats; math.inf when p is not absolutely continuous w.r.t. q."""
    _check_same_alphabet(p, q)
    value = float(special.rel_entr(p.probs, q.probs).sum())
    return max(0.0, value)


def binary_divergence(u: float, r: float) -> float:
    """KL divergence between Bernoulli(u) and Bernoulli(r), nats."""
    u = float(u)
    r = float(r)
    if not 0.0 <= u <= 1.0:
        raise DomainError(f'binary_divergence requires 0 <= u <= 1, got {u!r}')
    if not 0.0 < r < 1.0:
        raise DomainError(f'binary_divergence requires 0 < r < 1, got {r!r}')
    value = float(special.rel_entr(u, r) + special.rel_entr(1.0 - u, 1.0 - r))
    return max(0.0, value)


def total_variation(p: DiscreteBelief, q: DiscreteBelief) -> float:
    _check_same_alphabet(p, q)
    return _clip_unit(0.5 * np.abs(p.probs - q.probs).sum())
