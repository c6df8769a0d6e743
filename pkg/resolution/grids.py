import argparse
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError


@dataclass(frozen=True)
class GridSpec:
    axis_min: float
    axis_max: float
    points: int
    scale: str = 'linear'

    def __post_init__(self):
        if self.scale not in ('linear', 'log'):
            raise DomainError(f"grid scale must be 'linear' or 'log', got {self.scale!r}")
        if not self.axis_min < self.axis_max:
            raise DomainError('grid needs axis_min < axis_max')
        if int(self.points) != self.points or self.points < 2:
            raise DomainError('grid needs at least two points')
        if self.scale == 'log' and self.axis_min <= 0:
            raise DomainError('log-scaled grid needs positive endpoints')

    @classmethod
    def parse(cls, text: str) -> 'GridSpec':
        """Parse ``lo:hi:n[:linear|log]``."""
        parts = text.split(':')
        if len(parts) not in (3, 4):
            raise DomainError(f'grid {text!r} is not of the form lo:hi:n[:scale]')
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise DomainError(f'grid {text!r} has a non-numeric field') from exc
        return cls(lo, hi, n, parts[3] if len(parts) == 4 else 'linear')

    def values(self) -> np.ndarray:
        if self.scale == 'log':
            return np.geomspace(self.axis_min, self.axis_max, int(self.points))
        return np.linspace(self.axis_min, self.axis_max, int(self.points))

    def integer_values(self) -> np.ndarray:
        """Distinct integers of the grid, for integer-valued axes."""
        return np.unique(np.rint(self.values()).astype(int))

    def __str__(self):
        return f'{self.axis_min:g}:{self.axis_max:g}:{self.points}:{self.scale}'


def grid_argument(text: str) -> GridSpec:
    """argparse ``type=`` hook; a bad grid becomes a usage error."""
    try:
        return GridSpec.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def int_list_argument(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f'{text!r} is not a comma-separated list of integers') from exc
