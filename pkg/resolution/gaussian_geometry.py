"""
Resolution information when posteriors are restricted to Gaussians.

Two geometries are covered. A half-space is resolved by a mean shift (or a
variance rescale) along its normal and has no ambiguity floor. The orthant
polytope {s : s_i <= a} under isotropic zero-mean posteriors N(0, sigma^2 I)
only improves by shrinking sigma, and a precision limit sigma_min leaves the
floor 1 - Phi(a / sigma_min)^m.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import linalg, optimize

from .exceptions import DimensionMismatch, DomainError
from .large_deviations import DecayModel, ResolvabilityBound, resolvability_bound
from .resolution_core import AmbiguityTarget
from .special_functions import log_std_normal_cdf, std_normal_cdf, std_normal_quantile, std_normal_sf

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GaussianBelief:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.covariance, dtype=float)
        if mean.size < 1:
            raise DomainError('Gaussian belief needs at least one dimension')
        if cov.shape != (mean.size, mean.size):
            raise DimensionMismatch(f'covariance shape {cov.shape} does not match mean of length {mean.size}')
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise DomainError('Gaussian belief entries must be finite')
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL:
            raise DomainError('covariance is not symmetric')
        try:
            chol = linalg.cholesky(cov, lower=True)
        except linalg.LinAlgError as exc:
            raise DomainError('covariance is not positive definite') from exc
        if not np.all(np.diag(chol) > 0):
            raise DomainError('covariance is not positive definite')
        for arr in (mean, cov, chol):
            arr.flags.writeable = False
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'covariance', cov)
        object.__setattr__(self, 'cholesky', chol)

    @classmethod
    def isotropic(cls, dimension: int, sigma: float, mean=None) -> 'GaussianBelief':
        if not sigma > 0:
            raise DomainError(f'sigma must be positive, got {sigma!r}')
        mean = np.zeros(dimension) if mean is None else mean
        return cls(mean, sigma * sigma * np.eye(dimension))

    @property
    def dimension(self) -> int:
        return int(self.mean.size)

    def shifted(self, delta) -> 'GaussianBelief':
        return GaussianBelief(self.mean + np.asarray(delta, dtype=float), self.covariance)

    def to_dict(self) -> dict:
        return {'mean': self.mean.tolist(), 'cov': self.covariance.tolist()}


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """{s : w.s <= T}; (w, T) matters only up to positive scaling."""
    normal: np.ndarray
    threshold: float

    def __post_init__(self):
        normal = np.array(self.normal, dtype=float).reshape(-1)
        if normal.size < 1 or not np.all(np.isfinite(normal)):
            raise DomainError('half-space normal must be a finite vector')
        if not np.linalg.norm(normal) > 0:
            raise DomainError('half-space normal must be nonzero')
        normal.flags.writeable = False
        object.__setattr__(self, 'normal', normal)
        object.__setattr__(self, 'threshold', float(self.threshold))

    def scaled(self, factor: float) -> 'HalfSpace':
        if not factor > 0:
            raise DomainError('half-space scaling factor must be positive')
        return HalfSpace(self.normal * factor, self.threshold * factor)


@dataclass(frozen=True)
class OrthantPolytope:
    """{s in R^m : s_i <= a for every i}."""
    dimension: int
    threshold: float

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise DomainError(f'polytope dimension must be a positive integer, got {self.dimension!r}')
        if not self.threshold > 0:
            raise DomainError(f'polytope threshold must be positive, got {self.threshold!r}')
        object.__setattr__(self, 'dimension', int(self.dimension))
        object.__setattr__(self, 'threshold', float(self.threshold))


@dataclass(frozen=True)
class PrecisionLimit:
    sigma_min: float

    def __post_init__(self):
        if not self.sigma_min > 0:
            raise DomainError(f'sigma_min must be positive, got {self.sigma_min!r}')
        object.__setattr__(self, 'sigma_min', float(self.sigma_min))

    @classmethod
    def from_margin(cls, polytope: OrthantPolytope, mu_max: float) -> 'PrecisionLimit':
        return cls(polytope.threshold / mu_max)


@dataclass(frozen=True)
class FloorResult:
    epsilon_min: float
    p_max: float
    mu_max: float

    def to_dict(self) -> dict:
        return {'epsilon_min': self.epsilon_min, 'p_max': self.p_max, 'mu_max': self.mu_max}


@dataclass(frozen=True)
class PolytopeResolution:
    info_nats: float
    infeasible: bool
    sigma_target: float | None
    floor: FloorResult

    def to_dict(self) -> dict:
        return {
            'info_nats': None if self.infeasible else self.info_nats,
            'infeasible': self.infeasible,
            'sigma_target': self.sigma_target,
            'floor': self.floor.to_dict(),
        }


@dataclass(frozen=True)
class CurvePoint:
    info_nats: float
    ambiguity: float
    converged: bool = True


@dataclass(frozen=True)
class HalfSpaceCurve:
    delta0: float = 0.0


@dataclass(frozen=True)
class PolytopeCurve:
    sigma0: float
    polytope: OrthantPolytope
    limit: PrecisionLimit


def _check_dims(p: GaussianBelief, other) -> None:
    d = other.dimension if isinstance(other, GaussianBelief) else other.normal.size
    if p.dimension != d:
        raise DimensionMismatch(f'dimension mismatch ({p.dimension} vs {d})')


def _upper_quantile(target: AmbiguityTarget) -> float:
    """Phi^{-1}(1 - eps), evaluated as -Phi^{-1}(eps) to keep small eps exact."""
    if not 0.0 < target.epsilon < 1.0:
        raise DomainError(f'epsilon must lie strictly between 0 and 1, got {target.epsilon!r}')
    return -std_normal_quantile(target.epsilon)


def gaussian_kl(p: GaussianBelief, p0: GaussianBelief) -> float:
    """D(N(mu, S) || N(mu0, S0)) in nats, through Cholesky factors only."""
    _check_dims(p, p0)
    chol0 = p0.cholesky
    # tr(S0^-1 S) = ||L0^-1 L||_F^2
    whitened = linalg.solve_triangular(chol0, p.cholesky, lower=True)
    trace_term = float(np.sum(whitened * whitened))
    diff = linalg.solve_triangular(chol0, p.mean - p0.mean, lower=True)
    quad_term = float(diff @ diff)
    logdet_ratio = 2.0 * float(np.sum(np.log(np.diag(chol0))) - np.sum(np.log(np.diag(p.cholesky))))
    value = 0.5 * (trace_term + quad_term - p.dimension + logdet_ratio)
    return max(0.0, value)


def _projected_std(p: GaussianBelief, halfspace: HalfSpace) -> float:
    # ||L^T w||^2 = w^T S w, positive for PD S and w != 0
    variance = float(np.sum((p.cholesky.T @ halfspace.normal) ** 2))
    assert variance > 0, 'w^T S w must be positive for a PD covariance'
    return math.sqrt(variance)


def halfspace_delta0(p0: GaussianBelief, halfspace: HalfSpace) -> float:
    """Signed Mahalanobis distance from the mean to the boundary, positive inside."""
    _check_dims(p0, halfspace)
    return (halfspace.threshold - float(halfspace.normal @ p0.mean)) / _projected_std(p0, halfspace)


def halfspace_mass(p: GaussianBelief, halfspace: HalfSpace) -> float:
    return std_normal_cdf(halfspace_delta0(p, halfspace))


def halfspace_resolution_info(delta0: float, target) -> float:
    """Mean-shift cost 0.5 * ((Phi^{-1}(1 - eps) - delta0)^+)^2."""
    gap = max(_upper_quantile(AmbiguityTarget.coerce(target)) - float(delta0), 0.0)
    return 0.5 * gap * gap


def halfspace_optimal_shift(p0: GaussianBelief, halfspace: HalfSpace, target) -> np.ndarray:
    target = AmbiguityTarget.coerce(target)
    delta0 = halfspace_delta0(p0, halfspace)
    gap = _upper_quantile(target) - delta0
    if gap <= 0:
        return np.zeros(p0.dimension)
    direction = p0.covariance @ halfspace.normal
    return -gap * direction / _projected_std(p0, halfspace)


def _variance_ratio(delta0: float, target: AmbiguityTarget) -> float | None:
    # rho with delta0 / rho = z; None when no positive rescale reaches z
    z = _upper_quantile(target)
    if delta0 >= z:
        return 1.0
    if delta0 == 0.0 or z == 0.0 or (delta0 > 0) != (z > 0):
        return None
    return delta0 / z


def halfspace_variance_resolution_info(delta0: float, target) -> float:
    """Cost of rescaling the variance along the normal with the mean fixed.

    With rho the standard-deviation ratio along w, the update costs
    0.5 * (rho^2 - 1 - 2 ln rho). A mean at or outside the boundary cannot
    be pulled in by shrinking, which is reported as math.inf.
    """
    rho = _variance_ratio(float(delta0), AmbiguityTarget.coerce(target))
    if rho is None:
        return math.inf
    return 0.5 * (rho * rho - 1.0 - 2.0 * math.log(rho))


def halfspace_rescaled_covariance(p0: GaussianBelief, halfspace: HalfSpace, target) -> np.ndarray:
    """Rank-one update S0 - (1 - rho^2) S0 w w^T S0 / (w^T S0 w)."""
    target = AmbiguityTarget.coerce(target)
    rho = _variance_ratio(halfspace_delta0(p0, halfspace), target)
    if rho is None:
        raise DomainError('no variance rescale along the normal reaches the target')
    u = p0.covariance @ halfspace.normal
    s2 = _projected_std(p0, halfspace) ** 2
    cov = p0.covariance - (1.0 - rho * rho) * np.outer(u, u) / s2
    return 0.5 * (cov + cov.T)


def polytope_log_mass(sigma, polytope: OrthantPolytope):
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise DomainError('sigma must be positive')
    value = polytope.dimension * log_std_normal_cdf(polytope.threshold / sigma)
    return float(value) if np.ndim(value) == 0 else value


def polytope_mass(sigma, polytope: OrthantPolytope):
    """Phi(a / sigma)^m under N(0, sigma^2 I_m)."""
    value = np.exp(polytope_log_mass(sigma, polytope))
    return float(value) if np.ndim(value) == 0 else value


def polytope_ambiguity(sigma, polytope: OrthantPolytope):
    """1 - Phi(a / sigma)^m, accurate when the mass is close to 1."""
    value = -np.expm1(polytope_log_mass(sigma, polytope))
    return float(value) if np.ndim(value) == 0 else value


def epsilon_floor(m, mu_max):
    """1 - Phi(mu_max)^m, broadcasting over m and mu_max."""
    m = np.asarray(m, dtype=float)
    mu_max = np.asarray(mu_max, dtype=float)
    value = -np.expm1(m * log_std_normal_cdf(mu_max))
    return float(value) if np.ndim(value) == 0 else value


def required_semantic_margin(m: int, target) -> float:
    """Phi^{-1}((1 - eps)^{1/m}), the per-coordinate margin the target needs."""
    target = AmbiguityTarget.coerce(target)
    if not 0.0 < target.epsilon < 1.0:
        raise DomainError(f'epsilon must lie strictly between 0 and 1, got {target.epsilon!r}')
    # 1 - (1 - eps)^{1/m}, formed without cancellation
    per_coordinate_miss = -math.expm1(math.log1p(-target.epsilon) / m)
    if per_coordinate_miss >= 0.5:
        raise DomainError('(1 - epsilon)^(1/m) must exceed 1/2 for a finite sigma*')
    return -std_normal_quantile(per_coordinate_miss)


def polytope_sigma_star(polytope: OrthantPolytope, target) -> float:
    return polytope.threshold / required_semantic_margin(polytope.dimension, target)


def ambiguity_floor(polytope: OrthantPolytope, limit: PrecisionLimit) -> FloorResult:
    mu_max = polytope.threshold / limit.sigma_min
    log_p = polytope.dimension * float(log_std_normal_cdf(mu_max))
    return FloorResult(epsilon_min=-math.expm1(log_p), p_max=math.exp(log_p), mu_max=mu_max)


def max_resolvable_dimension(mu_max: float, target) -> int | None:
    """Largest m whose floor 1 - Phi(mu_max)^m stays at or below eps.

    None means every dimension is resolvable (Phi(mu_max) rounds to 1).
    """
    target = AmbiguityTarget.coerce(target)
    log_phi = float(log_std_normal_cdf(mu_max))
    if log_phi == 0.0:
        return None
    ratio = math.log1p(-target.epsilon) / log_phi
    return int(math.floor(ratio * (1.0 + 1e-12)))


def isotropic_shrink_kl(sigma: float, sigma0: float, m: int) -> float:
    """(m/2) [sigma^2/sigma0^2 - 1 + 2 ln(sigma0/sigma)]."""
    ratio = sigma / sigma0
    return 0.5 * m * (ratio * ratio - 1.0 - 2.0 * math.log(ratio))


def polytope_resolution_info(p0_sigma: float, polytope: OrthantPolytope,
                             limit: PrecisionLimit, target) -> PolytopeResolution:
    """Cost of shrinking N(0, sigma0^2 I) until the polytope holds 1 - eps.

    Below the floor the answer is the infeasible variant, not an error.
    """
    target = AmbiguityTarget.coerce(target)
    if not p0_sigma > 0:
        raise DomainError(f'prior sigma must be positive, got {p0_sigma!r}')
    floor = ambiguity_floor(polytope, limit)
    if target.epsilon < floor.epsilon_min:
        return PolytopeResolution(math.inf, True, None, floor)
    if polytope_ambiguity(p0_sigma, polytope) <= target.epsilon:
        return PolytopeResolution(0.0, False, float(p0_sigma), floor)
    sigma = max(polytope_sigma_star(polytope, target), limit.sigma_min)
    if sigma >= p0_sigma:
        return PolytopeResolution(0.0, False, float(p0_sigma), floor)
    m = polytope.dimension
    info = gaussian_kl(GaussianBelief.isotropic(m, sigma), GaussianBelief.isotropic(m, p0_sigma))
    return PolytopeResolution(info, False, sigma, floor)


def gaussian_resolvability_bound(gamma0: float, polytope: OrthantPolytope,
                                 limit: PrecisionLimit, c: float) -> ResolvabilityBound:
    floor = ambiguity_floor(polytope, limit)
    model = DecayModel(gamma0=gamma0, c=c, info_per_sample=0.0, floor=floor.epsilon_min)
    return resolvability_bound(model)


def _halfspace_point(delta0: float, info: float) -> CurvePoint:
    return CurvePoint(info, std_normal_sf(delta0 + math.sqrt(2.0 * info)))


def _polytope_point(curve: PolytopeCurve, info: float) -> CurvePoint:
    m = curve.polytope.dimension
    sigma0 = curve.sigma0
    sigma_lo = curve.limit.sigma_min
    converged = True
    if info == 0.0 or sigma_lo >= sigma0:
        sigma = sigma0
    elif info >= isotropic_shrink_kl(sigma_lo, sigma0, m):
        sigma = sigma_lo
    else:
        sigma, result = optimize.bisect(
            lambda s: isotropic_shrink_kl(s, sigma0, m) - info, sigma_lo, sigma0,
            xtol=1e-15, maxiter=200, full_output=True, disp=False,
        )
        converged = bool(result.converged)
        if not converged:
            logger.warning('sigma(I) bisection did not converge at I=%g', info)
    return CurvePoint(info, polytope_ambiguity(sigma, curve.polytope), converged)


def ambiguity_vs_info_curve(kind, info_grid, workers: int = 1) -> list[CurvePoint]:
    """Best attainable ambiguity for each information budget in info_grid."""
    grid = [float(i) for i in info_grid]
    if any(i < 0 for i in grid):
        raise DomainError('information grid must be nonnegative')
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError('information grid must be ascending')
    if isinstance(kind, HalfSpaceCurve):
        point = lambda info: _halfspace_point(kind.delta0, info)
    elif isinstance(kind, PolytopeCurve):
        if not kind.sigma0 > 0:
            raise DomainError('prior sigma must be positive')
        point = lambda info: _polytope_point(kind, info)
    else:
        raise DomainError(f'unknown curve kind {kind!r}')
    if workers <= 1:
        return [point(info) for info in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(point, grid))
