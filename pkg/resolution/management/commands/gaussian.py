from resolution.exceptions import DomainError
from resolution.gaussian_geometry import (
    PrecisionLimit, ambiguity_floor, gaussian_kl, gaussian_resolvability_bound,
    halfspace_delta0, halfspace_mass, halfspace_optimal_shift, halfspace_resolution_info,
    halfspace_variance_resolution_info, max_resolvable_dimension, polytope_resolution_info,
    polytope_sigma_star,
)
from resolution.large_deviations import DecayModel, resolvability_bound
from resolution.management.base import ResolutionCommand, finite_or_none, input_error
from resolution.resolution_core import AmbiguityTarget
from resolution.serializers import GaussianBeliefSerializer, HalfSpaceSerializer, OrthantPolytopeSerializer


def _add_limit_arguments(parser):
    group = parser.add_mutually_exclusive_group()
    group.add_argument('--sigma-min', type=float, help='precision limit sigma_min')
    group.add_argument('--mu-max', type=float, help='maximum semantic margin a / sigma_min')


class Command(ResolutionCommand):
    help = 'Resolution information under Gaussian posterior families.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        subparsers = parser.add_subparsers(dest='subcommand', required=True)
        # usage errors in a subcommand exit 2 like the top-level parser
        add = lambda name, **kwargs: subparsers.add_parser(
            name, called_from_command_line=parser.called_from_command_line, **kwargs)

        kl = add('kl', help='KL divergence between two Gaussian beliefs')
        kl.add_argument('--p', required=True, help='JSON {"mean": [...], "cov": [[...]]}')
        kl.add_argument('--p0', required=True, help='JSON {"mean": [...], "cov": [[...]]}')

        halfspace = add('halfspace', help='half-space mass, shift and resolution cost')
        halfspace.add_argument('--p0', required=True, help='JSON {"mean": [...], "cov": [[...]]}')
        halfspace.add_argument('--halfspace', required=True, help='JSON {"w": [...], "T": t}')
        halfspace.add_argument('--epsilon', type=float, required=True)

        polytope = add('polytope', help='cost of shrinking an isotropic prior into the polytope')
        polytope.add_argument('--polytope', required=True, help='JSON {"m": m, "a": a}')
        polytope.add_argument('--sigma0', type=float, required=True)
        polytope.add_argument('--epsilon', type=float, required=True)
        _add_limit_arguments(polytope)

        floor = add('floor', help='irreducible ambiguity floor of the polytope')
        floor.add_argument('--polytope', required=True, help='JSON {"m": m, "a": a}')
        floor.add_argument('--epsilon', type=float, help='compare a target against the floor')
        _add_limit_arguments(floor)

        resolvability = add('resolvability', help='generative resolvability bound')
        resolvability.add_argument('--gamma0', type=float, required=True, help='prior ambiguity')
        resolvability.add_argument('--c', type=float, required=True, help='concentration constant')
        resolvability.add_argument('--floor', type=float, help='residual ambiguity floor')
        resolvability.add_argument('--polytope', help='JSON {"m": m, "a": a}; floor taken from the precision limit')
        _add_limit_arguments(resolvability)

    def run(self, **options):
        return getattr(self, f'run_{options["subcommand"]}')(options)

    def _limit(self, options, polytope):
        if options.get('sigma_min') is not None:
            return PrecisionLimit(options['sigma_min'])
        if options.get('mu_max') is not None:
            if not options['mu_max'] > 0:
                raise DomainError('mu_max must be positive')
            return PrecisionLimit.from_margin(polytope, options['mu_max'])
        raise input_error('one of --sigma-min or --mu-max is required')

    def run_kl(self, options):
        p = self.load_json(options['p'], GaussianBeliefSerializer, 'p')
        p0 = self.load_json(options['p0'], GaussianBeliefSerializer, 'p0')
        self.emit({'kl_nats': gaussian_kl(p, p0)}, options)

    def run_halfspace(self, options):
        p0 = self.load_json(options['p0'], GaussianBeliefSerializer, 'p0')
        halfspace = self.load_json(options['halfspace'], HalfSpaceSerializer, 'halfspace')
        target = AmbiguityTarget(options['epsilon'])
        delta0 = halfspace_delta0(p0, halfspace)
        shift = halfspace_optimal_shift(p0, halfspace, target)
        self.emit({
            'delta0': delta0,
            'prior_mass': halfspace_mass(p0, halfspace),
            'info_nats': halfspace_resolution_info(delta0, target),
            'optimal_shift': shift.tolist(),
            'shifted_mass': halfspace_mass(p0.shifted(shift), halfspace),
            'variance_rescale_info_nats': finite_or_none(halfspace_variance_resolution_info(delta0, target)),
        }, options)

    def run_polytope(self, options):
        polytope = self.load_json(options['polytope'], OrthantPolytopeSerializer, 'polytope')
        limit = self._limit(options, polytope)
        target = AmbiguityTarget(options['epsilon'])
        result = polytope_resolution_info(options['sigma0'], polytope, limit, target)
        payload = result.to_dict()
        try:
            payload['sigma_star'] = polytope_sigma_star(polytope, target)
        except DomainError:
            payload['sigma_star'] = None
        self.emit(payload, options)

    def run_floor(self, options):
        polytope = self.load_json(options['polytope'], OrthantPolytopeSerializer, 'polytope')
        floor = ambiguity_floor(polytope, self._limit(options, polytope))
        payload = floor.to_dict()
        if options.get('epsilon') is not None:
            target = AmbiguityTarget(options['epsilon'])
            payload['epsilon'] = target.epsilon
            payload['infeasible'] = target.epsilon < floor.epsilon_min
            payload['max_resolvable_dimension'] = max_resolvable_dimension(floor.mu_max, target)
        self.emit(payload, options)

    def run_resolvability(self, options):
        if options.get('floor') is not None:
            model = DecayModel(gamma0=options['gamma0'], c=options['c'], info_per_sample=0.0, floor=options['floor'])
            bound = resolvability_bound(model)
        elif options.get('polytope'):
            polytope = self.load_json(options['polytope'], OrthantPolytopeSerializer, 'polytope')
            bound = gaussian_resolvability_bound(options['gamma0'], polytope, self._limit(options, polytope),
                                                 options['c'])
        else:
            raise input_error('give either --floor or --polytope with a precision limit')
        self.emit(bound.to_dict(), options)
