import math

from django.conf import settings
from django.core.management.base import CommandError

from resolution.beliefs import DiscreteBelief, SemanticPartition
from resolution.exceptions import DomainError
from resolution.grids import int_list_argument
from resolution.large_deviations import (
    binary_reduction_log_prob, monte_carlo_ambiguity, sample_complexity_lower_bound, sanov_rate_check,
)
from resolution.management.base import EXIT_VERIFICATION, ResolutionCommand, worker_count


class Command(ResolutionCommand):
    help = ('Check the ambiguity exponent: fit the decay rate of exact binomial tails against '
            'd_bin(q || r) and cross-check the event probability by seeded Monte Carlo.')

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--r', type=float, required=True, help='prior mass of the region')
        parser.add_argument('--q', type=float, required=True, help='required empirical mass, q > r')
        parser.add_argument('--k-grid', type=int_list_argument, default=[500, 1000, 2000],
                            help='comma-separated sample sizes')
        parser.add_argument('--trials', type=int, default=10000, help='Monte Carlo trials')
        parser.add_argument('--mc-k', type=int, default=200, help='sample size of the Monte Carlo cross-check')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--tolerance', type=float, default=None,
                            help='allowed relative rate gap; defaults to RESINFO_LDP_TOLERANCE')
        parser.add_argument('--out', help='JSON report path')

    def run(self, **options):
        r, q = options['r'], options['q']
        if not q > r:
            raise DomainError(f'q must exceed r, got r={r} q={q}')
        k_grid = options['k_grid']
        if isinstance(k_grid, str):
            k_grid = int_list_argument(k_grid)
        tolerance = options['tolerance'] if options['tolerance'] is not None else settings.RESINFO_LDP_TOLERANCE

        estimate = sanov_rate_check(r, q, k_grid)

        # binary reduction: region {0} with mass r against its complement
        prior = DiscreteBelief([r, 1.0 - r])
        partition = SemanticPartition.from_lists([[0], [1]])
        epsilon = 1.0 - q
        mc = monte_carlo_ambiguity(prior, partition, epsilon, options['mc_k'], options['trials'],
                                   options['seed'], chunk=settings.RESINFO_MC_CHUNK, workers=worker_count())
        exact = math.exp(binary_reduction_log_prob(options['mc_k'], r, q))
        within = mc.agrees_with(exact)

        report = {
            **estimate.to_dict(),
            'records': [{'k': k, 'log_prob': lp} for k, lp in zip(estimate.k_values, estimate.log_probs)],
            'tolerance': tolerance,
            'passed': estimate.relative_gap <= tolerance,
            'sample_complexity': (sample_complexity_lower_bound(estimate.theoretical_rate, epsilon)
                                  if 0.0 < epsilon < 1.0 else None),
            'monte_carlo': {
                **mc.to_dict(),
                'seed': options['seed'],
                'exact_probability': exact,
                'exact_stderr': math.sqrt(exact * (1.0 - exact) / mc.trials),
                'within_3_stderr': within,
            },
        }
        if options['out']:
            self.write_json(options['out'], report)
        self.emit(report, options)
        if not report['passed']:
            raise CommandError(
                f'fitted rate {estimate.fitted_rate:.6g} differs from d_bin {estimate.theoretical_rate:.6g} '
                f'by {estimate.relative_gap:.2%} (tolerance {tolerance:.2%})',
                returncode=EXIT_VERIFICATION,
            )
