from django.conf import settings
from django.core.management.base import CommandError

from resolution.beliefs import ambiguity
from resolution.exceptions import ConvergenceError
from resolution.management.base import EXIT_VERIFICATION, ResolutionCommand
from resolution.resolution_core import (
    AmbiguityTarget, ProjectionSolverConfig, brute_force_projection, resolution_info_partition,
)
from resolution.serializers import DiscreteBeliefSerializer, SemanticPartitionSerializer


class Command(ResolutionCommand):
    help = 'Resolution information of a discrete prior over a semantic partition.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--belief', required=True, help='JSON {"probs": [...]} (file path or inline)')
        parser.add_argument('--partition', required=True, help='JSON {"regions": [[...], ...]} (file path or inline)')
        parser.add_argument('--epsilon', type=float, required=True, help='target ambiguity, 0 <= eps < 1')
        parser.add_argument('--oracle', action='store_true',
                            help='also solve the binding projection numerically (alphabets up to 8 states)')

    def run(self, **options):
        belief = self.load_json(options['belief'], DiscreteBeliefSerializer, 'belief')
        partition = self.load_json(options['partition'], SemanticPartitionSerializer, 'partition',
                                   alphabet_size=belief.size)
        target = AmbiguityTarget(options['epsilon'])
        result = resolution_info_partition(belief, partition, target)

        payload = {'epsilon': target.epsilon, 'prior_ambiguity': ambiguity(belief, partition), **result.to_dict()}
        lines = [
            f'info_nats: {result.info_nats:.17g}',
            f'binding_region: {result.binding_region_index}',
            f'feasible_at_prior: {str(result.feasible_at_prior).lower()}',
            'achieving_posterior: ' + ','.join(f'{v:.17g}' for v in result.achieving_posterior.probs),
        ]
        if options['oracle']:
            oracle = self._oracle(belief, partition.regions[result.binding_region_index], target)
            payload['oracle_info_nats'] = oracle
            lines.append(f'oracle_info_nats: {oracle:.17g}')
        self.emit(payload, options, lines)

    def _oracle(self, belief, region, target):
        config = ProjectionSolverConfig(restarts=settings.RESINFO_BRUTE_FORCE_RESTARTS)
        try:
            return brute_force_projection(belief, region, target, config=config)
        except ConvergenceError as exc:
            raise CommandError(f'projection oracle did not converge (best value {exc.best_value})',
                               returncode=EXIT_VERIFICATION) from exc
