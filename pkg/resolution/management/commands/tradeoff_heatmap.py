import numpy as np

from resolution.grids import GridSpec, grid_argument
from resolution.management.base import CSV_FLOAT, ResolutionCommand
from resolution.resolution_core import resolution_info_table


class Command(ResolutionCommand):
    help = 'Resolution information over a (prior mass, epsilon) grid, as CSV.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--prior-mass-grid', type=grid_argument,
                            default=GridSpec(1e-3, 0.15, 200, 'log'), help='lo:hi:n[:linear|log]')
        parser.add_argument('--epsilon-grid', type=grid_argument,
                            default=GridSpec(1e-3, 0.25, 200, 'log'), help='lo:hi:n[:linear|log]')
        parser.add_argument('--out', help='CSV output path')

    def run(self, **options):
        priors = self.grid(options, 'prior_mass_grid').values()
        epsilons = self.grid(options, 'epsilon_grid').values()
        blocks = self.sweep_rows(lambda prior: resolution_info_table([prior], epsilons)[0], list(priors))
        # row-major: prior mass outer, epsilon inner
        rows = np.column_stack([
            np.repeat(priors, epsilons.size),
            np.tile(epsilons, priors.size),
            np.concatenate(blocks),
        ])
        self.emit_table(['prior_mass', 'epsilon', 'info_nats'], rows, CSV_FLOAT, options)
